#include "oho/sweep.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <thread>

#include "oho/errors.hpp"

namespace oho {

namespace {
constexpr std::uint64_t kTrialSaltBase = 1000;
}

SweepReport sweep_random(const RunConfig& base, int n_trials,
                         std::pair<double, double> alpha_range,
                         std::pair<double, double> lambda_range, double target_loss,
                         std::uint64_t master_seed, int workers) {
  if (n_trials < 0) throw ConfigError("trials must be >= 0", "trials");
  if (alpha_range.second < alpha_range.first || lambda_range.second < lambda_range.first)
    throw ConfigError("sweep ranges must be ordered", "sweep");
  base.validate();

  SweepReport report;
  report.target_loss = target_loss;
  report.trials.resize(static_cast<std::size_t>(n_trials));
  if (n_trials == 0) return report;

  const DatasetSplit split = load_dataset(base);

  auto run_trial = [&](int t) {
    Rng rng(derive_seed(master_seed, kTrialSaltBase + static_cast<std::uint64_t>(t)));
    const double alpha = rng.uniform(alpha_range.first, alpha_range.second);
    const double lambda = rng.uniform(lambda_range.first, lambda_range.second);

    RunConfig cfg = base;
    cfg.alpha0 = alpha;
    cfg.lambda0 = lambda;
    if (cfg.scheduler) cfg.scheduler->base_lr = alpha;

    const auto t0 = std::chrono::steady_clock::now();
    const RunTrace trace = run_on_split(cfg, split);
    const auto t1 = std::chrono::steady_clock::now();

    SweepTrialResult r;
    r.trial = t;
    r.alpha0 = alpha;
    r.lambda0 = lambda;
    r.steps = static_cast<std::int64_t>(trace.records.size());
    r.final_val_loss = trace.final_val_loss();
    r.halted = trace.halt.has_value();
    for (const auto& rec : trace.records) {
      if (rec.val_loss <= target_loss) {
        r.hit_step = rec.step;
        break;
      }
    }
    r.wallclock_s = std::chrono::duration<double>(t1 - t0).count();
    report.trials[static_cast<std::size_t>(t)] = r;
  };

  const int pool = std::max(1, std::min(workers, n_trials));
  if (pool == 1) {
    for (int t = 0; t < n_trials; ++t) run_trial(t);
  } else {
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(pool));
    for (int w = 0; w < pool; ++w) {
      threads.emplace_back([&]() {
        for (int t = next.fetch_add(1); t < n_trials && !failed; t = next.fetch_add(1)) {
          try {
            run_trial(t);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            failed = true;
          }
        }
      });
    }
    for (auto& th : threads) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }
  return report;
}

void write_sweep_csv(const SweepReport& report, std::ostream& out) {
  out << "trial,alpha0,lambda0,steps,final_val_loss,hit_step,halted\r\n";
  for (const auto& r : report.trials) {
    out << r.trial << ',' << format_double(r.alpha0) << ',' << format_double(r.lambda0) << ','
        << r.steps << ',' << format_double(r.final_val_loss) << ',' << r.hit_step << ','
        << (r.halted ? 1 : 0) << "\r\n";
  }
}

void write_sweep_csv_file(const SweepReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_sweep_csv(report, out);
  if (!out) throw IoError("write failure on " + path);
}

}  // namespace oho
