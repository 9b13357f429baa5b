#ifndef OHO_SWEEP_HPP
#define OHO_SWEEP_HPP

#include <ostream>
#include <utility>

#include "oho/harness.hpp"

namespace oho {

struct SweepTrialResult {
  int trial = 0;
  double alpha0 = 0.0;
  double lambda0 = 0.0;
  std::int64_t steps = 0;
  double final_val_loss = 0.0;
  std::int64_t hit_step = -1;  // first step whose validation loss <= target
  bool halted = false;
  double wallclock_s = 0.0;  // excludes dataset loading; not part of the CSV
};

struct SweepReport {
  double target_loss = 0.0;
  std::vector<SweepTrialResult> trials;
};

// Random search over initial hyperparameters, uniform in the given ranges.
// Trials share the template's dataset and run seed and differ only in phi0;
// results are deterministic under master_seed regardless of worker count.
SweepReport sweep_random(const RunConfig& base, int n_trials,
                         std::pair<double, double> alpha_range,
                         std::pair<double, double> lambda_range, double target_loss,
                         std::uint64_t master_seed, int workers = 1);

// Header: trial,alpha0,lambda0,steps,final_val_loss,hit_step,halted
void write_sweep_csv(const SweepReport& report, std::ostream& out);
void write_sweep_csv_file(const SweepReport& report, const std::string& path);

}  // namespace oho

#endif  // OHO_SWEEP_HPP
