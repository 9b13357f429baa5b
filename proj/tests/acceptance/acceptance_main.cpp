// Acceptance suite: one pass/fail line per criterion. Empirical trend checks
// print FLAG instead of FAIL when the trend does not hold; everything else is
// a hard assertion. Exit code is the number of failed criteria.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "oho/config.hpp"
#include "oho/dataset.hpp"
#include "oho/errors.hpp"
#include "oho/harness.hpp"
#include "oho/optimizer.hpp"
#include "oho/sweep.hpp"
#include "support/oracles.hpp"

using namespace oho;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  bool flagged = false;
  std::string detail;
};

int g_failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& fn) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    o = fn();
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const char* tag = o.ok ? (o.flagged ? "FLAG" : "PASS") : "FAIL";
  if (!o.ok) ++g_failures;
  std::printf("[%s] criterion %2d: %s (%.2fs)%s%s\n", tag, id, name.c_str(), seconds,
              o.detail.empty() ? "" : " -- ", o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

double variance(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size());
}

double final_epoch_val(const RunTrace& t) {
  if (t.records.empty()) return std::numeric_limits<double>::infinity();
  const int last = t.records.back().epoch;
  double s = 0.0;
  int n = 0;
  for (const auto& r : t.records)
    if (r.epoch == last) {
      s += r.val_loss;
      ++n;
    }
  return s / n;
}

Minibatch random_batch(int n, int dim, int classes, Rng& rng) {
  Minibatch b;
  b.inputs = DenseMatrix(n, dim);
  for (double& v : b.inputs.data) v = rng.uniform(-1.0, 1.0);
  b.labels.resize(n);
  for (int i = 0; i < n; ++i) b.labels[i] = static_cast<int>(rng.below(classes));
  return b;
}

// --- 1: hypergradient exactness on the quadratic model ---------------------
Outcome criterion_1() {
  QuadraticModel model({2.0, 4.0});
  auto grouping = make_grouping(*model.layout(), GroupingMode::global);
  ParamVector theta0 = make_param_vector(model.layout());
  theta0.values = {1.0, 1.0};
  HyperVector phi = make_hyper(grouping, 0.1, 0.01);
  const int T = 30;
  std::vector<Minibatch> batches(T, oracles::dummy_batch());

  OhoState state = make_oho_state(theta0, phi, grouping);
  MetaConfig meta;
  meta.eta = 0.0;
  for (const auto& b : batches)
    oho_train_step(state, model, grouping, b, [&]() { return b; }, meta);

  ParamVector vg = make_param_vector(model.layout());
  model.loss_grad(state.theta, batches[0], vg);
  const auto hg = hypergradient(state.gamma, vg);
  const auto fd =
      oracles::fd_hypergradient(model, grouping, theta0, phi, batches, batches[0], 1e-6);

  double worst = 0.0;
  for (std::size_t c = 0; c < hg.size(); ++c)
    worst = std::max(worst, std::fabs(hg[c] - fd[c]) / std::fabs(fd[c]));
  Outcome o;
  o.ok = worst <= 1e-6;
  o.detail = "max rel err " + fmt(worst) + " (tol 1e-6)";
  return o;
}

// --- 2: hypergradient exactness on a 4-8-2 network, 200 samples, T=30 ------
Outcome criterion_2() {
  Rng rng(29);
  NetworkSpec spec{{4, 8, 2}};
  MlpModel model(spec);
  auto grouping = make_grouping(*model.layout(), GroupingMode::global);
  ParamVector theta0 = init_params(spec, rng);
  HyperVector phi = make_hyper(grouping, 0.05, 0.01);
  const int T = 30;

  Minibatch all = random_batch(200, 4, 2, rng);
  std::vector<Minibatch> batches;
  for (int t = 0; t < T; ++t) {
    std::vector<std::size_t> idx(50);
    for (std::size_t i = 0; i < 50; ++i) idx[i] = (static_cast<std::size_t>(t) * 50 + i) % 200;
    batches.push_back(gather(all, idx));
  }
  Minibatch val = random_batch(100, 4, 2, rng);
  const auto fd = oracles::fd_hypergradient(model, grouping, theta0, phi, batches, val, 1e-6);

  auto run_engine = [&](const HvpFn* override_fn) {
    OhoState state = make_oho_state(theta0, phi, grouping);
    MetaConfig meta;
    meta.eta = 0.0;
    for (const auto& b : batches)
      oho_train_step(state, model, grouping, b, [&]() { return val; }, meta, HvpPolicy{},
                     override_fn);
    ParamVector vg = make_param_vector(model.layout());
    model.loss_grad(state.theta, val, vg);
    return hypergradient(state.gamma, vg);
  };

  const auto hg_fd = run_engine(nullptr);
  oracles::DenseHessianHvp oracle_hvp(model);
  const HvpFn dense = oracle_hvp.fn();
  const auto hg_dense = run_engine(&dense);

  const double err_fd = oracles::rel_error_inf(hg_fd, fd);
  const double err_dense = oracles::rel_error_inf(hg_dense, fd);
  Outcome o;
  o.ok = err_fd <= 2e-2 && err_dense <= 1e-4;
  o.detail = "finite-diff hvp rel err " + fmt(err_fd) +
             " (tol 2e-2), dense-Hessian hvp rel err " + fmt(err_dense) + " (tol 1e-4)";
  return o;
}

// --- 3: recursion equals unrolled forward accumulation ---------------------
Outcome criterion_3() {
  Outcome o;
  {  // quadratic, |theta| = 50, T = 20
    Rng rng(7);
    std::vector<double> curv(50);
    for (double& a : curv) a = 0.5 + 2.5 * rng.uniform();
    QuadraticModel model(curv);
    auto grouping = make_grouping(*model.layout(), GroupingMode::global);
    ParamVector theta0 = make_param_vector(model.layout());
    for (double& v : theta0.values) v = rng.normal();
    HyperVector phi = make_hyper(grouping, 0.08, 0.02);
    const int T = 20;
    std::vector<Minibatch> batches(T, oracles::dummy_batch());

    OhoState state = make_oho_state(theta0, phi, grouping);
    MetaConfig meta;
    meta.eta = 0.0;
    for (const auto& b : batches)
      oho_train_step(state, model, grouping, b, [&]() { return b; }, meta);
    auto unrolled = oracles::unrolled_forward(model, grouping, theta0, phi, batches);

    double diff = 0.0;
    for (std::size_t c = 0; c < grouping.phi_size(); ++c) {
      std::vector<double> col(state.gamma.col(c), state.gamma.col(c) + state.gamma.rows);
      diff = std::max(diff, oracles::max_abs_diff(col, unrolled.tangents[c].values));
    }
    o.ok = diff <= 1e-8;
    o.detail = "quadratic max abs diff " + fmt(diff) + " (tol 1e-8)";
  }
  {  // network with the shared finite-difference hvp, layerwise groups
    Rng rng(19);
    NetworkSpec spec{{3, 4, 2}};
    MlpModel model(spec);
    auto grouping = make_grouping(*model.layout(), GroupingMode::layerwise);
    ParamVector theta0 = init_params(spec, rng);
    HyperVector phi = make_hyper(grouping, 0.05, 0.01);
    const int T = 20;
    std::vector<Minibatch> batches;
    for (int t = 0; t < T; ++t) batches.push_back(random_batch(8, 3, 2, rng));

    OhoState state = make_oho_state(theta0, phi, grouping);
    MetaConfig meta;
    meta.eta = 0.0;
    for (const auto& b : batches)
      oho_train_step(state, model, grouping, b, [&]() { return b; }, meta);
    auto unrolled = oracles::unrolled_forward(model, grouping, theta0, phi, batches);

    double diff = 0.0;
    for (std::size_t c = 0; c < grouping.phi_size(); ++c) {
      std::vector<double> col(state.gamma.col(c), state.gamma.col(c) + state.gamma.rows);
      diff = std::max(diff, oracles::max_abs_diff(col, unrolled.tangents[c].values));
    }
    o.ok = o.ok && diff <= 1e-4;
    o.detail += ", network max abs diff " + fmt(diff) + " (tol 1e-4)";
  }
  return o;
}

// --- 4: gradient vs central differences over a 20-case grid ----------------
Outcome criterion_4() {
  struct Case {
    std::vector<int> sizes;
    int batch;
    std::uint64_t seed;
  };
  const std::vector<Case> grid = {
      {{2, 3}, 1, 1},        {{2, 3}, 5, 2},        {{3, 4, 2}, 3, 3},
      {{3, 4, 2}, 8, 4},     {{4, 8, 2}, 6, 5},     {{4, 8, 2}, 2, 6},
      {{5, 5, 5}, 4, 7},     {{5, 5, 5}, 9, 8},     {{2, 6, 3}, 7, 9},
      {{6, 4, 3}, 5, 10},    {{4, 4, 4, 4}, 3, 11}, {{4, 4, 4, 4}, 6, 12},
      {{3, 8, 8, 2}, 5, 13}, {{7, 3, 2}, 4, 14},    {{2, 2, 2}, 2, 15},
      {{8, 6, 5}, 6, 16},    {{3, 3}, 10, 17},      {{5, 7, 4}, 1, 18},
      {{6, 6, 2}, 12, 19},   {{4, 5, 6, 3}, 4, 20}};

  double worst = 0.0;
  for (const auto& c : grid) {
    Rng rng(c.seed);
    NetworkSpec spec{c.sizes};
    ParamVector theta = init_params(spec, rng);
    Minibatch batch = random_batch(c.batch, c.sizes.front(), c.sizes.back(), rng);
    ParamVector grad = make_param_vector(theta.layout);
    loss_grad(spec, theta, batch, grad);
    auto fd = oracles::fd_gradient(
        [&](const ParamVector& p) { return forward_loss(spec, p, batch); }, theta);
    worst = std::max(worst, oracles::rel_error_inf(grad.values, fd));
  }
  Outcome o;
  o.ok = worst <= 1e-5;
  o.detail = "20 cases, max rel err " + fmt(worst) + " (tol 1e-5)";
  return o;
}

// --- 5: zero meta rate reproduces the fixed scheduler ----------------------
RunConfig small_blobs_config() {
  RunConfig cfg;
  cfg.network.layer_sizes = {8, 16, 3};
  cfg.data.source = DataConfig::Source::blobs;
  cfg.data.blobs = {3, 200, 8, 0.6, 120, 60, std::nullopt};
  cfg.alpha0 = 0.05;
  cfg.lambda0 = 0.001;
  cfg.epochs = 3;
  cfg.batch_size = 48;
  cfg.val_batch_size = 60;
  cfg.seed = 71;
  return cfg;
}

Outcome criterion_5() {
  RunConfig oho_cfg = small_blobs_config();
  MetaConfig meta;
  meta.eta = 0.0;
  oho_cfg.oho = meta;

  RunConfig fixed_cfg = small_blobs_config();
  SchedulerSpec sched;
  sched.kind = SchedulerKind::fixed;
  sched.base_lr = fixed_cfg.alpha0;
  fixed_cfg.scheduler = sched;

  const RunTrace a = run(oho_cfg);
  const RunTrace b = run(fixed_cfg);

  Outcome o;
  if (a.records.size() != b.records.size()) {
    o.ok = false;
    o.detail = "trace lengths differ";
    return o;
  }
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const auto& ra = a.records[i];
    const auto& rb = b.records[i];
    const bool same = ra.step == rb.step && ra.epoch == rb.epoch &&
                      ra.train_loss == rb.train_loss && ra.val_loss == rb.val_loss &&
                      ra.phi == rb.phi && ra.test_loss == rb.test_loss;
    if (!same) {
      o.ok = false;
      o.detail = "first mismatch at step " + std::to_string(ra.step);
      return o;
    }
  }
  o.detail = std::to_string(a.records.size()) + " steps bit-identical";
  return o;
}

// --- 6: generalization trend over random initial hyperparameters -----------
Outcome criterion_6() {
  int seeds_ok = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng phi_rng(derive_seed(900 + seed, 1));
    std::vector<double> oho_losses, fixed_losses;
    for (int trial = 0; trial < 10; ++trial) {
      const double a0 = phi_rng.uniform(0.0001, 0.2);
      const double l0 = phi_rng.uniform(0.0, 0.0001);

      RunConfig base;
      base.network.layer_sizes = {8, 16, 3};
      base.data.source = DataConfig::Source::blobs;
      base.data.blobs = {3, 200, 8, 0.6, 120, 60, std::nullopt};
      base.alpha0 = a0;
      base.lambda0 = l0;
      base.epochs = 8;
      base.batch_size = 48;
      base.val_batch_size = 60;
      base.seed = seed;

      RunConfig oho_cfg = base;
      MetaConfig meta;
      meta.eta = 1e-4;
      oho_cfg.oho = meta;
      RunConfig fixed_cfg = base;
      SchedulerSpec sched;
      sched.kind = SchedulerKind::fixed;
      sched.base_lr = a0;
      fixed_cfg.scheduler = sched;

      const DatasetSplit split = load_dataset(oho_cfg);
      oho_losses.push_back(final_epoch_val(run_on_split(oho_cfg, split)));
      fixed_losses.push_back(final_epoch_val(run_on_split(fixed_cfg, split)));
    }
    const bool var_ok = variance(oho_losses) < variance(fixed_losses);
    const bool med_ok = median(oho_losses) <= median(fixed_losses);
    if (var_ok && med_ok) ++seeds_ok;
  }
  Outcome o;
  o.ok = seeds_ok >= 3;
  o.detail = "lower variance and median on " + std::to_string(seeds_ok) + "/5 seeds (need >= 3)";
  return o;
}

// --- 7: recovery from a learning-rate perturbation --------------------------
Outcome criterion_7() {
  int recovered = 0, beats_frozen = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    RunConfig cfg;
    cfg.network.layer_sizes = {16, 16, 3};
    cfg.data.source = DataConfig::Source::blobs;
    cfg.data.blobs = {3, 200, 16, 0.9, 120, 40, std::nullopt};
    cfg.alpha0 = 0.05;
    cfg.lambda0 = 0.0;
    cfg.epochs = 10;
    cfg.batch_size = 4;
    cfg.val_batch_size = 60;
    cfg.seed = seed;
    MetaConfig meta;
    meta.eta = 2e-3;
    cfg.oho = meta;
    PerturbationSchedule p;
    p.target = HyperKind::alpha;
    p.value = 0.2;
    p.epochs = {5};
    cfg.perturbations = {p};

    auto [main_t, frozen_t] = run_with_frozen_companion(cfg);
    if (main_t.halt || frozen_t.halt) continue;

    double alpha_pre = 0.0;
    for (const auto& r : main_t.records)
      if (r.epoch == 4) alpha_pre = r.phi[0];
    double best = std::numeric_limits<double>::infinity();
    double post_main = 0.0, post_frozen = 0.0;
    for (std::size_t i = 0; i < main_t.records.size(); ++i) {
      const auto& r = main_t.records[i];
      if (r.epoch >= 5 && r.epoch < 8) best = std::min(best, std::fabs(r.phi[0] - alpha_pre));
      if (r.epoch >= 5) {
        post_main += r.val_loss;
        post_frozen += frozen_t.records[i].val_loss;
      }
    }
    if (best < 0.5 * std::fabs(0.2 - alpha_pre)) ++recovered;
    if (post_main <= post_frozen) ++beats_frozen;
  }
  Outcome o;
  o.ok = recovered >= 3 && beats_frozen >= 3;
  o.detail = "recovered on " + std::to_string(recovered) +
             "/5 seeds, beat the frozen companion on " + std::to_string(beats_frozen) +
             "/5 (need >= 3 each)";
  return o;
}

// --- 8: reset-horizon ordering (flagged trend) ------------------------------
Outcome criterion_8() {
  std::vector<double> none, r1000, r1;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (std::int64_t interval : {std::int64_t{0}, std::int64_t{1000}, std::int64_t{1}}) {
      RunConfig cfg;
      cfg.network.layer_sizes = {16, 16, 3};
      cfg.data.source = DataConfig::Source::blobs;
      cfg.data.blobs = {3, 200, 16, 0.9, 120, 40, std::nullopt};
      cfg.alpha0 = 0.004;
      cfg.lambda0 = 0.0;
      cfg.epochs = 12;
      cfg.batch_size = 4;  // 120 steps per epoch: the 1000-step reset fires mid-run
      cfg.val_batch_size = 60;
      cfg.seed = seed;
      MetaConfig meta;
      meta.eta = 1e-4;
      meta.reset_interval = interval;
      cfg.oho = meta;
      const RunTrace t = run(cfg);
      const double v = final_epoch_val(t);
      if (t.halt || !std::isfinite(v)) {
        Outcome o;
        o.ok = false;
        o.detail = "run halted or non-finite at seed " + std::to_string(seed);
        return o;
      }
      (interval == 0 ? none : interval == 1000 ? r1000 : r1).push_back(v);
    }
  }
  const double m0 = median(none), m1000 = median(r1000), m1 = median(r1);
  const bool trend = m0 <= m1000 && m1000 <= m1;
  Outcome o;
  o.flagged = !trend;
  o.detail = "median final val loss: no-reset " + fmt(m0) + " <= reset-1000 " + fmt(m1000) +
             " <= reset-1 " + fmt(m1) + (trend ? " holds" : " VIOLATED (flagged trend)");
  return o;
}

// --- 9: influence finiteness and gradient decorrelation at eta 5e-6 --------
Minibatch synth_digits(int classes, int per_class, std::uint64_t seed) {
  // 28x28 images built from dense per-class prototypes, the stand-in for
  // MNIST when the real files are not on disk.
  Rng rng(seed);
  const int dim = 784;
  std::vector<std::vector<double>> proto(classes, std::vector<double>(dim, 0.0));
  for (int c = 0; c < classes; ++c)
    for (int j = 0; j < dim; ++j)
      if (rng.uniform() < 0.2) proto[c][j] = 0.4 + 0.6 * rng.uniform();
  Minibatch out;
  out.inputs = DenseMatrix(static_cast<std::size_t>(classes) * per_class, dim);
  out.labels.resize(out.inputs.rows);
  std::size_t row = 0;
  for (int c = 0; c < classes; ++c)
    for (int k = 0; k < per_class; ++k, ++row) {
      double* x = out.inputs.row(row);
      for (int j = 0; j < dim; ++j) {
        const double v = proto[c][j] + 0.25 * rng.normal();
        x[j] = std::clamp(v, 0.0, 1.0);
      }
      out.labels[row] = c;
    }
  return out;
}

void flip_labels(Minibatch& data, int classes, double rate, std::uint64_t seed) {
  Rng rng(seed);
  for (int& y : data.labels)
    if (rng.uniform() < rate) y = static_cast<int>(rng.below(classes));
}

Outcome criterion_9(const fs::path& tmp) {
  Minibatch pool = synth_digits(10, 600, 777);
  flip_labels(pool, 10, 0.02, 555);
  const Minibatch test = synth_digits(10, 100, 778);
  const auto img = (tmp / "digits-train-images").string();
  const auto lbl = (tmp / "digits-train-labels").string();
  const auto timg = (tmp / "digits-test-images").string();
  const auto tlbl = (tmp / "digits-test-labels").string();
  write_idx_images(img, quantize_unit_to_u8(pool.inputs), 6000, 28, 28);
  write_idx_labels(lbl, std::vector<std::uint8_t>(pool.labels.begin(), pool.labels.end()));
  write_idx_images(timg, quantize_unit_to_u8(test.inputs), 1000, 28, 28);
  write_idx_labels(tlbl, std::vector<std::uint8_t>(test.labels.begin(), test.labels.end()));

  RunConfig cfg;
  cfg.network.layer_sizes = {784, 128, 128, 10};
  cfg.data.source = DataConfig::Source::idx;
  cfg.data.idx = {img, lbl, timg, tlbl, 1000, 0};  // 5000 train / 1000 validation
  cfg.alpha0 = 0.01;
  cfg.lambda0 = 0.0;
  cfg.epochs = 8;
  cfg.batch_size = 50;
  cfg.val_batch_size = 100;
  cfg.seed = 1;
  cfg.diagnostics.window = 100;
  MetaConfig meta;
  meta.eta = 5e-6;
  cfg.oho = meta;

  const RunTrace t = run(cfg);

  Outcome o;
  if (t.halt) {
    o.ok = false;
    o.detail = "run halted at step " + std::to_string(t.halt->step);
    return o;
  }
  double max_norm = 0.0;
  bool finite = true;
  for (const auto& r : t.records)
    for (double v : r.gamma_sq_norms) {
      if (!std::isfinite(v)) finite = false;
      max_norm = std::max(max_norm, v);
    }
  const int last = t.records.back().epoch;
  double gc_peak = 0.0;
  for (const auto& r : t.records)
    if (r.epoch == last && r.gc) gc_peak = std::max(gc_peak, std::fabs(r.gc->mean));

  o.ok = finite;  // the hard assertion
  const bool decorrelated = gc_peak < 0.1;
  o.flagged = !decorrelated;
  o.detail = std::string("influence norms finite: ") + (finite ? "yes" : "NO") +
             ", peak squared norm " + fmt(max_norm) + "; final-epoch |gc mean| peak " +
             fmt(gc_peak) +
             (decorrelated ? " < 0.1" : " (flagged trend |gc| < 0.1 not met at this scale)");
  return o;
}

// --- 10: idx conformance and corruption offsets -----------------------------
Outcome criterion_10(const fs::path& tmp) {
  Rng rng(99);
  const std::uint32_t n = 7, rows = 5, cols = 4;
  std::vector<std::uint8_t> pixels(n * rows * cols);
  for (auto& p : pixels) p = static_cast<std::uint8_t>(rng.below(256));
  std::vector<std::uint8_t> labels(n);
  for (auto& l : labels) l = static_cast<std::uint8_t>(rng.below(10));

  const auto img = (tmp / "conf-images").string();
  const auto lbl = (tmp / "conf-labels").string();
  write_idx_images(img, pixels, n, rows, cols);
  write_idx_labels(lbl, labels);

  const Minibatch data = load_idx(img, lbl);
  bool exact = data.inputs.rows == n && data.inputs.cols == rows * cols;
  for (std::size_t i = 0; exact && i < pixels.size(); ++i)
    exact = data.inputs.data[i] == static_cast<double>(pixels[i]) / 255.0;
  for (std::size_t i = 0; exact && i < labels.size(); ++i)
    exact = data.labels[i] == static_cast<int>(labels[i]);

  auto bytes_of = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
  };
  auto write_bytes = [&tmp](const std::string& name, const std::vector<std::uint8_t>& bytes) {
    const std::string p = (tmp / name).string();
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    return p;
  };
  const auto good_img = bytes_of(img);

  int rejected = 0;
  auto expect_offset = [&rejected](const std::function<void()>& fn, std::uint64_t offset) {
    try {
      fn();
    } catch (const ParseError& e) {
      if (e.offset() == offset) ++rejected;
    }
  };

  {
    auto bad = good_img;
    bad[3] = 0x99;  // wrong magic
    const auto p = write_bytes("bad-magic", bad);
    expect_offset([&]() { load_idx(p, lbl); }, 0);
  }
  {
    const auto p = write_bytes(
        "cut-header", std::vector<std::uint8_t>(good_img.begin(), good_img.begin() + 10));
    expect_offset([&]() { load_idx(p, lbl); }, 10);
  }
  {
    const auto p = write_bytes(
        "cut-payload", std::vector<std::uint8_t>(good_img.begin(), good_img.begin() + 16));
    expect_offset([&]() { load_idx(p, lbl); }, 16);
  }
  {
    std::vector<std::uint8_t> short_labels(labels.begin(), labels.end() - 2);
    const auto p = (tmp / "short-labels").string();
    write_idx_labels(p, short_labels);
    expect_offset([&]() { load_idx(img, p); }, 4);  // the count field
  }
  {
    auto bad = good_img;
    bad.push_back(0xAA);  // trailing garbage
    const auto p = write_bytes("trailing", bad);
    expect_offset([&]() { load_idx(p, lbl); }, good_img.size());
  }

  Outcome o;
  o.ok = exact && rejected == 5;
  o.detail = std::string("round trip ") + (exact ? "exact" : "INEXACT") + ", " +
             std::to_string(rejected) + "/5 corruptions rejected with exact offsets";
  return o;
}

// --- 11: determinism of traces and sweeps -----------------------------------
Outcome criterion_11(const fs::path& tmp) {
  RunConfig cfg = small_blobs_config();
  MetaConfig meta;
  meta.eta = 1e-4;
  cfg.oho = meta;

  std::ostringstream t1, t2;
  write_trace_csv(run(cfg), t1);
  write_trace_csv(run(cfg), t2);
  const bool trace_ok = t1.str() == t2.str() && !t1.str().empty();

  RunConfig tmpl = small_blobs_config();
  SchedulerSpec sched;
  sched.kind = SchedulerKind::fixed;
  sched.base_lr = tmpl.alpha0;
  tmpl.scheduler = sched;
  std::ostringstream s1, s4;
  write_sweep_csv(sweep_random(tmpl, 6, {0.0001, 0.2}, {0.0, 0.0001}, 0.4, 17, 1), s1);
  write_sweep_csv(sweep_random(tmpl, 6, {0.0001, 0.2}, {0.0, 0.0001}, 0.4, 17, 4), s4);
  const bool sweep_ok = s1.str() == s4.str();

  // end to end through the CLI binary
  bool cli_ok = false;
  {
    const std::string cfg_path = (tmp / "det.json").string();
    std::ofstream out(cfg_path);
    out << R"({
      "network": {"layer_sizes": [8, 16, 3]},
      "data": {"source": "blobs", "classes": 3, "per_class": 60, "dim": 8,
               "spread": 0.5, "val_count": 40, "test_per_class": 10},
      "init": {"alpha": 0.05, "lambda": 0.0},
      "oho": {"eta": 1e-4},
      "epochs": 2, "batch_size": 20, "val_batch_size": 30, "seed": 12
    })";
    out.close();
    const std::string a = (tmp / "det_a.csv").string();
    const std::string b = (tmp / "det_b.csv").string();
    const std::string cmd1 = std::string(OHO_CLI_BIN) + " train --config " + cfg_path +
                             " --out " + a + " > /dev/null 2>&1";
    const std::string cmd2 = std::string(OHO_CLI_BIN) + " train --config " + cfg_path +
                             " --out " + b + " > /dev/null 2>&1";
    if (std::system(cmd1.c_str()) == 0 && std::system(cmd2.c_str()) == 0) {
      std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
      std::stringstream ba, bb;
      ba << fa.rdbuf();
      bb << fb.rdbuf();
      cli_ok = ba.str() == bb.str() && !ba.str().empty();
    }
  }

  Outcome o;
  o.ok = trace_ok && sweep_ok && cli_ok;
  o.detail = std::string("trace ") + (trace_ok ? "byte-identical" : "DIFFERS") +
             ", sweep w1/w4 " + (sweep_ok ? "byte-identical" : "DIFFERS") + ", cli reruns " +
             (cli_ok ? "byte-identical" : "DIFFER");
  return o;
}

}  // namespace

int main() {
  const fs::path tmp =
      fs::temp_directory_path() / ("oho_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(tmp);

  report(1, "hypergradient exactness, quadratic model", criterion_1);
  report(2, "hypergradient exactness, 4-8-2 network", criterion_2);
  report(3, "unrolled forward-mode equivalence", criterion_3);
  report(4, "gradient vs central differences, 20-case grid", criterion_4);
  report(5, "zero meta rate reproduces the fixed scheduler", criterion_5);
  report(6, "generalization trend over random initial hyperparameters", criterion_6);
  report(7, "recovery from learning-rate perturbation", criterion_7);
  report(8, "reset-horizon ordering", criterion_8);
  report(9, "influence finiteness and gradient decorrelation at eta 5e-6",
         [&]() { return criterion_9(tmp); });
  report(10, "idx conformance and corruption offsets", [&]() { return criterion_10(tmp); });
  report(11, "trace and sweep determinism", [&]() { return criterion_11(tmp); });

  fs::remove_all(tmp);
  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
  } else {
    std::printf("acceptance: %d criteria FAILED\n", g_failures);
  }
  return g_failures;
}
