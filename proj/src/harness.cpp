#include "oho/harness.hpp"

#include <algorithm>
#include <cmath>

#include "oho/errors.hpp"

namespace oho {

namespace {

// Sub-stream salts; independent streams keep the training-batch order
// untouched by validation sampling and vice versa.
constexpr std::uint64_t kInitSalt = 1;
constexpr std::uint64_t kTrainSalt = 2;
constexpr std::uint64_t kValSalt = 3;
constexpr std::uint64_t kOuterSalt = 4;
constexpr std::uint64_t kSplitSalt = 5;
constexpr std::uint64_t kDataSalt = 6;

void apply_perturbation(HyperVector& phi, const GroupingScheme& grouping,
                        const PerturbationSchedule& p) {
  for (std::size_t i = 0; i < grouping.phi.size(); ++i)
    if (grouping.phi[i].kind == p.target) phi.values[i] = p.value;
}

}  // namespace

void RunConfig::validate() const {
  network.validate();
  if (oho.has_value() == scheduler.has_value())
    throw ConfigError("exactly one of \"oho\" and \"scheduler\" must be set", "config");
  if (oho) oho->validate();
  if (scheduler) scheduler->validate();
  if (epochs < 1) throw ConfigError("must be >= 1", "epochs");
  if (batch_size < 1) throw ConfigError("must be >= 1", "batch_size");
  if (val_batch_size < 1) throw ConfigError("must be >= 1", "val_batch_size");
  if (!(alpha0 >= 0.0)) throw ConfigError("must be >= 0", "init.alpha");
  if (!(lambda0 >= 0.0)) throw ConfigError("must be >= 0", "init.lambda");
  if (grouping_mode == GroupingMode::grouped && grouping_sets < 1)
    throw ConfigError("must be >= 1", "grouping.sets");
  if (!perturbations.empty() && !oho)
    throw ConfigError("perturbations require an oho run", "perturbations");
  for (const auto& p : perturbations) {
    if (!(p.value >= 0.0)) throw ConfigError("must be >= 0", "perturbations.value");
    if (p.epochs.empty()) throw ConfigError("needs at least one epoch", "perturbations.epochs");
    for (std::size_t i = 0; i < p.epochs.size(); ++i) {
      if (p.epochs[i] < 0) throw ConfigError("epochs must be >= 0", "perturbations.epochs");
      if (i > 0 && p.epochs[i] <= p.epochs[i - 1])
        throw ConfigError("epochs must be strictly increasing", "perturbations.epochs");
    }
  }
  if (diagnostics.window < 2) throw ConfigError("must be >= 2", "diagnostics.window");
}

DatasetSplit load_dataset(const RunConfig& config) {
  config.validate();
  DatasetSplit split;
  if (config.data.source == DataConfig::Source::blobs) {
    const auto& b = config.data.blobs;
    const std::uint64_t data_seed = b.seed ? *b.seed : derive_seed(config.seed, kDataSalt);
    Minibatch pool = synth_blobs(b.classes, b.per_class, b.dim, b.spread, data_seed);
    split = make_split(pool, static_cast<std::size_t>(b.val_count),
                       derive_seed(config.seed, kSplitSalt));
    if (b.test_per_class > 0)
      split.test = synth_blobs(b.classes, b.test_per_class, b.dim, b.spread,
                               derive_seed(data_seed, 1));
  } else {
    const auto& x = config.data.idx;
    Minibatch pool = load_idx(x.train_images, x.train_labels);
    if (x.limit > 0 && x.limit < pool.labels.size()) {
      std::vector<std::size_t> head(x.limit);
      for (std::size_t i = 0; i < x.limit; ++i) head[i] = i;
      pool = gather(pool, head);
    }
    split = make_split(pool, x.val_count, derive_seed(config.seed, kSplitSalt));
    if (!x.test_images.empty()) split.test = load_idx(x.test_images, x.test_labels);
  }
  return split;
}

RunTrace run(const RunConfig& config) { return run_on_split(config, load_dataset(config)); }

std::vector<std::string> phi_names(const GroupingScheme& grouping) {
  std::vector<std::string> names;
  names.reserve(grouping.phi.size());
  for (const auto& e : grouping.phi) names.push_back(e.name());
  return names;
}

RunTrace run_on_split(const RunConfig& config, const DatasetSplit& split) {
  config.validate();
  if (split.validation.labels.empty())
    throw ConfigError("validation split is empty; runs need validation data", "data.val_count");
  if (split.train.inputs.cols != static_cast<std::size_t>(config.network.input_dim()))
    throw ConfigError("input dimension " + std::to_string(split.train.inputs.cols) +
                          " does not match layer_sizes front",
                      "network.layer_sizes");
  for (const Minibatch* part : {&split.train, &split.validation, &split.test})
    for (int y : part->labels)
      if (y >= config.network.n_classes())
        throw ConfigError("dataset has label " + std::to_string(y) +
                              " but the network outputs " +
                              std::to_string(config.network.n_classes()) + " classes",
                          "network.layer_sizes");

  MlpModel model(config.network);
  Rng init_rng(derive_seed(config.seed, kInitSalt));
  ParamVector theta0 = init_params(config.network, init_rng);

  const bool tie = config.tie_alpha ? *config.tie_alpha
                                    : (config.grouping_mode == GroupingMode::global);
  const GroupingScheme grouping =
      make_grouping(*model.layout(), config.grouping_mode, config.grouping_sets, tie);
  HyperVector phi0 = make_hyper(grouping, config.alpha0, config.lambda0);
  OhoState state = make_oho_state(std::move(theta0), std::move(phi0), grouping);

  MetaConfig meta = config.oho ? *config.oho : MetaConfig{};
  meta.val_batch_size = config.val_batch_size;

  BatchStream train_stream(split.train, config.batch_size, derive_seed(config.seed, kTrainSalt));
  BatchStream report_stream(split.validation, config.val_batch_size,
                            derive_seed(config.seed, kValSalt));
  std::optional<BatchStream> outer_train_stream;
  if (config.oho_mode() && meta.outer_data == OuterData::training)
    outer_train_stream.emplace(split.train, config.val_batch_size,
                               derive_seed(config.seed, kOuterSalt));

  RunTrace trace;
  trace.phi_names = phi_names(grouping);
  GradientCorrelationTracker gc(config.diagnostics.window);
  const std::vector<double> zero_norms(grouping.phi_size(), 0.0);

  bool frozen = false;
  const std::size_t batches = train_stream.batches_per_epoch();
  for (int epoch = 0; epoch < config.epochs && !trace.halt; ++epoch) {
    for (const auto& p : config.perturbations) {
      if (std::find(p.epochs.begin(), p.epochs.end(), epoch) == p.epochs.end()) continue;
      apply_perturbation(state.phi, grouping, p);
      if (config.freeze_phi_after_perturbation) frozen = true;
    }

    for (std::size_t b = 0; b < batches; ++b) {
      const Minibatch batch = train_stream.next();
      StepRecord rec;
      rec.step = state.step;
      rec.epoch = epoch;
      rec.phi = state.phi.values;  // values applied at this step
      try {
        if (config.oho_mode()) {
          MetaConfig step_meta = meta;
          if (frozen) step_meta.eta = 0.0;
          auto outer_fn = [&]() {
            return outer_train_stream ? outer_train_stream->next() : report_stream.next();
          };
          StepOutcome so = oho_train_step(state, model, grouping, batch, outer_fn, step_meta,
                                          config.hvp_policy);
          rec.train_loss = so.train_loss;
          // With a training-data outer loop the validation loss is still
          // reported from the validation split.
          rec.val_loss = outer_train_stream ? model.loss(state.theta, report_stream.next())
                                            : so.val_loss;
          if (config.diagnostics.gradient_correlation) {
            gc.push(so.train_grad.values);
            rec.gc = gc.current();
          }
          rec.gamma_sq_norms =
              config.diagnostics.influence_norms ? influence_norms(state.gamma) : zero_norms;
        } else {
          ParamVector grad = make_param_vector(state.theta.layout);
          rec.train_loss = model.loss_grad(state.theta, batch, grad);
          const double lr = scheduler_lr(*config.scheduler, state.step);
          const HyperVector step_phi = make_hyper(grouping, lr, config.lambda0);
          rec.phi = step_phi.values;
          sgd_step_inplace(state.theta, grad, step_phi, grouping);
          state.step += 1;
          rec.val_loss = model.loss(state.theta, report_stream.next());
          if (config.diagnostics.gradient_correlation) {
            gc.push(grad.values);
            rec.gc = gc.current();
          }
          rec.gamma_sq_norms = zero_norms;
        }
      } catch (const NumericalError& e) {
        // the failing step index equals the number of completed records
        trace.halt =
            HaltInfo{static_cast<std::int64_t>(trace.records.size()), e.column(), e.what()};
        break;
      }
      if (b + 1 == batches && !split.test.labels.empty())
        rec.test_loss = model.loss(state.theta, split.test);
      trace.records.push_back(std::move(rec));
    }
  }
  return trace;
}

std::pair<RunTrace, RunTrace> run_with_frozen_companion(const RunConfig& config) {
  RunTrace main_trace = run(config);
  RunConfig companion = config;
  companion.freeze_phi_after_perturbation = true;
  RunTrace companion_trace = run(companion);
  return {std::move(main_trace), std::move(companion_trace)};
}

}  // namespace oho
