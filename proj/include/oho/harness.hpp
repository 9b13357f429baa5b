#ifndef OHO_HARNESS_HPP
#define OHO_HARNESS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oho/dataset.hpp"
#include "oho/influence.hpp"
#include "oho/optimizer.hpp"
#include "oho/trace.hpp"

namespace oho {

struct BlobsSpec {
  int classes = 3;
  int per_class = 200;
  int dim = 8;
  double spread = 0.5;
  int val_count = 150;
  int test_per_class = 50;
  std::optional<std::uint64_t> seed;  // default derived from the run seed
};

struct IdxSpec {
  std::string train_images;
  std::string train_labels;
  std::string test_images;  // optional pair
  std::string test_labels;
  std::size_t val_count = 10000;
  std::size_t limit = 0;  // truncate the training pool; 0 = use all
};

struct DataConfig {
  enum class Source { blobs, idx };
  Source source = Source::blobs;
  BlobsSpec blobs;
  IdxSpec idx;
};

// Forced re-initialization of one hyperparameter kind at given epoch starts.
struct PerturbationSchedule {
  HyperKind target = HyperKind::alpha;
  double value = 0.0;
  std::vector<int> epochs;
};

struct DiagnosticsConfig {
  bool gradient_correlation = true;
  std::size_t window = 100;
  bool influence_norms = true;
};

struct RunConfig {
  NetworkSpec network;
  DataConfig data;

  GroupingMode grouping_mode = GroupingMode::global;
  int grouping_sets = 1;
  std::optional<bool> tie_alpha;  // default: tied in global mode only

  double alpha0 = 0.01;
  double lambda0 = 0.0;

  std::optional<MetaConfig> oho;          // exactly one of these two
  std::optional<SchedulerSpec> scheduler;

  int epochs = 1;
  std::size_t batch_size = 100;
  std::size_t val_batch_size = 100;
  std::uint64_t seed = 1;

  std::vector<PerturbationSchedule> perturbations;
  DiagnosticsConfig diagnostics;
  HvpPolicy hvp_policy;

  // Companion-run semantics: once the first perturbation fires, phi stays
  // frozen at the re-initialized value for the rest of the run.
  bool freeze_phi_after_perturbation = false;

  bool oho_mode() const { return oho.has_value(); }
  void validate() const;
};

// Materializes the configured dataset (loads IDX files or generates blobs,
// then carves out the validation split).
DatasetSplit load_dataset(const RunConfig& config);

// Full training run; deterministic under config.seed. On numerical
// instability the partial trace is returned with `halt` set.
RunTrace run(const RunConfig& config);

// Same, over an already-materialized dataset (sweeps reuse one split).
RunTrace run_on_split(const RunConfig& config, const DatasetSplit& split);

// The perturbation experiment pair: the adaptive run and its frozen-phi
// companion (identical until the first perturbation, then phi held fixed).
std::pair<RunTrace, RunTrace> run_with_frozen_companion(const RunConfig& config);

std::vector<std::string> phi_names(const GroupingScheme& grouping);

}  // namespace oho

#endif  // OHO_HARNESS_HPP
