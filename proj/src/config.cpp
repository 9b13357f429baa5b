#include "oho/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "oho/errors.hpp"

namespace oho {

namespace {

using nlohmann::json;

// Field accessor that records which keys were consumed so the caller can
// reject everything else.
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError("expected a JSON object", path_);
  }

  std::string at(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) {
    used_.insert(key);
    return j_.contains(key);
  }

  const json& req(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) throw ConfigError("missing required field", at(key));
    return j_.at(key);
  }

  double num(const std::string& key) { return to_num(req(key), at(key)); }
  double num(const std::string& key, double dflt) {
    return has(key) ? to_num(j_.at(key), at(key)) : dflt;
  }
  std::int64_t integer(const std::string& key) { return to_int(req(key), at(key)); }
  std::int64_t integer(const std::string& key, std::int64_t dflt) {
    return has(key) ? to_int(j_.at(key), at(key)) : dflt;
  }
  bool boolean(const std::string& key, bool dflt) {
    if (!has(key)) return dflt;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError("expected a boolean", at(key));
    return v.get<bool>();
  }
  std::string str(const std::string& key) {
    const json& v = req(key);
    if (!v.is_string()) throw ConfigError("expected a string", at(key));
    return v.get<std::string>();
  }
  std::string str(const std::string& key, const std::string& dflt) {
    if (!has(key)) return dflt;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError("expected a string", at(key));
    return v.get<std::string>();
  }

  // Throws on any key that was never consumed.
  void finish() const {
    for (const auto& item : j_.items())
      if (!used_.count(item.key())) throw ConfigError("unknown field", at(item.key()));
  }

  const json& raw() const { return j_; }

 private:
  static double to_num(const json& v, const std::string& where) {
    if (!v.is_number()) throw ConfigError("expected a number", where);
    return v.get<double>();
  }
  static std::int64_t to_int(const json& v, const std::string& where) {
    if (!v.is_number_integer()) throw ConfigError("expected an integer", where);
    return v.get<std::int64_t>();
  }

  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

NetworkSpec parse_network(const json& j, const std::string& path) {
  Fields f(j, path);
  const json& sizes = f.req("layer_sizes");
  if (!sizes.is_array() || sizes.empty())
    throw ConfigError("expected a non-empty array of integers", f.at("layer_sizes"));
  NetworkSpec spec;
  for (const auto& v : sizes) {
    if (!v.is_number_integer())
      throw ConfigError("expected a non-empty array of integers", f.at("layer_sizes"));
    spec.layer_sizes.push_back(v.get<int>());
  }
  const std::string act = f.str("activation", "relu");
  if (act != "relu") throw ConfigError("only \"relu\" is supported", f.at("activation"));
  const std::string loss = f.str("loss", "softmax_cross_entropy");
  if (loss != "softmax_cross_entropy")
    throw ConfigError("only \"softmax_cross_entropy\" is supported", f.at("loss"));
  f.finish();
  spec.validate();
  return spec;
}

DataConfig parse_data(const json& j, const std::string& path) {
  Fields f(j, path);
  DataConfig data;
  const std::string source = f.str("source");
  if (source == "blobs") {
    data.source = DataConfig::Source::blobs;
    auto& b = data.blobs;
    b.classes = static_cast<int>(f.integer("classes", b.classes));
    b.per_class = static_cast<int>(f.integer("per_class", b.per_class));
    b.dim = static_cast<int>(f.integer("dim", b.dim));
    b.spread = f.num("spread", b.spread);
    b.val_count = static_cast<int>(f.integer("val_count", b.val_count));
    b.test_per_class = static_cast<int>(f.integer("test_per_class", b.test_per_class));
    if (f.has("seed")) b.seed = static_cast<std::uint64_t>(f.integer("seed"));
    if (b.classes < 1 || b.per_class < 1 || b.dim < 1)
      throw ConfigError("classes, per_class and dim must be >= 1", path);
    if (!(b.spread >= 0.0)) throw ConfigError("must be >= 0", f.at("spread"));
    if (b.val_count < 1) throw ConfigError("must be >= 1", f.at("val_count"));
  } else if (source == "idx") {
    data.source = DataConfig::Source::idx;
    auto& x = data.idx;
    x.train_images = f.str("train_images");
    x.train_labels = f.str("train_labels");
    x.test_images = f.str("test_images", "");
    x.test_labels = f.str("test_labels", "");
    x.val_count = static_cast<std::size_t>(f.integer("val_count"));
    x.limit = static_cast<std::size_t>(f.integer("limit", 0));
    if (x.test_images.empty() != x.test_labels.empty())
      throw ConfigError("test_images and test_labels must be given together", path);
  } else {
    throw ConfigError("expected \"blobs\" or \"idx\"", f.at("source"));
  }
  f.finish();
  return data;
}

void parse_grouping(const json& j, const std::string& path, RunConfig& cfg) {
  Fields f(j, path);
  const std::string mode = f.str("mode");
  if (mode == "global") {
    cfg.grouping_mode = GroupingMode::global;
  } else if (mode == "grouped") {
    cfg.grouping_mode = GroupingMode::grouped;
    cfg.grouping_sets = static_cast<int>(f.integer("sets"));
  } else if (mode == "layerwise") {
    cfg.grouping_mode = GroupingMode::layerwise;
  } else {
    throw ConfigError("expected \"global\", \"grouped\" or \"layerwise\"", f.at("mode"));
  }
  if (f.has("tie_alpha")) cfg.tie_alpha = f.boolean("tie_alpha", false);
  f.finish();
}

MetaConfig parse_oho(const json& j, const std::string& path) {
  Fields f(j, path);
  MetaConfig meta;
  meta.eta = f.num("eta");
  meta.reset_interval = f.integer("reset_interval", 0);
  const std::string outer = f.str("outer_data", "validation");
  if (outer == "validation") {
    meta.outer_data = OuterData::validation;
  } else if (outer == "training") {
    meta.outer_data = OuterData::training;
  } else {
    throw ConfigError("expected \"validation\" or \"training\"", f.at("outer_data"));
  }
  meta.clamp_nonnegative = f.boolean("clamp_nonnegative", true);
  f.finish();
  return meta;
}

SchedulerSpec parse_scheduler(const json& j, const std::string& path, double default_base_lr) {
  Fields f(j, path);
  SchedulerSpec spec;
  const std::string kind = f.str("kind");
  spec.base_lr = f.num("base_lr", default_base_lr);
  if (kind == "fixed") {
    spec.kind = SchedulerKind::fixed;
  } else if (kind == "step") {
    spec.kind = SchedulerKind::step;
    spec.step_size = static_cast<int>(f.integer("step_size"));
    spec.decay = f.num("decay");
  } else if (kind == "exp") {
    spec.kind = SchedulerKind::exp;
    spec.decay = f.num("decay");
  } else if (kind == "cosine") {
    spec.kind = SchedulerKind::cosine;
    spec.horizon = static_cast<int>(f.integer("horizon"));
  } else {
    throw ConfigError("expected \"fixed\", \"step\", \"exp\" or \"cosine\"", f.at("kind"));
  }
  f.finish();
  spec.validate();
  return spec;
}

std::vector<PerturbationSchedule> parse_perturbations(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError("expected an array", path);
  std::vector<PerturbationSchedule> out;
  int idx = 0;
  for (const auto& item : j) {
    const std::string where = path + "[" + std::to_string(idx++) + "]";
    Fields f(item, where);
    PerturbationSchedule p;
    const std::string target = f.str("target");
    if (target == "alpha") {
      p.target = HyperKind::alpha;
    } else if (target == "lambda") {
      p.target = HyperKind::lambda;
    } else {
      throw ConfigError("expected \"alpha\" or \"lambda\"", f.at("target"));
    }
    p.value = f.num("value");
    const json& epochs = f.req("epochs");
    if (!epochs.is_array()) throw ConfigError("expected an array of integers", f.at("epochs"));
    for (const auto& e : epochs) {
      if (!e.is_number_integer())
        throw ConfigError("expected an array of integers", f.at("epochs"));
      p.epochs.push_back(e.get<int>());
    }
    f.finish();
    out.push_back(std::move(p));
  }
  return out;
}

DiagnosticsConfig parse_diagnostics(const json& j, const std::string& path) {
  Fields f(j, path);
  DiagnosticsConfig d;
  d.gradient_correlation = f.boolean("gradient_correlation", true);
  d.window = static_cast<std::size_t>(f.integer("window", 100));
  d.influence_norms = f.boolean("influence_norms", true);
  f.finish();
  return d;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json j = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ConfigError("invalid JSON", "config");

  Fields f(j, "");
  RunConfig cfg;
  cfg.network = parse_network(f.req("network"), "network");
  cfg.data = parse_data(f.req("data"), "data");
  if (f.has("grouping")) parse_grouping(j.at("grouping"), "grouping", cfg);
  {
    Fields init(f.req("init"), "init");
    cfg.alpha0 = init.num("alpha");
    cfg.lambda0 = init.num("lambda", 0.0);
    init.finish();
  }
  const bool has_oho = f.has("oho");
  const bool has_scheduler = f.has("scheduler");
  if (has_oho == has_scheduler)
    throw ConfigError("exactly one of \"oho\" and \"scheduler\" must be set", "config");
  if (has_oho) cfg.oho = parse_oho(j.at("oho"), "oho");
  if (has_scheduler) cfg.scheduler = parse_scheduler(j.at("scheduler"), "scheduler", cfg.alpha0);

  cfg.epochs = static_cast<int>(f.integer("epochs"));
  cfg.batch_size = static_cast<std::size_t>(f.integer("batch_size", 100));
  cfg.val_batch_size = static_cast<std::size_t>(f.integer("val_batch_size", 100));
  cfg.seed = static_cast<std::uint64_t>(f.integer("seed"));
  if (f.has("perturbations"))
    cfg.perturbations = parse_perturbations(j.at("perturbations"), "perturbations");
  if (f.has("diagnostics"))
    cfg.diagnostics = parse_diagnostics(j.at("diagnostics"), "diagnostics");
  f.finish();

  if (cfg.oho) cfg.oho->val_batch_size = cfg.val_batch_size;
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure on " + path);
  return parse_run_config(buf.str());
}

}  // namespace oho
