#include "godclass/cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "godclass/decomposition.hpp"
#include "godclass/detection.hpp"
#include "godclass/evaluation.hpp"
#include "godclass/interaction.hpp"
#include "godclass/model.hpp"
#include "godclass/report.hpp"
#include "godclass/similarity.hpp"
#include "godclass/taxonomy.hpp"

namespace godclass::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string model_path;
  bool include_libraries = false;
  std::string weights_path;
  std::vector<std::string> weight_overrides;
  std::optional<std::string> tapping;
  double quartile = 0.75;
  std::optional<double> threshold;
  std::string sweep_spec;
  bool allow_outside = false;
  std::string out_dir;
  std::string format = "json";
  std::string class_id;
  std::vector<std::string> method_ids;
  std::string truth_path;
  std::string decomposition_path;
};

struct SweepSpec {
  double start;
  double end;
  double step;
};

double parse_number(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw UsageError(std::string(what) + ": '" + std::string(text) + "' is not a number");
  }
  return v;
}

SweepSpec parse_sweep(std::string_view spec) {
  const auto first = spec.find(':');
  const auto second = first == std::string_view::npos ? first : spec.find(':', first + 1);
  if (second == std::string_view::npos) throw UsageError("--sweep expects start:end:step");
  SweepSpec s{parse_number(spec.substr(0, first), "--sweep start"),
              parse_number(spec.substr(first + 1, second - first - 1), "--sweep end"),
              parse_number(spec.substr(second + 1), "--sweep step")};
  if (!(s.step > 0.0) || !(s.start <= s.end)) {
    throw UsageError("--sweep needs start <= end and step > 0");
  }
  return s;
}

std::string file_stem_for(std::string_view id) {
  std::string out;
  for (char c : id) {
    const bool safe = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                      c == '.' || c == '-' || c == '_';
    out += safe ? c : '_';
  }
  return out.empty() ? "class" : out;
}

json read_json_file(const std::string& path, std::string_view what) {
  if (!fs::exists(path)) throw IoError(std::string(what) + " file '" + path + "' does not exist");
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + std::string(what) + " file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

// Analysis stack over one loaded model. Members refer to each other, so the
// whole thing lives behind a unique_ptr.
struct Pipeline {
  Pipeline(CodeModel m, WeightConfig weights)
      : model(std::move(m)), taxonomy(model), similarity(taxonomy, weights), interaction(model, similarity) {}

  CodeModel model;
  Taxonomy taxonomy;
  SimilarityEngine similarity;
  InteractionEngine interaction;
};

class Runner {
 public:
  Runner(const RunConfig& config, std::ostream& out, std::ostream& err)
      : config_(config), out_(out), err_(err) {}

  int validate();
  int similarity();
  int detect();
  int decompose();
  int evaluate();

 private:
  ModelData read_model() const;
  WeightConfig weights() const;
  std::unique_ptr<Pipeline> load() const;
  NodeId require_class(const CodeModel& model) const;
  void emit(const std::string& file_name, const std::function<void(std::ostream&)>& write) const;
  bool csv() const { return config_.format == "csv"; }

  const RunConfig& config_;
  std::ostream& out_;
  std::ostream& err_;
};

ModelData Runner::read_model() const {
  if (config_.model_path.empty()) throw UsageError("--model is required");
  if (!fs::exists(config_.model_path)) {
    throw IoError("model file '" + config_.model_path + "' does not exist");
  }
  return read_model_file(config_.model_path);
}

WeightConfig Runner::weights() const {
  WeightConfig w;
  try {
    if (!config_.weights_path.empty()) {
      std::ifstream in(config_.weights_path);
      if (!in) throw IoError("cannot open weights file '" + config_.weights_path + "'");
      w = parse_weight_config(in, w);
    }
    for (const auto& item : config_.weight_overrides) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw UsageError("--weight expects kind=value, got '" + item + "'");
      apply_weight_override(w, std::string_view(item).substr(0, eq), std::string_view(item).substr(eq + 1));
    }
    if (config_.tapping) apply_weight_override(w, "tapping", *config_.tapping);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return w;
}

std::unique_ptr<Pipeline> Runner::load() const {
  auto w = weights();
  return std::make_unique<Pipeline>(
      CodeModel::build(read_model(), LoadOptions{config_.include_libraries}), w);
}

NodeId Runner::require_class(const CodeModel& model) const {
  if (config_.class_id.empty()) throw UsageError("--class is required");
  const auto id = model.find(config_.class_id);
  if (!id || !model.is_class(*id)) throw UsageError("unknown class '" + config_.class_id + "'");
  return *id;
}

void Runner::emit(const std::string& file_name, const std::function<void(std::ostream&)>& write) const {
  if (config_.out_dir.empty()) {
    write(out_);
    return;
  }
  std::error_code ec;
  fs::create_directories(config_.out_dir, ec);
  const fs::path path = fs::path(config_.out_dir) / file_name;
  std::ofstream file(path);
  if (!file) throw IoError("cannot write '" + path.string() + "'");
  write(file);
  if (!file) throw IoError("failed writing '" + path.string() + "'");
}

int Runner::validate() {
  const auto data = read_model();
  const auto diagnostics = validate_model(data);
  for (const auto& d : diagnostics) {
    err_ << to_string(d.kind) << ": '" << d.id << "': " << d.message << '\n';
  }
  if (!diagnostics.empty()) return kValidationFailure;
  out_ << "ok: " << data.entities.size() << " entities, " << data.relationships.size()
       << " relationships, " << data.calls.size() << " calls\n";
  return kSuccess;
}

int Runner::similarity() {
  const auto p = load();
  const auto& model = p->model;
  std::vector<std::pair<NodeId, NodeId>> pairs;
  if (!config_.method_ids.empty()) {
    if (config_.method_ids.size() != 2) throw UsageError("--method must be given exactly twice");
    NodeId ids[2];
    for (int i = 0; i < 2; ++i) {
      const auto id = model.find(config_.method_ids[i]);
      if (!id || !model.is_method(*id)) throw UsageError("unknown method '" + config_.method_ids[i] + "'");
      ids[i] = *id;
    }
    pairs.emplace_back(ids[0], ids[1]);
  } else {
    const auto methods = model.methods_of(require_class(model));
    for (std::size_t i = 0; i < methods.size(); ++i) {
      for (std::size_t j = i + 1; j < methods.size(); ++j) pairs.emplace_back(methods[i], methods[j]);
    }
  }

  struct Row {
    std::string a, b;
    double structural, refined, interaction;
  };
  std::vector<Row> rows;
  for (auto [a, b] : pairs) {
    rows.push_back({model.entity(a).id, model.entity(b).id, p->similarity.raw(a, b),
                    p->similarity.similarity(a, b), p->interaction.interaction_similarity(a, b)});
  }
  if (csv()) {
    emit("similarity.csv", [&](std::ostream& os) {
      os << std::setprecision(10) << "a,b,structural,refined,interaction\n";
      for (const auto& r : rows) {
        os << report::csv_field(r.a) << ',' << report::csv_field(r.b) << ',' << r.structural << ','
           << r.refined << ',' << r.interaction << '\n';
      }
    });
  } else {
    json doc = {{"nodeCount", model.size()}, {"maxSimilarity", p->taxonomy.max_similarity()}};
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"a", r.a}, {"b", r.b}, {"structural", r.structural}, {"refined", r.refined},
                     {"interaction", r.interaction}});
    }
    doc["pairs"] = std::move(arr);
    emit("similarity.json", [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
  }
  return kSuccess;
}

int Runner::detect() {
  if (!(config_.quartile > 0.0 && config_.quartile < 1.0)) {
    throw UsageError("--quartile must lie strictly between 0 and 1");
  }
  const auto p = load();
  const auto result = detect_god_classes(p->interaction, config_.quartile);
  if (csv()) {
    if (config_.out_dir.empty()) {
      report::detection_csv(out_, p->model, result);
      out_ << '\n';
      report::detection_summary_csv(out_, result);
    } else {
      emit("detection.csv", [&](std::ostream& os) { report::detection_csv(os, p->model, result); });
      emit("detection_summary.csv", [&](std::ostream& os) { report::detection_summary_csv(os, result); });
    }
  } else {
    const auto doc = report::detection_json(p->model, result);
    emit("detection.json", [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
  }
  err_ << result.detected.size() << " of " << result.metrics.size() << " classes detected\n";
  return kSuccess;
}

int Runner::decompose() {
  const auto p = load();
  const auto& model = p->model;
  const NodeId cls = require_class(model);
  if (model.methods_of(cls).size() < 2) {
    throw UsageError("class '" + config_.class_id + "' has fewer than two methods");
  }
  const auto graph = build_graph(p->interaction, cls);
  const auto summary = report::summarize(model, graph);
  const std::string stem = file_stem_for(config_.class_id);

  std::vector<Decomposition> decompositions;
  const bool is_sweep = !config_.sweep_spec.empty();
  if (is_sweep) {
    const auto s = parse_sweep(config_.sweep_spec);
    decompositions = sweep(graph, s.start, s.end, s.step);
  } else {
    const double t = config_.threshold.value_or(graph.mean);
    try {
      decompositions.push_back(split(graph, t, config_.allow_outside));
    } catch (const ThresholdOutOfRange& e) {
      throw UsageError(std::string(e.what()) + " (use --allow-outside to force)");
    }
  }

  std::vector<json> records;
  for (auto& d : decompositions) {
    if (d.groups.size() >= 2) d.type = classify_type(model, d);
    records.push_back(report::decomposition_record(model, d));
  }

  if (csv()) {
    emit(stem + ".decomposition.csv", [&](std::ostream& os) { report::decomposition_csv(os, summary, records); });
  } else {
    const auto doc = report::decomposition_json(summary, records, is_sweep);
    emit(stem + ".decomposition.json", [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
  }
  if (!config_.out_dir.empty()) {
    if (is_sweep) {
      for (const auto& d : decompositions) {
        std::ostringstream name;
        name << stem << ".t" << std::fixed << std::setprecision(2) << d.threshold << ".dot";
        emit(name.str(), [&](std::ostream& os) { report::write_dot(os, model, graph, d.threshold); });
      }
    } else {
      emit(stem + ".dot", [&](std::ostream& os) {
        report::write_dot(os, model, graph, decompositions.front().threshold);
      });
    }
  }
  return kSuccess;
}

int Runner::evaluate() {
  if (config_.truth_path.empty()) throw UsageError("--truth is required");
  if (config_.decomposition_path.empty()) throw UsageError("--decomposition is required");

  GroundTruth truth;
  report::DecompositionFile produced;
  try {
    truth = ground_truth_from_json(read_json_file(config_.truth_path, "ground truth"));
    produced = report::decomposition_from_json(read_json_file(config_.decomposition_path, "decomposition"));
  } catch (const std::invalid_argument& e) {
    err_ << e.what() << '\n';
    return kValidationFailure;
  }
  if (truth.cls != produced.cls) {
    err_ << "ground truth is for class '" << truth.cls << "' but the decomposition is for '"
         << produced.cls << "'\n";
    return kValidationFailure;
  }

  MethodSet class_methods;
  if (!config_.model_path.empty()) {
    const auto model = CodeModel::build(read_model(), LoadOptions{config_.include_libraries});
    const auto cls = model.find(truth.cls);
    if (!cls || !model.is_class(*cls)) {
      err_ << "class '" << truth.cls << "' is not in the model\n";
      return kValidationFailure;
    }
    std::vector<std::string> ids;
    for (NodeId m : model.methods_of(*cls)) ids.push_back(model.entity(m).id);
    class_methods = make_method_set(std::move(ids));
  } else {
    std::vector<std::string> ids;
    for (const auto& g : produced.entries.front().groups) ids.insert(ids.end(), g.begin(), g.end());
    class_methods = make_method_set(std::move(ids));
  }
  if (auto problems = check_ground_truth(truth, class_methods); !problems.empty()) {
    for (const auto& p : problems) err_ << "ground truth: " << p << '\n';
    return kValidationFailure;
  }

  std::vector<EvaluationResult> results;
  for (const auto& entry : produced.entries) results.push_back(score(truth, entry.groups));
  const std::string stem = file_stem_for(truth.cls);
  if (csv()) {
    emit(stem + ".evaluation.csv",
         [&](std::ostream& os) { report::evaluation_csv(os, truth, produced, results); });
  } else {
    const auto doc = report::evaluation_json(truth, produced, results);
    emit(stem + ".evaluation.json", [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
  }
  return kSuccess;
}

void add_model_options(CLI::App& cmd, RunConfig& config) {
  cmd.add_option("--model", config.model_path, "Code-model JSON file");
  cmd.add_flag("--include-libraries", config.include_libraries, "Keep library packages, classes and methods");
}

void add_analysis_options(CLI::App& cmd, RunConfig& config) {
  add_model_options(cmd, config);
  cmd.add_option("--weights", config.weights_path, "Weight overrides file (key = value lines)");
  cmd.add_option("--weight", config.weight_overrides, "Weight override kind=value (repeatable)");
  cmd.add_option("--tapping", config.tapping, "Cap refined similarity at the self-similarity maximum")
      ->check(CLI::IsMember({"off", "clamp"}));
}

void add_output_options(CLI::App& cmd, RunConfig& config) {
  cmd.add_option("--out", config.out_dir, "Directory for report files (default: standard output)");
  cmd.add_option("--format", config.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Detects God classes and splits them into responsibilities", "godclass"};
  app.require_subcommand(1);

  auto* validate = app.add_subcommand("validate", "Check a code-model file");
  add_model_options(*validate, config);

  auto* similarity = app.add_subcommand("similarity", "Dump pairwise method similarities");
  add_analysis_options(*similarity, config);
  add_output_options(*similarity, config);
  similarity->add_option("--class", config.class_id, "All method pairs of this class");
  similarity->add_option("--method", config.method_ids, "A method of the pair (give twice)");

  auto* detect = app.add_subcommand("detect", "Compute class metrics and apply the detection rule");
  add_analysis_options(*detect, config);
  add_output_options(*detect, config);
  detect->add_option("--quartile", config.quartile, "Quantile used for every cut-off");

  auto* decompose = app.add_subcommand("decompose", "Split a class into responsibilities");
  add_analysis_options(*decompose, config);
  add_output_options(*decompose, config);
  decompose->add_option("--class", config.class_id, "Class to decompose")->required();
  auto* threshold = decompose->add_option("--threshold", config.threshold, "Edge-removal threshold");
  auto* sweep_opt = decompose->add_option("--sweep", config.sweep_spec, "Threshold sweep start:end:step");
  threshold->excludes(sweep_opt);
  decompose->add_flag("--allow-outside", config.allow_outside,
                      "Accept a threshold outside the [mean - sd, mean + sd] interval");

  auto* evaluate = app.add_subcommand("evaluate", "Score a decomposition against ground truth");
  add_model_options(*evaluate, config);
  add_output_options(*evaluate, config);
  evaluate->add_option("--truth", config.truth_path, "Ground-truth JSON file")->required();
  evaluate->add_option("--decomposition", config.decomposition_path, "Decomposition JSON file")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  Runner runner(config, out, err);
  try {
    if (validate->parsed()) return runner.validate();
    if (similarity->parsed()) return runner.similarity();
    if (detect->parsed()) return runner.detect();
    if (decompose->parsed()) return runner.decompose();
    if (evaluate->parsed()) return runner.evaluate();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const ValidationError& e) {
    for (const auto& d : e.diagnostics()) {
      err << to_string(d.kind) << ": '" << d.id << "': " << d.message << '\n';
    }
    return kValidationFailure;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailure;
  }
  return kUsageError;
}

}  // namespace godclass::cli
