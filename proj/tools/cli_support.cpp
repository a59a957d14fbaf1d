#include "cli_support.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "ncagc/checkpoint.hpp"
#include "ncagc/log.hpp"
#include "ncagc/npy.hpp"
#include "ncagc/synthetic.hpp"
#include "ncagc/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ncagc::cli {
namespace {

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

std::string compact_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y%m%d-%H%M%S");
  return out.str();
}

bool is_preset(const std::string& name) {
  const auto names = preset_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

}  // namespace

fs::path data_dir(const CommonOptions& options) {
  if (!options.data_dir.empty()) return options.data_dir;
  if (const char* env = std::getenv(kDataDirEnv); env != nullptr && *env != '\0') return env;
  return "data";
}

Graph resolve_dataset(const CommonOptions& options) {
  const std::string& name = options.dataset;
  if (name == "toy") return make_synthetic_graph({});
  if (fs::exists(name)) return load_dataset(name, detect_format(name));

  const fs::path root = data_dir(options);
  for (const fs::path& candidate : {root / (name + ".npk"), root / name / (name + ".npk")}) {
    if (fs::is_regular_file(candidate)) return load_dataset(candidate, DatasetFormat::packed_archive);
  }
  if (fs::is_directory(root / name)) return load_dataset(root / name, DatasetFormat::edge_list);
  throw IoError("dataset '" + name + "' not found under " + root.string() +
                " (set --data-dir or " + kDataDirEnv + ")");
}

TrainConfig build_config(const CommonOptions& options, const std::string& dataset_name) {
  TrainConfig config;
  if (!options.preset.empty()) {
    if (options.preset != "table2" && options.preset != "prose") {
      throw ConfigError("unknown preset '" + options.preset + "' (expected table2 or prose)");
    }
    if (!is_preset(dataset_name)) {
      throw ConfigError("no preset for dataset '" + dataset_name + "'");
    }
    const std::string prose = dataset_name + "-prose";
    config = options.preset == "prose" && is_preset(prose) ? preset(prose) : preset(dataset_name);
  } else if (is_preset(dataset_name)) {
    config = preset(dataset_name);
  } else {
    config.dataset = dataset_name;
  }
  if (!options.config_path.empty()) config = load_config(options.config_path, config);
  for (const auto& assignment : options.overrides) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + assignment + "'");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    apply_setting(config, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
  }
  if (options.epochs) config.epochs = *options.epochs;
  config.seed = options.seed;
  config.validate();
  return config;
}

std::vector<std::uint64_t> seed_list(const CommonOptions& options) {
  if (options.seeds < 1) throw ConfigError("--seeds must be >= 1");
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < options.seeds; ++i) seeds.push_back(options.seed + static_cast<std::uint64_t>(i));
  return seeds;
}

fs::path prepare_output_dir(const CommonOptions& options, const std::string& command,
                            const std::string& dataset_name) {
  fs::path dir;
  if (!options.out.empty()) {
    dir = options.out;
    if (fs::exists(dir) && !fs::is_empty(dir)) {
      if (!options.overwrite) {
        throw ConfigError("output directory " + dir.string() + " is not empty (use --overwrite)");
      }
      fs::remove_all(dir);
    }
  } else {
    const fs::path base = fs::path("runs") / (command + "-" + dataset_name + "-" + compact_timestamp());
    dir = base;
    for (int suffix = 2; fs::exists(dir); ++suffix) {
      dir = base.string() + "-" + std::to_string(suffix);
    }
  }
  fs::create_directories(dir);
  return dir;
}

Manifest::Manifest(fs::path dir, std::string command, std::vector<std::string> argv)
    : dir_(std::move(dir)) {
  doc_["command"] = std::move(command);
  doc_["argv"] = std::move(argv);
  doc_["output_dir"] = dir_.string();
  doc_["version"] = kVersion;
  doc_["git"] = kGitDescribe;
  doc_["started_at"] = timestamp();
  doc_["status"] = "incomplete";
}

void Manifest::set_config(const TrainConfig& config) {
  doc_["config"] = to_text(config);
  doc_["config_hash"] = config_hash(config);
  doc_["affinity"] = {{"energy_fraction", config.affinity.energy_fraction},
                      {"rank_multiplier", config.affinity.rank_multiplier},
                      {"smoothing", config.affinity.smoothing},
                      {"smoothing_power", config.affinity.smoothing_power}};
}

void Manifest::set_seeds(const std::vector<std::uint64_t>& seeds) { doc_["seeds"] = seeds; }

void Manifest::set(const std::string& key, json value) { doc_[key] = std::move(value); }

void Manifest::write_incomplete() {
  doc_["status"] = "incomplete";
  write();
}

void Manifest::complete() {
  doc_["status"] = "complete";
  doc_["finished_at"] = timestamp();
  write();
}

void Manifest::fail(const std::string& error) {
  doc_["status"] = "failed";
  doc_["error"] = error;
  doc_["finished_at"] = timestamp();
  write();
}

void Manifest::write() const { write_json(dir_ / "manifest.json", doc_); }

json metrics_json(const MetricReport& report) {
  return {{"acc", report.acc}, {"nmi", report.nmi}, {"ari", report.ari}, {"n", report.n}};
}

json summary_json(const MetricSummary& summary) {
  return {{"mean", metrics_json(summary.mean)},
          {"std", metrics_json(summary.stddev)},
          {"runs", summary.runs}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

void write_json(const fs::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

void write_history_csv(const fs::path& path, const std::vector<LossBreakdown>& history) {
  std::ostringstream out;
  out << std::setprecision(17) << "epoch,rec,nbr,cse,coef,total\n";
  for (std::size_t e = 0; e < history.size(); ++e) {
    const auto& h = history[e];
    out << e << ',' << h.rec << ',' << h.nbr << ',' << h.cse << ',' << h.coef << ',' << h.total
        << '\n';
  }
  write_text(path, out.str());
}

void write_labels_csv(const fs::path& path, const std::vector<int>& labels) {
  std::ostringstream out;
  out << "node_id,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) out << i << ',' << labels[i] << '\n';
  write_text(path, out.str());
}

void write_run_artifacts(const fs::path& dir, RunResult& result, const Graph& graph,
                         const ArtifactOptions& options) {
  fs::create_directories(dir);
  json doc;
  doc["seed"] = result.config.seed;
  doc["epochs"] = result.history.size();
  doc["seconds"] = result.seconds;
  doc["config_hash"] = config_hash(result.config);
  if (result.metrics) doc["metrics"] = metrics_json(*result.metrics);
  else doc["metrics"] = nullptr;
  json evaluations = json::array();
  for (const auto& e : result.evaluations) {
    json row{{"epoch", e.epoch}};
    if (e.metrics) row["metrics"] = metrics_json(*e.metrics);
    if (!e.error.empty()) row["error"] = e.error;
    evaluations.push_back(std::move(row));
  }
  doc["evaluations"] = std::move(evaluations);
  write_json(dir / "metrics.json", doc);
  write_history_csv(dir / "history.csv", result.history);
  if (!result.assignment.labels.empty()) write_labels_csv(dir / "labels.csv", result.assignment.labels);
  if (options.checkpoint) {
    const fs::path path = dir / "checkpoint.ncagc";
    save_checkpoint(result.checkpoint, path);
    result.checkpoint_path = path.string();
  }
  if (options.matrices) {
    write_npy(dir / "coefficients.npy", result.checkpoint.coefficients.effective());
    try {
      write_npy(dir / "affinity.npy", build_affinity(result.checkpoint.coefficients,
                                                     graph.num_clusters, result.config.affinity));
    } catch (const ValidationError& err) {
      log_warning(std::string("affinity not exported: ") + err.what());
    }
  }
}

std::string format_metrics(const MetricReport& report) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << "ACC " << report.acc << "  NMI " << report.nmi
      << "  ARI " << report.ari;
  return out.str();
}

std::string format_summary(const MetricSummary& summary) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << "ACC " << summary.mean.acc << " +/- "
      << summary.stddev.acc << "  NMI " << summary.mean.nmi << " +/- " << summary.stddev.nmi
      << "  ARI " << summary.mean.ari << " +/- " << summary.stddev.ari << "  (" << summary.runs
      << " runs)";
  return out.str();
}

std::vector<std::string> split(const std::string& text, char separator) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, separator)) {
    part.erase(0, part.find_first_not_of(" \t"));
    part.erase(part.find_last_not_of(" \t") + 1);
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  for (const auto& part : split(text, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != part.size()) throw ConfigError("not a number: '" + part + "'");
    values.push_back(v);
  }
  if (values.empty()) throw ConfigError("empty value list");
  return values;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  for (const auto& part : split(text, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != part.size()) throw ConfigError("not an integer: '" + part + "'");
    values.push_back(v);
  }
  if (values.empty()) throw ConfigError("empty value list");
  return values;
}

}  // namespace ncagc::cli
