#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ncagc/config.hpp"
#include "ncagc/graph_io.hpp"
#include "ncagc/metrics.hpp"
#include "ncagc/trainer.hpp"

namespace ncagc::cli {

inline constexpr const char* kDataDirEnv = "NCAGC_DATA_DIR";

struct CommonOptions {
  std::string dataset = "toy";
  std::string data_dir;
  std::string config_path;
  std::string preset;
  std::vector<std::string> overrides;
  std::optional<int> epochs;
  std::uint64_t seed = 0;
  int seeds = 1;
  std::string out;
  bool overwrite = false;
};

/// --data-dir, else $NCAGC_DATA_DIR, else ./data.
std::filesystem::path data_dir(const CommonOptions& options);

/// `toy` is generated in memory; an existing path is loaded directly;
/// otherwise the name is looked up under the data directory as
/// `<name>.npk`, `<name>/<name>.npk` or an edge-list directory `<name>/`.
Graph resolve_dataset(const CommonOptions& options);

/// Per-dataset defaults, then --preset, --config, --set and --epochs.
TrainConfig build_config(const CommonOptions& options, const std::string& dataset_name);

std::vector<std::uint64_t> seed_list(const CommonOptions& options);

/// Creates the output directory. An existing non-empty directory is an
/// error unless `overwrite`; without --out a fresh name under ./runs is
/// chosen.
std::filesystem::path prepare_output_dir(const CommonOptions& options, const std::string& command,
                                         const std::string& dataset_name);

/// Run manifest, written before any work and rewritten on completion.
class Manifest {
 public:
  Manifest(std::filesystem::path dir, std::string command, std::vector<std::string> argv);

  void set_config(const TrainConfig& config);
  void set_seeds(const std::vector<std::uint64_t>& seeds);
  void set(const std::string& key, nlohmann::json value);
  void write_incomplete();
  void complete();
  void fail(const std::string& error);

 private:
  void write() const;

  std::filesystem::path dir_;
  nlohmann::json doc_;
};

nlohmann::json metrics_json(const MetricReport& report);
nlohmann::json summary_json(const MetricSummary& summary);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);
void write_history_csv(const std::filesystem::path& path, const std::vector<LossBreakdown>& history);
void write_labels_csv(const std::filesystem::path& path, const std::vector<int>& labels);

struct ArtifactOptions {
  bool checkpoint = true;
  bool matrices = false;
};

/// metrics.json, history.csv, labels.csv, plus the checkpoint and the
/// coefficient/affinity matrices (.npy) when requested.
void write_run_artifacts(const std::filesystem::path& dir, RunResult& result, const Graph& graph,
                         const ArtifactOptions& options);

std::string format_metrics(const MetricReport& report);
std::string format_summary(const MetricSummary& summary);

std::vector<double> parse_double_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);
std::vector<std::string> split(const std::string& text, char separator);

}  // namespace ncagc::cli
