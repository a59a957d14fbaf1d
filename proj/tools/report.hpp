#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ncagc/types.hpp"

namespace ncagc::cli {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  bool log_x = false;
  bool log_y = false;
};

/// Rows of `values` run along y, columns along x. NaN cells are left blank.
struct Heatmap {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<std::string> x_ticks;
  std::vector<std::string> y_ticks;
  Matrix values;
};

std::string render_svg(const LinePlot& plot);
std::string render_svg(const Heatmap& map);

/// Bundled reference numbers (table,method,input,dataset,acc,nmi,ari,note),
/// every row marked "published, not reproduced".
const std::string& published_reference_csv();

/// Builds tables and plots from every result found under `input`.
/// Returns the files written; throws ConfigError if `input` holds no
/// results.
std::vector<std::filesystem::path> generate_report(const std::filesystem::path& input,
                                                   const std::filesystem::path& output);

/// Minimal CSV reader for the files this tool writes (double quotes are
/// honoured, embedded newlines are not).
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

}  // namespace ncagc::cli
