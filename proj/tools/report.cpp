#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "cli_support.hpp"
#include "published_data.hpp"

namespace fs = std::filesystem;

namespace ncagc::cli {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 140.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string escape(const std::string& text) {
  std::string out;
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v, int precision = 4) {
  std::ostringstream out;
  out << std::setprecision(precision) << v;
  return out.str();
}

struct Axis {
  double lo;
  double hi;
  bool log;

  double map(double v, double p0, double p1) const {
    double a = lo, b = hi, x = v;
    if (log) {
      a = std::log10(lo);
      b = std::log10(hi);
      x = std::log10(v);
    }
    const double t = b > a ? (x - a) / (b - a) : 0.5;
    return p0 + t * (p1 - p0);
  }

  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      for (int e = static_cast<int>(std::floor(std::log10(lo)));
           e <= static_cast<int>(std::ceil(std::log10(hi))); ++e) {
        const double v = std::pow(10.0, e);
        if (v >= lo * (1 - 1e-9) && v <= hi * (1 + 1e-9)) out.push_back(v);
      }
      return out;
    }
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (const double m : {1.0, 2.0, 5.0, 10.0}) {
      if (raw <= m * mag) {
        step = m * mag;
        break;
      }
    }
    for (double v = std::ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
      out.push_back(std::abs(v) < step * 1e-9 ? 0.0 : v);
    }
    return out;
  }
};

Axis make_axis(const std::vector<double>& values, bool log) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const double v : values) {
    if (!std::isfinite(v) || (log && v <= 0.0)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!std::isfinite(lo)) return {log ? 1.0 : 0.0, log ? 10.0 : 1.0, log};
  if (log) {
    if (hi <= lo) hi = lo * 10.0;
    return {lo, hi, true};
  }
  if (hi <= lo) {
    const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
    return {lo - pad, hi + pad, false};
  }
  const double pad = (hi - lo) * 0.05;
  return {lo - pad, hi + pad, false};
}

void frame(std::ostringstream& svg, const std::string& title, const std::string& x_label,
           const std::string& y_label) {
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(title) << "</text>\n"
      << "<text x=\"" << kLeft + (kWidth - kLeft - kRight) / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n"
      << "<text transform=\"translate(16," << kTop + (kHeight - kTop - kBottom) / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label) << "</text>\n";
}

std::vector<std::vector<std::string>> parse_csv_text(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (const char c : line) {
      if (c == '"') quoted = !quoted;
      else if (c == ',' && !quoted) {
        cells.push_back(cell);
        cell.clear();
      } else {
        cell += c;
      }
    }
    cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

double to_double(const std::string& s) {
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

int column(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

struct Published {
  double acc, nmi, ari;
};

/// (table, method, dataset) -> published numbers.
std::map<std::tuple<std::string, std::string, std::string>, Published> published_index() {
  std::map<std::tuple<std::string, std::string, std::string>, Published> index;
  const auto rows = parse_csv_text(published_reference_csv());
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() < 7) continue;
    index[{row[0], row[1], row[3]}] = {to_double(row[4]), to_double(row[5]), to_double(row[6])};
  }
  return index;
}

const char* const kMetrics[] = {"acc", "nmi", "ari"};

double metric_of(const Published& p, int m) { return m == 0 ? p.acc : m == 1 ? p.nmi : p.ari; }

struct Aggregate {
  std::vector<double> values[3];
  int count = 0;

  void add(double acc, double nmi, double ari) {
    values[0].push_back(acc);
    values[1].push_back(nmi);
    values[2].push_back(ari);
    ++count;
  }
  double mean(int m) const {
    if (!count) return std::numeric_limits<double>::quiet_NaN();
    double s = 0.0;
    for (const double v : values[m]) s += v;
    return s / count;
  }
  double stddev(int m) const {
    if (!count) return std::numeric_limits<double>::quiet_NaN();
    const double mu = mean(m);
    double s = 0.0;
    for (const double v : values[m]) s += (v - mu) * (v - mu);
    return std::sqrt(s / count);
  }
};

bool inside(const fs::path& path, const fs::path& dir) {
  const auto p = fs::weakly_canonical(path).string();
  const auto d = fs::weakly_canonical(dir).string();
  return p.size() > d.size() && p.compare(0, d.size(), d) == 0 && p[d.size()] == '/';
}

std::string slug(const fs::path& relative) {
  std::string s = relative.string();
  if (s.empty() || s == ".") return "run";
  std::replace(s.begin(), s.end(), '/', '_');
  return s;
}

class ReportWriter {
 public:
  ReportWriter(fs::path input, fs::path output) : input_(std::move(input)), output_(std::move(output)) {}

  std::vector<fs::path> run() {
    std::vector<fs::path> histories;
    std::vector<fs::path> run_metrics;
    for (const auto& entry : fs::recursive_directory_iterator(input_)) {
      if (!entry.is_regular_file() || inside(entry.path(), output_)) continue;
      const auto name = entry.path().filename().string();
      if (name == "history.csv") histories.push_back(entry.path());
      if (name == "metrics.json" && !fs::equivalent(entry.path().parent_path(), input_)) {
        run_metrics.push_back(entry.path());
      }
    }
    std::sort(histories.begin(), histories.end());
    std::sort(run_metrics.begin(), run_metrics.end());
    const bool has_tables = fs::exists(input_ / "sweep_k.csv") ||
                            fs::exists(input_ / "sweep_lambda.csv") ||
                            fs::exists(input_ / "ablation.csv") || fs::exists(input_ / "baseline.csv");
    if (histories.empty() && run_metrics.empty() && !has_tables) {
      throw ConfigError("no run results found under " + input_.string());
    }
    fs::create_directories(output_);
    if (fs::exists(input_ / "manifest.json")) {
      std::ifstream in(input_ / "manifest.json");
      const auto doc = nlohmann::json::parse(in, nullptr, false);
      if (doc.is_object() && doc.contains("dataset")) dataset_ = doc["dataset"].get<std::string>();
    }

    emit("published_reference.csv", published_reference_csv());
    for (const auto& h : histories) loss_curve(h);
    runs_table(run_metrics);
    if (fs::exists(input_ / "sweep_k.csv")) k_sweep();
    if (fs::exists(input_ / "sweep_lambda.csv")) lambda_grid();
    if (fs::exists(input_ / "ablation.csv")) ablation();
    comparison();
    return written_;
  }

 private:
  void emit(const std::string& name, const std::string& text) {
    write_text(output_ / name, text);
    written_.push_back(output_ / name);
  }

  void loss_curve(const fs::path& history) {
    const auto rows = read_csv(history);
    if (rows.size() < 2) return;
    LinePlot plot;
    plot.title = "training loss: " + slug(fs::relative(history.parent_path(), input_));
    plot.x_label = "epoch";
    plot.y_label = "loss";
    const auto& header = rows[0];
    bool positive = true;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t c = 1; c < header.size(); ++c) {
      Series s{header[c], {}, {}};
      bool nonzero = false;
      for (std::size_t r = 1; r < rows.size(); ++r) {
        const double v = to_double(rows[r][c]);
        s.x.push_back(to_double(rows[r][0]));
        s.y.push_back(v);
        nonzero = nonzero || v != 0.0;
      }
      if (!nonzero) continue;
      for (const double v : s.y) {
        positive = positive && v > 0.0;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      plot.series.push_back(std::move(s));
    }
    plot.log_y = positive && hi / lo > 100.0;
    emit("loss_" + slug(fs::relative(history.parent_path(), input_)) + ".svg", render_svg(plot));
  }

  void runs_table(const std::vector<fs::path>& files) {
    if (files.empty()) return;
    std::ostringstream out;
    out << "run,seed,epochs,seconds,acc,nmi,ari\n";
    for (const auto& file : files) {
      std::ifstream in(file);
      const auto doc = nlohmann::json::parse(in, nullptr, false);
      if (!doc.is_object() || !doc.contains("metrics") || !doc["metrics"].is_object()) continue;
      const auto& m = doc["metrics"];
      out << slug(fs::relative(file.parent_path(), input_)) << ',' << doc.value("seed", 0) << ','
          << doc.value("epochs", 0) << ',' << doc.value("seconds", 0.0) << ','
          << m.value("acc", 0.0) << ',' << m.value("nmi", 0.0) << ',' << m.value("ari", 0.0) << '\n';
      all_.add(m.value("acc", 0.0), m.value("nmi", 0.0), m.value("ari", 0.0));
    }
    emit("runs.csv", out.str());
  }

  void k_sweep() {
    const auto rows = read_csv(input_ / "sweep_k.csv");
    if (rows.size() < 2) return;
    const auto& header = rows[0];
    const int kc = column(header, "k");
    std::map<double, Aggregate> by_k;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      by_k[to_double(rows[r][kc])].add(to_double(rows[r][column(header, "acc")]),
                                       to_double(rows[r][column(header, "nmi")]),
                                       to_double(rows[r][column(header, "ari")]));
    }
    std::ostringstream table;
    table << "k,runs,acc_mean,acc_std,nmi_mean,nmi_std,ari_mean,ari_std\n";
    for (const auto& [k, agg] : by_k) {
      table << k << ',' << agg.count;
      for (int m = 0; m < 3; ++m) table << ',' << agg.mean(m) << ',' << agg.stddev(m);
      table << '\n';
    }
    emit("sweep_k_summary.csv", table.str());

    const auto published = published_index();
    for (int m = 0; m < 3; ++m) {
      LinePlot plot;
      plot.title = std::string(kMetrics[m]) + " vs neighbourhood size";
      plot.x_label = "K";
      plot.y_label = kMetrics[m];
      Series ours{"this run", {}, {}};
      Series theirs{"published, not reproduced", {}, {}};
      for (const auto& [k, agg] : by_k) {
        ours.x.push_back(k);
        ours.y.push_back(agg.mean(m));
        const auto it = published.find({"neighborhood_size", "K=" + num(k), dataset_});
        if (it != published.end()) {
          theirs.x.push_back(k);
          theirs.y.push_back(metric_of(it->second, m));
        }
      }
      plot.series.push_back(std::move(ours));
      if (!theirs.x.empty()) plot.series.push_back(std::move(theirs));
      emit(std::string("k_") + kMetrics[m] + ".svg", render_svg(plot));
    }
  }

  void lambda_grid() {
    const auto rows = read_csv(input_ / "sweep_lambda.csv");
    if (rows.size() < 2) return;
    const auto& header = rows[0];
    const int seed_col = column(header, "seed");
    if (seed_col < 1) return;
    const std::vector<std::string> axes(header.begin(), header.begin() + seed_col);
    std::map<std::vector<double>, Aggregate> cells;
    std::vector<std::set<double>> levels(axes.size());
    for (std::size_t r = 1; r < rows.size(); ++r) {
      std::vector<double> key;
      for (int a = 0; a < seed_col; ++a) {
        key.push_back(to_double(rows[r][a]));
        levels[a].insert(key.back());
      }
      cells[key].add(to_double(rows[r][column(header, "acc")]),
                     to_double(rows[r][column(header, "nmi")]),
                     to_double(rows[r][column(header, "ari")]));
    }
    std::ostringstream table;
    for (const auto& a : axes) table << a << ',';
    table << "runs,acc_mean,nmi_mean,ari_mean\n";
    for (const auto& [key, agg] : cells) {
      for (const double v : key) table << v << ',';
      table << agg.count << ',' << agg.mean(0) << ',' << agg.mean(1) << ',' << agg.mean(2) << '\n';
    }
    emit("sweep_lambda_summary.csv", table.str());

    for (int m = 0; m < 3; ++m) {
      if (axes.size() == 1) {
        LinePlot plot;
        plot.title = std::string(kMetrics[m]) + " vs lambda_" + axes[0];
        plot.x_label = "lambda_" + axes[0];
        plot.y_label = kMetrics[m];
        plot.log_x = *levels[0].begin() > 0.0;
        Series s{"this run", {}, {}};
        for (const auto& [key, agg] : cells) {
          s.x.push_back(key[0]);
          s.y.push_back(agg.mean(m));
        }
        plot.series.push_back(std::move(s));
        emit(std::string("lambda_") + kMetrics[m] + ".svg", render_svg(plot));
      } else if (axes.size() == 2) {
        Heatmap map;
        map.title = std::string(kMetrics[m]) + " over lambda_" + axes[0] + " x lambda_" + axes[1];
        map.x_label = "lambda_" + axes[0];
        map.y_label = "lambda_" + axes[1];
        const std::vector<double> xs(levels[0].begin(), levels[0].end());
        const std::vector<double> ys(levels[1].begin(), levels[1].end());
        for (const double x : xs) map.x_ticks.push_back(num(x));
        for (const double y : ys) map.y_ticks.push_back(num(y));
        map.values = Matrix::Constant(static_cast<Index>(ys.size()), static_cast<Index>(xs.size()),
                                      std::numeric_limits<double>::quiet_NaN());
        for (const auto& [key, agg] : cells) {
          const auto xi = std::find(xs.begin(), xs.end(), key[0]) - xs.begin();
          const auto yi = std::find(ys.begin(), ys.end(), key[1]) - ys.begin();
          map.values(yi, xi) = agg.mean(m);
        }
        emit(std::string("lambda_heatmap_") + kMetrics[m] + ".svg", render_svg(map));
      }
    }
  }

  void ablation() {
    const auto rows = read_csv(input_ / "ablation.csv");
    if (rows.size() < 2) return;
    const auto& header = rows[0];
    const auto published = published_index();
    std::ostringstream table;
    table << "variant,acc,nmi,ari,published_acc,published_nmi,published_ari\n";
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const std::string variant = rows[r][column(header, "variant")];
      table << variant;
      for (int m = 0; m < 3; ++m) table << ',' << rows[r][column(header, kMetrics[m])];
      const auto it = published.find({"ablation", variant, dataset_});
      for (int m = 0; m < 3; ++m) {
        table << ',';
        if (it != published.end()) table << metric_of(it->second, m);
      }
      table << '\n';
    }
    emit("ablation_comparison.csv", table.str());
  }

  /// Published clustering rows for the dataset next to whatever this
  /// directory measured (full-model runs and baselines).
  void comparison() {
    const auto published = published_index();
    std::ostringstream table;
    table << "method,source,acc,nmi,ari\n";
    bool any = false;
    const auto rows = parse_csv_text(published_reference_csv());
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (rows[r][0] != "clustering" || rows[r][3] != dataset_) continue;
      table << rows[r][1] << ",\"published, not reproduced\"," << rows[r][4] << ',' << rows[r][5]
            << ',' << rows[r][6] << '\n';
      any = true;
    }
    if (fs::exists(input_ / "baseline.csv")) {
      const auto b = read_csv(input_ / "baseline.csv");
      std::map<std::string, Aggregate> by_method;
      for (std::size_t r = 1; r < b.size(); ++r) {
        by_method[b[r][column(b[0], "method")]].add(to_double(b[r][column(b[0], "acc")]),
                                                    to_double(b[r][column(b[0], "nmi")]),
                                                    to_double(b[r][column(b[0], "ari")]));
      }
      for (const auto& [method, agg] : by_method) {
        table << method << ",this run," << agg.mean(0) << ',' << agg.mean(1) << ',' << agg.mean(2)
              << '\n';
        any = true;
      }
    } else if (all_.count > 0 && !fs::exists(input_ / "ablation.csv") &&
               !fs::exists(input_ / "sweep_k.csv") && !fs::exists(input_ / "sweep_lambda.csv")) {
      table << "NCAGC,this run," << all_.mean(0) << ',' << all_.mean(1) << ',' << all_.mean(2) << '\n';
      any = true;
    }
    if (any) emit("comparison.csv", table.str());
  }

  fs::path input_;
  fs::path output_;
  std::string dataset_;
  Aggregate all_;
  std::vector<fs::path> written_;
};

}  // namespace

std::string render_svg(const LinePlot& plot) {
  std::vector<double> xs, ys;
  for (const auto& s : plot.series) {
    xs.insert(xs.end(), s.x.begin(), s.x.end());
    ys.insert(ys.end(), s.y.begin(), s.y.end());
  }
  const Axis ax = make_axis(xs, plot.log_x);
  const Axis ay = make_axis(ys, plot.log_y);
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;

  std::ostringstream svg;
  frame(svg, plot.title, plot.x_label, plot.y_label);
  svg << "<rect x=\"" << x0 << "\" y=\"" << y1 << "\" width=\"" << x1 - x0 << "\" height=\""
      << y0 - y1 << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (const double t : ax.ticks()) {
    const double px = ax.map(t, x0, x1);
    svg << "<line x1=\"" << px << "\" y1=\"" << y0 << "\" x2=\"" << px << "\" y2=\"" << y0 + 5
        << "\" stroke=\"black\"/><text x=\"" << px << "\" y=\"" << y0 + 18
        << "\" text-anchor=\"middle\">" << num(t) << "</text>\n";
  }
  for (const double t : ay.ticks()) {
    const double py = ay.map(t, y0, y1);
    svg << "<line x1=\"" << x0 - 5 << "\" y1=\"" << py << "\" x2=\"" << x1 << "\" y2=\"" << py
        << "\" stroke=\"#dddddd\"/><text x=\"" << x0 - 8 << "\" y=\"" << py + 4
        << "\" text-anchor=\"end\">" << num(t) << "</text>\n";
  }
  for (std::size_t i = 0; i < plot.series.size(); ++i) {
    const auto& s = plot.series[i];
    const char* color = kPalette[i % std::size(kPalette)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t p = 0; p < s.x.size(); ++p) {
      if (!std::isfinite(s.y[p]) || (plot.log_y && s.y[p] <= 0.0)) continue;
      svg << ax.map(s.x[p], x0, x1) << ',' << ay.map(s.y[p], y0, y1) << ' ';
    }
    svg << "\"/>\n";
    if (s.x.size() <= 40) {
      for (std::size_t p = 0; p < s.x.size(); ++p) {
        if (!std::isfinite(s.y[p]) || (plot.log_y && s.y[p] <= 0.0)) continue;
        svg << "<circle cx=\"" << ax.map(s.x[p], x0, x1) << "\" cy=\"" << ay.map(s.y[p], y0, y1)
            << "\" r=\"3\" fill=\"" << color << "\"/>\n";
      }
    }
    const double ly = y1 + 14 + 18 * static_cast<double>(i);
    svg << "<line x1=\"" << x1 + 10 << "\" y1=\"" << ly << "\" x2=\"" << x1 + 30 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/><text x=\"" << x1 + 35 << "\" y=\""
        << ly + 4 << "\" font-size=\"10\">" << escape(s.name) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string render_svg(const Heatmap& map) {
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  const Index rows = map.values.rows();
  const Index cols = map.values.cols();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      const double v = map.values(r, c);
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  auto colour = [&](double v) {
    // light yellow -> dark blue
    const double t = hi > lo ? (v - lo) / (hi - lo) : 0.5;
    const int r = static_cast<int>(255 - t * (255 - 33));
    const int g = static_cast<int>(250 - t * (250 - 64));
    const int b = static_cast<int>(205 - t * (205 - 140));
    std::ostringstream out;
    out << "rgb(" << r << ',' << g << ',' << b << ')';
    return out.str();
  };

  std::ostringstream svg;
  frame(svg, map.title, map.x_label, map.y_label);
  const double cw = cols > 0 ? (x1 - x0) / static_cast<double>(cols) : 0.0;
  const double ch = rows > 0 ? (y0 - y1) / static_cast<double>(rows) : 0.0;
  for (Index r = 0; r < rows; ++r) {
    // first row at the bottom
    const double top = y0 - ch * static_cast<double>(r + 1);
    for (Index c = 0; c < cols; ++c) {
      const double v = map.values(r, c);
      const double left = x0 + cw * static_cast<double>(c);
      if (!std::isfinite(v)) continue;
      const double t = hi > lo ? (v - lo) / (hi - lo) : 0.5;
      svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << cw << "\" height=\"" << ch
          << "\" fill=\"" << colour(v) << "\"/><text x=\"" << left + cw / 2 << "\" y=\""
          << top + ch / 2 + 4 << "\" text-anchor=\"middle\" font-size=\"10\" fill=\""
          << (t > 0.55 ? "white" : "black") << "\">" << num(v, 3) << "</text>\n";
    }
  }
  for (Index c = 0; c < cols && c < static_cast<Index>(map.x_ticks.size()); ++c) {
    svg << "<text x=\"" << x0 + cw * (static_cast<double>(c) + 0.5) << "\" y=\"" << y0 + 18
        << "\" text-anchor=\"middle\">" << escape(map.x_ticks[c]) << "</text>\n";
  }
  for (Index r = 0; r < rows && r < static_cast<Index>(map.y_ticks.size()); ++r) {
    svg << "<text x=\"" << x0 - 8 << "\" y=\"" << y0 - ch * (static_cast<double>(r) + 0.5) + 4
        << "\" text-anchor=\"end\">" << escape(map.y_ticks[r]) << "</text>\n";
  }
  if (std::isfinite(lo)) {
    svg << "<text x=\"" << x1 + 10 << "\" y=\"" << y1 + 14 << "\" font-size=\"10\">max " << num(hi, 3)
        << "</text><rect x=\"" << x1 + 10 << "\" y=\"" << y1 + 20
        << "\" width=\"16\" height=\"16\" fill=\"" << colour(hi) << "\"/>\n"
        << "<text x=\"" << x1 + 10 << "\" y=\"" << y1 + 52 << "\" font-size=\"10\">min " << num(lo, 3)
        << "</text><rect x=\"" << x1 + 10 << "\" y=\"" << y1 + 58
        << "\" width=\"16\" height=\"16\" fill=\"" << colour(lo) << "\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

const std::string& published_reference_csv() {
  static const std::string text(kPublishedReferenceCsv);
  return text;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_csv_text(text.str());
}

std::vector<fs::path> generate_report(const fs::path& input, const fs::path& output) {
  if (!fs::is_directory(input)) throw ConfigError("not a directory: " + input.string());
  return ReportWriter(input, output).run();
}

}  // namespace ncagc::cli
