#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cli_support.hpp"
#include "ncagc/checkpoint.hpp"
#include "ncagc/clustering.hpp"
#include "ncagc/log.hpp"
#include "ncagc/npy.hpp"
#include "ncagc/version.hpp"
#include "report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ncagc;
using namespace ncagc::cli;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Flags {
  CommonOptions common;
  bool verbose = false;
  bool quiet = false;
  bool export_matrices = false;
  bool keep_checkpoints = false;
  std::string checkpoint;
  std::string variants = "full,wo_nbr,wo_cse,wo_att";
  std::string k_sweep;
  std::string lambda_grid;
  std::string lambda_axes = "nbr,cse";
  std::string method = "both";
  std::string normalization = "none";
  int k = 0;
  std::string report_in;
  std::string convert_format = "packed";
};

void add_dataset_options(CLI::App* cmd, Flags& f) {
  cmd->add_option("--dataset", f.common.dataset, "dataset name (toy is built in) or path")
      ->capture_default_str();
  cmd->add_option("--data-dir", f.common.data_dir,
                  std::string("dataset directory (default $") + kDataDirEnv + " or ./data)");
}

void add_run_options(CLI::App* cmd, Flags& f) {
  add_dataset_options(cmd, f);
  cmd->add_option("--config", f.common.config_path, "key = value config file");
  cmd->add_option("--preset", f.common.preset, "per-dataset parameter table: table2 or prose");
  cmd->add_option("--set", f.common.overrides, "config override key=value (repeatable)");
  cmd->add_option("--epochs", f.common.epochs, "override the number of epochs");
  cmd->add_option("--seed", f.common.seed, "first seed")->capture_default_str();
  cmd->add_option("--seeds", f.common.seeds, "number of consecutive seeds")->capture_default_str();
  cmd->add_option("--out", f.common.out, "output directory");
  cmd->add_flag("--overwrite", f.common.overwrite, "replace a non-empty output directory");
}

TrainHooks progress_hooks(const Flags& f, int epochs) {
  TrainHooks hooks;
  if (!f.verbose) return hooks;
  const int every = std::max(1, epochs / 20);
  hooks.on_epoch = [every, epochs](int epoch, const LossBreakdown& l) {
    if ((epoch + 1) % every != 0 && epoch + 1 != epochs) return;
    std::clog << "  epoch " << epoch + 1 << "/" << epochs << "  rec " << l.rec << "  nbr " << l.nbr
              << "  cse " << l.cse << "  coef " << l.coef << "  total " << l.total << '\n';
  };
  hooks.on_evaluation = [](const EvaluationRecord& r) {
    if (r.metrics) std::clog << "  eval @" << r.epoch << "  " << format_metrics(*r.metrics) << '\n';
  };
  return hooks;
}

std::string run_line(const std::string& tag, const RunResult& r) {
  std::ostringstream out;
  out << tag << "  ";
  if (r.metrics) out << format_metrics(*r.metrics);
  else out << "(no labels)";
  out << "  [" << std::fixed << std::setprecision(1) << r.seconds << " s]";
  return out.str();
}

/// Shared skeleton: output dir, manifest written first, failure recorded.
template <typename Body>
int with_manifest(const Flags& f, const std::string& command, const std::vector<std::string>& argv,
                  Body body) {
  const std::string label = fs::path(f.common.dataset).filename().string();
  const fs::path out = prepare_output_dir(f.common, command, label.empty() ? "dataset" : label);
  Manifest manifest(out, command, argv);
  manifest.set("dataset", label);
  manifest.write_incomplete();
  try {
    body(out, manifest);
  } catch (const std::exception& e) {
    manifest.fail(e.what());
    throw;
  }
  manifest.complete();
  std::cout << "results in " << out.string() << '\n';
  return 0;
}

int cmd_train(const Flags& f, const std::vector<std::string>& argv) {
  return with_manifest(f, "train", argv, [&](const fs::path& out, Manifest& manifest) {
    const Graph graph = resolve_dataset(f.common);
    manifest.set("dataset", graph.name);
    const TrainConfig base = build_config(f.common, graph.name);
    const auto seeds = seed_list(f.common);
    manifest.set_config(base);
    manifest.set_seeds(seeds);
    manifest.write_incomplete();

    std::vector<MetricReport> reports;
    json runs = json::array();
    for (const auto seed : seeds) {
      TrainConfig config = base;
      config.seed = seed;
      RunResult result = train(graph, config, progress_hooks(f, config.epochs));
      write_run_artifacts(out / ("seed_" + std::to_string(seed)), result, graph,
                          {true, f.export_matrices});
      std::cout << run_line("seed " + std::to_string(seed), result) << '\n';
      json row{{"seed", seed}, {"seconds", result.seconds}};
      row["metrics"] = result.metrics ? metrics_json(*result.metrics) : json(nullptr);
      runs.push_back(std::move(row));
      if (result.metrics) reports.push_back(*result.metrics);
    }
    json doc{{"dataset", graph.name}, {"runs", runs}};
    if (!reports.empty()) {
      const MetricSummary s = summarize(reports);
      doc["summary"] = summary_json(s);
      std::cout << "mean  " << format_summary(s) << '\n';
    }
    write_json(out / "metrics.json", doc);
  });
}

int cmd_evaluate(const Flags& f, const std::vector<std::string>& argv) {
  return with_manifest(f, "evaluate", argv, [&](const fs::path& out, Manifest& manifest) {
    if (f.checkpoint.empty()) throw ConfigError("--checkpoint is required");
    const Checkpoint checkpoint = load_checkpoint(f.checkpoint);
    const Graph graph = resolve_dataset(f.common);
    manifest.set("dataset", graph.name);
    manifest.set("checkpoint", f.checkpoint);
    manifest.set_config(checkpoint.config);
    manifest.write_incomplete();
    const Evaluation e = evaluate(checkpoint, graph);
    write_labels_csv(out / "labels.csv", e.assignment.labels);
    json doc{{"dataset", graph.name}, {"checkpoint", f.checkpoint}};
    doc["metrics"] = e.metrics ? metrics_json(*e.metrics) : json(nullptr);
    write_json(out / "metrics.json", doc);
    if (f.export_matrices) write_npy(out / "affinity.npy", e.affinity);
    if (e.metrics) std::cout << format_metrics(*e.metrics) << '\n';
  });
}

int cmd_ablate(const Flags& f, const std::vector<std::string>& argv) {
  std::vector<AblationVariant> requested;
  for (const auto& name : split(f.variants, ',')) requested.push_back(parse_ablation_variant(name));
  if (requested.empty()) throw ConfigError("--variants is empty");
  // Table rows: the three ablations first, the full model last.
  std::vector<AblationVariant> order;
  for (const auto v : {AblationVariant::wo_nbr, AblationVariant::wo_cse, AblationVariant::wo_att,
                       AblationVariant::full}) {
    if (std::find(requested.begin(), requested.end(), v) != requested.end()) order.push_back(v);
  }

  return with_manifest(f, "ablate", argv, [&](const fs::path& out, Manifest& manifest) {
    const Graph graph = resolve_dataset(f.common);
    manifest.set("dataset", graph.name);
    const TrainConfig base = build_config(f.common, graph.name);
    const auto seeds = seed_list(f.common);
    manifest.set_config(base);
    manifest.set_seeds(seeds);
    json names = json::array();
    for (const auto v : order) names.push_back(to_string(v));
    manifest.set("variants", names);
    manifest.write_incomplete();

    std::ostringstream csv;
    std::ostringstream text;
    csv << "variant,runs,acc,nmi,ari,acc_std,nmi_std,ari_std\n";
    text << std::left << std::setw(10) << "variant" << std::setw(20) << "ACC" << std::setw(20)
         << "NMI" << "ARI\n";
    for (const auto variant : order) {
      std::vector<MetricReport> reports;
      for (const auto seed : seeds) {
        TrainConfig config = base;
        config.seed = seed;
        RunResult result = run_ablation(graph, config, variant, progress_hooks(f, config.epochs));
        write_run_artifacts(out / to_string(variant) / ("seed_" + std::to_string(seed)), result,
                            graph, {f.keep_checkpoints, false});
        std::cout << run_line(to_string(variant) + " seed " + std::to_string(seed), result) << '\n';
        if (result.metrics) reports.push_back(*result.metrics);
      }
      const MetricSummary s = summarize(reports);
      csv << to_string(variant) << ',' << s.runs << ',' << s.mean.acc << ',' << s.mean.nmi << ','
          << s.mean.ari << ',' << s.stddev.acc << ',' << s.stddev.nmi << ',' << s.stddev.ari << '\n';
      auto cell = [&](double mean, double sd) {
        std::ostringstream c;
        c << std::fixed << std::setprecision(3) << mean;
        if (s.runs > 1) c << " +/- " << sd;
        return c.str();
      };
      text << std::left << std::setw(10) << to_string(variant) << std::setw(20)
           << cell(s.mean.acc, s.stddev.acc) << std::setw(20) << cell(s.mean.nmi, s.stddev.nmi)
           << cell(s.mean.ari, s.stddev.ari) << '\n';
    }
    write_text(out / "ablation.csv", csv.str());
    write_text(out / "ablation.txt", text.str());
    std::cout << text.str();
  });
}

int cmd_sweep(const Flags& f, const std::vector<std::string>& argv) {
  if (f.k_sweep.empty() && f.lambda_grid.empty()) {
    throw ConfigError("sweep needs --k-sweep and/or --lambda-grid");
  }
  const std::vector<int> ks = f.k_sweep.empty() ? std::vector<int>{} : parse_int_list(f.k_sweep);
  const std::vector<double> lambdas =
      f.lambda_grid.empty() ? std::vector<double>{} : parse_double_list(f.lambda_grid);
  const auto axes = split(f.lambda_axes, ',');
  for (const auto& a : axes) {
    if (a != "nbr" && a != "cse" && a != "coef") throw ConfigError("unknown lambda axis '" + a + "'");
  }
  if (!lambdas.empty() && axes.empty()) throw ConfigError("--lambda-axes is empty");
  for (const int k : ks) {
    if (k < 1) throw ConfigError("every K in --k-sweep must be >= 1");
  }
  for (const double l : lambdas) {
    if (!(l >= 0.0)) throw ConfigError("lambda values must be >= 0");
  }

  return with_manifest(f, "sweep", argv, [&](const fs::path& out, Manifest& manifest) {
    const Graph graph = resolve_dataset(f.common);
    manifest.set("dataset", graph.name);
    const TrainConfig base = build_config(f.common, graph.name);
    const auto seeds = seed_list(f.common);
    manifest.set_config(base);
    manifest.set_seeds(seeds);
    if (!ks.empty()) manifest.set("k_values", ks);
    if (!lambdas.empty()) {
      manifest.set("lambda_values", lambdas);
      manifest.set("lambda_axes", axes);
    }
    manifest.write_incomplete();

    if (!ks.empty()) {
      std::ostringstream csv;
      csv << std::setprecision(17) << "k,seed,acc,nmi,ari\n";
      for (const auto seed : seeds) {
        TrainConfig config = base;
        config.seed = seed;
        auto runs = sweep_neighborhood_size(graph, config, ks, progress_hooks(f, config.epochs));
        for (std::size_t i = 0; i < runs.size(); ++i) {
          const std::string tag = "k_" + std::to_string(ks[i]);
          write_run_artifacts(out / tag / ("seed_" + std::to_string(seed)), runs[i], graph,
                              {f.keep_checkpoints, false});
          std::cout << run_line("K=" + std::to_string(ks[i]) + " seed " + std::to_string(seed), runs[i])
                    << '\n';
          if (runs[i].metrics) {
            const auto& m = *runs[i].metrics;
            csv << ks[i] << ',' << seed << ',' << m.acc << ',' << m.nmi << ',' << m.ari << '\n';
          }
        }
      }
      write_text(out / "sweep_k.csv", csv.str());
    }

    if (!lambdas.empty()) {
      std::ostringstream csv;
      csv << std::setprecision(17);
      for (const auto& a : axes) csv << a << ',';
      csv << "seed,acc,nmi,ari\n";
      std::vector<std::size_t> idx(axes.size(), 0);
      while (true) {
        TrainConfig config = base;
        std::string tag = "lambda";
        for (std::size_t a = 0; a < axes.size(); ++a) {
          const double v = lambdas[idx[a]];
          if (axes[a] == "nbr") config.weights.nbr = v;
          if (axes[a] == "cse") config.weights.cse = v;
          if (axes[a] == "coef") config.weights.coef = v;
          std::ostringstream t;
          t << '_' << axes[a] << '=' << v;
          tag += t.str();
        }
        for (const auto seed : seeds) {
          config.seed = seed;
          RunResult result = train(graph, config, progress_hooks(f, config.epochs));
          write_run_artifacts(out / tag / ("seed_" + std::to_string(seed)), result, graph,
                              {f.keep_checkpoints, false});
          std::cout << run_line(tag + " seed " + std::to_string(seed), result) << '\n';
          if (result.metrics) {
            for (std::size_t a = 0; a < axes.size(); ++a) csv << lambdas[idx[a]] << ',';
            csv << seed << ',' << result.metrics->acc << ',' << result.metrics->nmi << ','
                << result.metrics->ari << '\n';
          }
        }
        std::size_t a = 0;
        while (a < axes.size() && ++idx[a] == lambdas.size()) idx[a++] = 0;
        if (a == axes.size()) break;
      }
      write_text(out / "sweep_lambda.csv", csv.str());
    }
  });
}

int cmd_baseline(const Flags& f, const std::vector<std::string>& argv) {
  if (f.method != "kmeans" && f.method != "spectral" && f.method != "both") {
    throw ConfigError("--method must be kmeans, spectral or both");
  }
  const AttributeNormalization normalization = parse_normalization(f.normalization);
  return with_manifest(f, "baseline", argv, [&](const fs::path& out, Manifest& manifest) {
    const Graph graph = resolve_dataset(f.common);
    manifest.set("dataset", graph.name);
    const int k = f.k > 0 ? f.k : graph.num_clusters;
    if (k < 1 || k > graph.num_nodes()) {
      throw ConfigError("k = " + std::to_string(k) + " must lie in [1, " +
                        std::to_string(graph.num_nodes()) + "]");
    }
    const auto seeds = seed_list(f.common);
    manifest.set_seeds(seeds);
    manifest.set("method", f.method);
    manifest.set("k", k);
    manifest.set("normalization", to_string(normalization));
    manifest.write_incomplete();

    const Matrix points = normalize_attributes(graph, normalization).attributes;
    std::ostringstream csv;
    csv << std::setprecision(17) << "method,seed,acc,nmi,ari\n";
    json doc{{"dataset", graph.name}, {"k", k}};
    for (const std::string method : {"kmeans", "spectral"}) {
      if (f.method != "both" && f.method != method) continue;
      std::vector<MetricReport> reports;
      for (const auto seed : seeds) {
        const ClusterAssignment a = method == "kmeans"
                                        ? kmeans(points, k, seed).assignment
                                        : spectral_baseline(graph.adjacency, k, seed);
        const fs::path dir = out / method / ("seed_" + std::to_string(seed));
        fs::create_directories(dir);
        write_labels_csv(dir / "labels.csv", a.labels);
        if (!graph.labels) continue;
        const MetricReport m = evaluate_clustering(a.labels, *graph.labels);
        reports.push_back(m);
        csv << method << ',' << seed << ',' << m.acc << ',' << m.nmi << ',' << m.ari << '\n';
        std::cout << method << " seed " << seed << "  " << format_metrics(m) << '\n';
      }
      if (!reports.empty()) {
        const MetricSummary s = summarize(reports);
        doc[method] = summary_json(s);
        std::cout << method << " mean  " << format_summary(s) << '\n';
      }
    }
    write_text(out / "baseline.csv", csv.str());
    write_json(out / "metrics.json", doc);
  });
}

int cmd_report(const Flags& f) {
  if (f.report_in.empty()) throw ConfigError("--in is required");
  const fs::path out = f.common.out.empty() ? fs::path(f.report_in) / "report" : fs::path(f.common.out);
  const auto files = generate_report(f.report_in, out);
  for (const auto& p : files) std::cout << p.string() << '\n';
  return 0;
}

int cmd_convert(const Flags& f) {
  if (f.common.out.empty()) throw ConfigError("--out is required");
  const Graph graph = resolve_dataset(f.common);
  validate(graph);
  if (f.convert_format == "packed") {
    save_packed(graph, f.common.out);
  } else if (f.convert_format == "edge-list") {
    fs::create_directories(f.common.out);
    save_edge_list(graph, f.common.out, graph.name);
  } else {
    throw ConfigError("--format must be packed or edge-list");
  }
  std::cout << graph.name << ": N=" << graph.num_nodes() << " d=" << graph.num_features()
            << " k=" << graph.num_clusters << " |E|=" << count_undirected_edges(graph.adjacency)
            << " -> " << f.common.out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attributed graph clustering with neighbourhood contrast and contrastive "
               "self-expression"};
  app.set_version_flag("--version", std::string(kVersion) + " (" + kGitDescribe + ")");
  app.require_subcommand(1);
  Flags f;
  app.add_flag("-v,--verbose", f.verbose, "per-epoch progress on stderr");
  app.add_flag("-q,--quiet", f.quiet, "suppress warnings");

  auto* train_cmd = app.add_subcommand("train", "train and cluster, one run per seed");
  add_run_options(train_cmd, f);
  train_cmd->add_flag("--export-matrices", f.export_matrices,
                      "also write coefficients.npy and affinity.npy");

  auto* eval_cmd = app.add_subcommand("evaluate", "cluster from a saved checkpoint");
  add_dataset_options(eval_cmd, f);
  eval_cmd->add_option("--checkpoint", f.checkpoint, "checkpoint file")->required();
  eval_cmd->add_option("--out", f.common.out, "output directory");
  eval_cmd->add_flag("--overwrite", f.common.overwrite, "replace a non-empty output directory");
  eval_cmd->add_flag("--export-matrices", f.export_matrices, "also write affinity.npy");

  auto* ablate_cmd = app.add_subcommand("ablate", "compare the full model against its ablations");
  add_run_options(ablate_cmd, f);
  ablate_cmd->add_option("--variants", f.variants, "comma list of full,wo_nbr,wo_cse,wo_att")
      ->capture_default_str();
  ablate_cmd->add_flag("--keep-checkpoints", f.keep_checkpoints, "save a checkpoint per run");

  auto* sweep_cmd = app.add_subcommand("sweep", "neighbourhood-size sweep and/or loss-weight grid");
  add_run_options(sweep_cmd, f);
  sweep_cmd->add_option("--k-sweep", f.k_sweep, "comma list of K values, e.g. 3,5,7,10,15,20,30");
  sweep_cmd->add_option("--lambda-grid", f.lambda_grid,
                        "comma list of weight values, crossed over --lambda-axes");
  sweep_cmd->add_option("--lambda-axes", f.lambda_axes, "weights to vary: nbr, cse, coef")
      ->capture_default_str();
  sweep_cmd->add_flag("--keep-checkpoints", f.keep_checkpoints, "save a checkpoint per run");

  auto* baseline_cmd = app.add_subcommand("baseline", "k-means on attributes, spectral on adjacency");
  add_run_options(baseline_cmd, f);
  baseline_cmd->add_option("--method", f.method, "kmeans, spectral or both")->capture_default_str();
  baseline_cmd->add_option("--k", f.k, "number of clusters (default: from labels)");
  baseline_cmd->add_option("--normalization", f.normalization, "attribute normalization for k-means")
      ->capture_default_str();

  auto* report_cmd = app.add_subcommand("report", "tables and SVG plots from stored results");
  report_cmd->add_option("--in", f.report_in, "results directory")->required();
  report_cmd->add_option("--out", f.common.out, "report directory (default <in>/report)");

  auto* convert_cmd = app.add_subcommand("convert", "rewrite a dataset as packed or edge-list");
  add_dataset_options(convert_cmd, f);
  convert_cmd->add_option("--out", f.common.out, "output file or directory")->required();
  convert_cmd->add_option("--format", f.convert_format, "packed or edge-list")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  if (f.quiet) log_level() = LogLevel::quiet;
  if (f.verbose) log_level() = LogLevel::info;
  const std::vector<std::string> args(argv, argv + argc);

  try {
    if (*train_cmd) return cmd_train(f, args);
    if (*eval_cmd) return cmd_evaluate(f, args);
    if (*ablate_cmd) return cmd_ablate(f, args);
    if (*sweep_cmd) return cmd_sweep(f, args);
    if (*baseline_cmd) return cmd_baseline(f, args);
    if (*report_cmd) return cmd_report(f);
    if (*convert_cmd) return cmd_convert(f);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
