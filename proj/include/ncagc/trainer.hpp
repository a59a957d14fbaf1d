#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ncagc/checkpoint.hpp"
#include "ncagc/clustering.hpp"
#include "ncagc/config.hpp"
#include "ncagc/graph_io.hpp"
#include "ncagc/losses.hpp"
#include "ncagc/metrics.hpp"

namespace ncagc {

struct EvaluationRecord {
  int epoch = 0;
  std::optional<MetricReport> metrics;
  std::string error;
};

struct RunResult {
  /// Metrics of the final evaluation; empty if the graph has no labels or
  /// the final clustering failed.
  std::optional<MetricReport> metrics;
  ClusterAssignment assignment;
  std::vector<LossBreakdown> history;
  std::vector<EvaluationRecord> evaluations;
  double seconds = 0.0;
  TrainConfig config;
  Checkpoint checkpoint;
  std::string checkpoint_path;
};

struct TrainHooks {
  std::function<void(int epoch, const LossBreakdown&)> on_epoch;
  std::function<void(const EvaluationRecord&)> on_evaluation;
};

/// Applies the configured attribute normalization and adds self-loops.
Graph prepare_graph(const Graph& raw, const TrainConfig& config);

struct Gradients {
  AutoencoderParams params;
  Matrix coefficients;
};

/// Called with the latent matrix of the current forward pass; returns the
/// positives to contrast against.
using PositiveSource = std::function<const PositiveMask&(const Matrix& latent)>;

/// One forward pass of the weighted objective on a prepared graph, plus the
/// backward pass when `gradients` is non-null. Terms whose weight is zero
/// (or, for the neighbourhood term, that are disabled) are skipped and
/// reported as 0; `positives` is then not called.
LossBreakdown evaluate_objective(const Graph& prepared, const TrainConfig& config,
                                 const AutoencoderParams& params,
                                 const SelfExpressionMatrix& coefficients,
                                 const PositiveSource& positives, Gradients* gradients = nullptr);

/// Joint training of the autoencoder and the self-expression matrix:
/// per epoch, refresh positives on schedule, encode, self-express, decode,
/// take one Adam step on the weighted loss, and cluster every eval_every
/// epochs (monitoring only) plus once at the end.
///
/// `graph` is the raw dataset; normalization and self-loops are applied
/// internally. Throws NumericalError naming the epoch and loss component if
/// a loss becomes non-finite. Eigensolver failures during evaluation are
/// recorded in RunResult::evaluations and training continues.
RunResult train(const Graph& graph, const TrainConfig& config, const TrainHooks& hooks = {});

struct Evaluation {
  ClusterAssignment assignment;
  std::optional<MetricReport> metrics;
  Matrix affinity;
};

/// build_affinity -> spectral_clustering -> metrics, no parameter updates.
/// Throws ValidationError if the checkpoint's C does not match the graph.
Evaluation evaluate(const Checkpoint& checkpoint, const Graph& graph);

enum class AblationVariant { full, wo_nbr, wo_cse, wo_att };

/// wo_nbr drops the neighbourhood term, wo_cse swaps in the plain
/// self-expression loss, wo_att uses mean aggregation instead of attention.
TrainConfig ablation_config(const TrainConfig& base, AblationVariant variant);
RunResult run_ablation(const Graph& graph, const TrainConfig& base, AblationVariant variant,
                       const TrainHooks& hooks = {});

/// One run per K, all with base.seed.
std::vector<RunResult> sweep_neighborhood_size(const Graph& graph, const TrainConfig& base,
                                               const std::vector<int>& k_values,
                                               const TrainHooks& hooks = {});

struct MetricSummary {
  MetricReport mean;
  MetricReport stddev;
  std::size_t runs = 0;
};

/// Mean and population standard deviation across runs.
MetricSummary summarize(const std::vector<MetricReport>& reports);

std::string to_string(AblationVariant variant);
AblationVariant parse_ablation_variant(const std::string& text);

}  // namespace ncagc
