#include "ncagc/trainer.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "ncagc/knn.hpp"
#include "ncagc/log.hpp"
#include "ncagc/self_expression.hpp"

namespace ncagc {
namespace {

/// Adam over every trainable tensor: layer weights, attention vectors,
/// PReLU slopes and the self-expression coefficients.
class Adam {
 public:
  Adam(double lr, double beta1, double beta2, double epsilon)
      : lr_(lr), beta1_(beta1), beta2_(beta2), epsilon_(epsilon) {}

  void step(AutoencoderParams& params, const AutoencoderParams& grads, Matrix& coefficients,
            const Matrix& coef_grad) {
    ++t_;
    slot_ = 0;
    for (auto [layers, glayers] : {std::pair{&params.encoder, &grads.encoder},
                                   std::pair{&params.decoder, &grads.decoder}}) {
      for (std::size_t l = 0; l < layers->size(); ++l) {
        auto& p = (*layers)[l];
        const auto& g = (*glayers)[l];
        update(p.weight.data(), g.weight.data(), p.weight.size());
        update(p.attention.data(), g.attention.data(), p.attention.size());
        if (p.activation == Activation::prelu) update(&p.prelu_slope, &g.prelu_slope, 1);
        else ++slot_;
      }
    }
    update(coefficients.data(), coef_grad.data(), coefficients.size());
  }

 private:
  void update(double* param, const double* grad, Index size) {
    if (slot_ >= first_.size()) {
      first_.emplace_back(Vector::Zero(size));
      second_.emplace_back(Vector::Zero(size));
    }
    Vector& m = first_[slot_];
    Vector& v = second_[slot_];
    ++slot_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (Index i = 0; i < size; ++i) {
      m[i] = beta1_ * m[i] + (1.0 - beta1_) * grad[i];
      v[i] = beta2_ * v[i] + (1.0 - beta2_) * grad[i] * grad[i];
      param[i] -= lr_ * (m[i] / c1) / (std::sqrt(v[i] / c2) + epsilon_);
    }
  }

  double lr_;
  double beta1_;
  double beta2_;
  double epsilon_;
  long t_ = 0;
  std::size_t slot_ = 0;
  std::vector<Vector> first_;
  std::vector<Vector> second_;
};

EvaluationRecord evaluate_at(int epoch, const Checkpoint& checkpoint, const Graph& graph,
                             ClusterAssignment* assignment) {
  EvaluationRecord record;
  record.epoch = epoch;
  try {
    Evaluation e = evaluate(checkpoint, graph);
    record.metrics = e.metrics;
    if (assignment != nullptr) *assignment = std::move(e.assignment);
  } catch (const NumericalError& err) {
    record.error = err.what();
    log_warning("evaluation at epoch " + std::to_string(epoch) + " failed: " + err.what());
  } catch (const ValidationError& err) {
    record.error = err.what();
    log_warning("evaluation at epoch " + std::to_string(epoch) + " failed: " + err.what());
  }
  return record;
}

}  // namespace

Graph prepare_graph(const Graph& raw, const TrainConfig& config) {
  Graph graph = normalize_attributes(raw, config.normalization);
  graph.adjacency = add_self_loops(graph.adjacency);
  return graph;
}

LossBreakdown evaluate_objective(const Graph& prepared, const TrainConfig& config,
                                 const AutoencoderParams& params,
                                 const SelfExpressionMatrix& coefficients,
                                 const PositiveSource& positives, Gradients* gradients) {
  const Index n = prepared.num_nodes();
  const bool use_nbr = config.nbr_enabled && config.weights.nbr > 0.0;
  const bool use_cse = config.weights.cse > 0.0;
  const bool use_coef = config.weights.coef > 0.0;
  const bool backward = gradients != nullptr;

  std::vector<LayerCache> encoder_trace;
  std::vector<LayerCache> decoder_trace;
  const Matrix latent = encode(prepared.attributes, prepared.adjacency, params,
                               backward ? &encoder_trace : nullptr);
  const Matrix expressed = self_express(latent, coefficients);
  const Matrix reconstruction =
      decode(expressed, prepared.adjacency, params, backward ? &decoder_trace : nullptr);

  Matrix grad_reconstruction;
  const double rec = reconstruction_loss(prepared.attributes, reconstruction,
                                         backward ? &grad_reconstruction : nullptr);
  Matrix grad_latent;
  Matrix grad_expressed;
  Matrix grad_coef;
  if (backward) {
    grad_latent = Matrix::Zero(n, latent.cols());
    grad_expressed = Matrix::Zero(n, latent.cols());
    grad_coef = Matrix::Zero(n, n);
  }

  double nbr = 0.0;
  if (use_nbr) {
    const PositiveMask& mask = positives(latent);
    if (backward) {
      Matrix g = Matrix::Zero(n, latent.cols());
      nbr = neighborhood_contrast_loss(latent, mask, &g, config.contrast);
      grad_latent += config.weights.nbr * g;
    } else {
      nbr = neighborhood_contrast_loss(latent, mask, nullptr, config.contrast);
    }
  }
  double cse = 0.0;
  if (use_cse) {
    Matrix gz;
    Matrix ge;
    if (backward) {
      gz = Matrix::Zero(n, latent.cols());
      ge = Matrix::Zero(n, latent.cols());
    }
    cse = config.cse_mode == SelfExpressionMode::contrastive
              ? contrastive_self_expression_loss(latent, expressed, backward ? &gz : nullptr,
                                                 backward ? &ge : nullptr, config.contrast)
              : plain_self_expression_loss(latent, expressed, backward ? &gz : nullptr,
                                           backward ? &ge : nullptr);
    if (backward) {
      grad_latent += config.weights.cse * gz;
      grad_expressed += config.weights.cse * ge;
    }
  }
  double coef = 0.0;
  if (use_coef) {
    coef = coef_regularizer(coefficients, config.coef_norm);
    if (backward) grad_coef += config.weights.coef * coef_regularizer_grad(coefficients, config.coef_norm);
  }

  const LossBreakdown losses = total_loss(rec, nbr, cse, coef, config.weights);
  if (backward) {
    gradients->params = zeros_like(params);
    grad_expressed += decoder_backward(grad_reconstruction, prepared.adjacency, params, decoder_trace,
                                       gradients->params);
    self_express_backward(grad_expressed, latent, coefficients, grad_latent, grad_coef);
    encoder_backward(grad_latent, prepared.adjacency, params, encoder_trace, gradients->params);
    gradients->coefficients = std::move(grad_coef);
  }
  return losses;
}

RunResult train(const Graph& raw, const TrainConfig& config, const TrainHooks& hooks) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();
  const Graph graph = prepare_graph(raw, config);
  const Index n = graph.num_nodes();
  if (n < 2) throw ValidationError("training needs at least two nodes");

  std::mt19937_64 rng(config.seed);
  Checkpoint state;
  state.config = config;
  state.params = init_autoencoder(graph.num_features(), config.encoder_dims, config.gnn_kind,
                                  config.activation, rng);
  state.coefficients = init_self_expression(n);

  Adam optimizer(config.learning_rate, config.adam_beta1, config.adam_beta2, config.adam_epsilon);
  RunResult result;
  result.config = config;
  result.history.reserve(static_cast<std::size_t>(config.epochs));

  PositiveMask positives;
  int epoch = 0;
  const PositiveSource refresh = [&](const Matrix& latent) -> const PositiveMask& {
    if (config.knn_source == KnnSource::latent) {
      if (epoch % config.knn_refresh_every == 0 || positives.num_nodes() == 0) {
        positives = knn_positive_mask(latent, config.neighborhood_size);
      }
    } else if (positives.num_nodes() == 0) {
      positives = knn_positive_mask(graph.attributes, config.neighborhood_size);
    }
    return positives;
  };

  Gradients grads;
  for (; epoch < config.epochs; ++epoch) {
    LossBreakdown losses;
    try {
      losses = evaluate_objective(graph, config, state.params, state.coefficients, refresh, &grads);
    } catch (const NumericalError& err) {
      throw NumericalError("epoch " + std::to_string(epoch) + ": " + err.what());
    }
    result.history.push_back(losses);
    if (hooks.on_epoch) hooks.on_epoch(epoch, losses);
    optimizer.step(state.params, grads.params, state.coefficients.coefficients, grads.coefficients);

    const bool last = epoch + 1 == config.epochs;
    if (config.eval_every > 0 && (epoch + 1) % config.eval_every == 0 && !last) {
      auto record = evaluate_at(epoch + 1, state, graph, nullptr);
      if (hooks.on_evaluation) hooks.on_evaluation(record);
      result.evaluations.push_back(std::move(record));
    }
  }

  auto final_record = evaluate_at(config.epochs, state, graph, &result.assignment);
  if (hooks.on_evaluation) hooks.on_evaluation(final_record);
  result.metrics = final_record.metrics;
  result.evaluations.push_back(std::move(final_record));
  result.checkpoint = std::move(state);
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

Evaluation evaluate(const Checkpoint& checkpoint, const Graph& graph) {
  const Index n = graph.num_nodes();
  if (checkpoint.coefficients.size() != n || checkpoint.coefficients.coefficients.cols() != n) {
    throw ValidationError("checkpoint has " + std::to_string(checkpoint.coefficients.size()) +
                          " nodes, graph has " + std::to_string(n));
  }
  const auto& config = checkpoint.config;
  Evaluation out;
  out.affinity = build_affinity(checkpoint.coefficients, graph.num_clusters, config.affinity);
  out.assignment = spectral_clustering(out.affinity, graph.num_clusters, config.seed,
                                       config.kmeans_restarts);
  if (graph.labels) out.metrics = evaluate_clustering(out.assignment.labels, *graph.labels);
  return out;
}

TrainConfig ablation_config(const TrainConfig& base, AblationVariant variant) {
  TrainConfig config = base;
  switch (variant) {
    case AblationVariant::full: break;
    case AblationVariant::wo_nbr: config.nbr_enabled = false; break;
    case AblationVariant::wo_cse: config.cse_mode = SelfExpressionMode::plain; break;
    case AblationVariant::wo_att: config.gnn_kind = LayerKind::mean_aggregation; break;
  }
  return config;
}

RunResult run_ablation(const Graph& graph, const TrainConfig& base, AblationVariant variant,
                       const TrainHooks& hooks) {
  return train(graph, ablation_config(base, variant), hooks);
}

std::vector<RunResult> sweep_neighborhood_size(const Graph& graph, const TrainConfig& base,
                                               const std::vector<int>& k_values,
                                               const TrainHooks& hooks) {
  for (const int k : k_values) {
    if (k < 1) throw ConfigError("every K in a sweep must be >= 1");
  }
  std::vector<RunResult> runs;
  runs.reserve(k_values.size());
  for (const int k : k_values) {
    TrainConfig config = base;
    config.neighborhood_size = k;
    runs.push_back(train(graph, config, hooks));
  }
  return runs;
}

MetricSummary summarize(const std::vector<MetricReport>& reports) {
  MetricSummary s;
  s.runs = reports.size();
  if (reports.empty()) return s;
  const double count = static_cast<double>(reports.size());
  for (const auto& r : reports) {
    s.mean.acc += r.acc / count;
    s.mean.nmi += r.nmi / count;
    s.mean.ari += r.ari / count;
  }
  for (const auto& r : reports) {
    s.stddev.acc += (r.acc - s.mean.acc) * (r.acc - s.mean.acc) / count;
    s.stddev.nmi += (r.nmi - s.mean.nmi) * (r.nmi - s.mean.nmi) / count;
    s.stddev.ari += (r.ari - s.mean.ari) * (r.ari - s.mean.ari) / count;
  }
  s.stddev.acc = std::sqrt(s.stddev.acc);
  s.stddev.nmi = std::sqrt(s.stddev.nmi);
  s.stddev.ari = std::sqrt(s.stddev.ari);
  s.mean.n = s.stddev.n = reports.front().n;
  return s;
}

std::string to_string(AblationVariant variant) {
  switch (variant) {
    case AblationVariant::full: return "full";
    case AblationVariant::wo_nbr: return "wo_nbr";
    case AblationVariant::wo_cse: return "wo_cse";
    case AblationVariant::wo_att: return "wo_att";
  }
  return "full";
}

AblationVariant parse_ablation_variant(const std::string& text) {
  if (text == "full") return AblationVariant::full;
  if (text == "wo_nbr") return AblationVariant::wo_nbr;
  if (text == "wo_cse") return AblationVariant::wo_cse;
  if (text == "wo_att") return AblationVariant::wo_att;
  throw ConfigError("unknown ablation variant '" + text + "'");
}

}  // namespace ncagc
