#include "ncagc/gat.hpp"

#include <cmath>
#include <stdexcept>

namespace ncagc {
namespace {

double activate(double x, const AttentionLayerParams& p) {
  switch (p.activation) {
    case Activation::prelu: return x > 0.0 ? x : p.prelu_slope * x;
    case Activation::elu: return x > 0.0 ? x : std::expm1(x);
    case Activation::linear: return x;
  }
  return x;
}

double activation_slope(double x, const AttentionLayerParams& p) {
  switch (p.activation) {
    case Activation::prelu: return x > 0.0 ? 1.0 : p.prelu_slope;
    case Activation::elu: return x > 0.0 ? 1.0 : std::exp(x);
    case Activation::linear: return 1.0;
  }
  return 1.0;
}

AttentionLayerParams init_layer(Index in, Index out, Activation activation, std::mt19937_64& rng) {
  AttentionLayerParams layer;
  const double w_limit = std::sqrt(6.0 / static_cast<double>(in + out));
  std::uniform_real_distribution<double> w_dist(-w_limit, w_limit);
  layer.weight.resize(in, out);
  for (Index i = 0; i < in; ++i) {
    for (Index j = 0; j < out; ++j) layer.weight(i, j) = w_dist(rng);
  }
  const double a_limit = std::sqrt(6.0 / static_cast<double>(2 * out + 1));
  std::uniform_real_distribution<double> a_dist(-a_limit, a_limit);
  layer.attention.resize(2 * out);
  for (Index i = 0; i < 2 * out; ++i) layer.attention[i] = a_dist(rng);
  layer.activation = activation;
  layer.prelu_slope = 0.25;
  return layer;
}

void check_finite(const Matrix& m, const char* stage, std::size_t layer) {
  if (!m.allFinite()) {
    throw NumericalError(std::string("non-finite output in ") + stage + " layer " +
                         std::to_string(layer));
  }
}

}  // namespace

bool AttentionLayerParams::all_finite() const {
  return weight.allFinite() && attention.allFinite() && std::isfinite(prelu_slope);
}

AutoencoderParams init_autoencoder(Index input_dim, std::span<const Index> hidden_dims,
                                   LayerKind kind, Activation activation,
                                   std::mt19937_64& rng) {
  if (hidden_dims.empty()) throw ConfigError("encoder needs at least one layer");
  AutoencoderParams params;
  params.kind = kind;
  std::vector<Index> dims{input_dim};
  dims.insert(dims.end(), hidden_dims.begin(), hidden_dims.end());
  for (const Index d : dims) {
    if (d <= 0) throw ConfigError("layer dimensions must be positive");
  }
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    params.encoder.push_back(init_layer(dims[l], dims[l + 1], activation, rng));
  }
  for (std::size_t l = dims.size() - 1; l > 0; --l) {
    params.decoder.push_back(init_layer(dims[l], dims[l - 1], activation, rng));
  }
  return params;
}

AutoencoderParams zeros_like(const AutoencoderParams& params) {
  AutoencoderParams out = params;
  for (auto* layers : {&out.encoder, &out.decoder}) {
    for (auto& layer : *layers) {
      layer.weight.setZero();
      layer.attention.setZero();
      layer.prelu_slope = 0.0;
    }
  }
  return out;
}

Matrix attention_layer_forward(const Matrix& input, const Adjacency& adjacency,
                               const AttentionLayerParams& params, LayerKind kind,
                               LayerCache* cache) {
  const Index n = input.rows();
  const Index d_out = params.output_dim();
  if (input.cols() != params.input_dim()) {
    throw std::invalid_argument("layer input has " + std::to_string(input.cols()) +
                                " columns, weight expects " +
                                std::to_string(params.input_dim()));
  }
  if (adjacency.rows() != n || adjacency.cols() != n) {
    throw std::invalid_argument("adjacency does not match node count");
  }

  Matrix projected = input * params.weight;
  const auto* outer = adjacency.outerIndexPtr();
  const auto* inner = adjacency.innerIndexPtr();
  const std::size_t nnz = static_cast<std::size_t>(adjacency.nonZeros());

  std::vector<double> scores(nnz, 0.0);
  std::vector<double> alpha(nnz, 0.0);
  if (kind == LayerKind::attention) {
    const Vector self_term = projected * params.attention.head(d_out);
    const Vector nbr_term = projected * params.attention.tail(d_out);
    for (Index i = 0; i < n; ++i) {
      const int begin = outer[i];
      const int end = outer[i + 1];
      if (begin == end) {
        throw std::invalid_argument("node " + std::to_string(i) +
                                    " has an empty neighbourhood (missing self-loop)");
      }
      double max_logit = -std::numeric_limits<double>::infinity();
      for (int e = begin; e < end; ++e) {
        const double s = self_term[i] + nbr_term[inner[e]];
        scores[e] = s;
        const double logit = s > 0.0 ? s : kAttentionLeakySlope * s;
        alpha[e] = logit;
        max_logit = std::max(max_logit, logit);
      }
      double total = 0.0;
      for (int e = begin; e < end; ++e) {
        alpha[e] = std::exp(alpha[e] - max_logit);
        total += alpha[e];
      }
      for (int e = begin; e < end; ++e) alpha[e] /= total;
    }
  } else {
    for (Index i = 0; i < n; ++i) {
      const int begin = outer[i];
      const int end = outer[i + 1];
      if (begin == end) {
        throw std::invalid_argument("node " + std::to_string(i) +
                                    " has an empty neighbourhood (missing self-loop)");
      }
      for (int e = begin; e < end; ++e) alpha[e] = 1.0 / static_cast<double>(end - begin);
    }
  }

  Matrix aggregated = Matrix::Zero(n, d_out);
  for (Index i = 0; i < n; ++i) {
    for (int e = outer[i]; e < outer[i + 1]; ++e) {
      aggregated.row(i).noalias() += alpha[e] * projected.row(inner[e]);
    }
  }

  Matrix output = aggregated.unaryExpr([&](double x) { return activate(x, params); });
  if (cache != nullptr) {
    cache->input = input;
    cache->projected = std::move(projected);
    cache->aggregated = std::move(aggregated);
    cache->scores = std::move(scores);
    cache->alpha = std::move(alpha);
  }
  return output;
}

Matrix attention_layer_backward(const Matrix& grad_output, const Adjacency& adjacency,
                                const AttentionLayerParams& params, LayerKind kind,
                                const LayerCache& cache, AttentionLayerParams& grad,
                                bool want_input_grad) {
  const Index n = grad_output.rows();
  const Index d_out = params.output_dim();
  const auto* outer = adjacency.outerIndexPtr();
  const auto* inner = adjacency.innerIndexPtr();

  Matrix grad_agg(n, d_out);
  double grad_slope = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index c = 0; c < d_out; ++c) {
      const double x = cache.aggregated(i, c);
      const double g = grad_output(i, c);
      grad_agg(i, c) = g * activation_slope(x, params);
      if (params.activation == Activation::prelu && x <= 0.0) grad_slope += g * x;
    }
  }
  grad.prelu_slope += grad_slope;

  Matrix grad_projected = Matrix::Zero(n, d_out);
  for (Index i = 0; i < n; ++i) {
    for (int e = outer[i]; e < outer[i + 1]; ++e) {
      grad_projected.row(inner[e]).noalias() += cache.alpha[e] * grad_agg.row(i);
    }
  }

  if (kind == LayerKind::attention) {
    Vector grad_self = Vector::Zero(n);
    Vector grad_nbr = Vector::Zero(n);
    std::vector<double> grad_alpha;
    for (Index i = 0; i < n; ++i) {
      const int begin = outer[i];
      const int end = outer[i + 1];
      grad_alpha.assign(static_cast<std::size_t>(end - begin), 0.0);
      double weighted = 0.0;
      for (int e = begin; e < end; ++e) {
        const double g = grad_agg.row(i).dot(cache.projected.row(inner[e]));
        grad_alpha[e - begin] = g;
        weighted += cache.alpha[e] * g;
      }
      for (int e = begin; e < end; ++e) {
        const double grad_logit = cache.alpha[e] * (grad_alpha[e - begin] - weighted);
        const double grad_score =
            grad_logit * (cache.scores[e] > 0.0 ? 1.0 : kAttentionLeakySlope);
        grad_self[i] += grad_score;
        grad_nbr[inner[e]] += grad_score;
      }
    }
    const auto a_self = params.attention.head(d_out);
    const auto a_nbr = params.attention.tail(d_out);
    grad.attention.head(d_out).noalias() += cache.projected.transpose() * grad_self;
    grad.attention.tail(d_out).noalias() += cache.projected.transpose() * grad_nbr;
    grad_projected.noalias() += grad_self * a_self.transpose();
    grad_projected.noalias() += grad_nbr * a_nbr.transpose();
  }

  grad.weight.noalias() += cache.input.transpose() * grad_projected;
  if (!want_input_grad) return Matrix{};
  return grad_projected * params.weight.transpose();
}

Matrix encode(const Matrix& attributes, const Adjacency& adjacency,
              const AutoencoderParams& params, std::vector<LayerCache>* trace) {
  if (trace != nullptr) trace->assign(params.encoder.size(), LayerCache{});
  Matrix h = attributes;
  for (std::size_t l = 0; l < params.encoder.size(); ++l) {
    h = attention_layer_forward(h, adjacency, params.encoder[l], params.kind,
                                trace != nullptr ? &(*trace)[l] : nullptr);
    check_finite(h, "encoder", l);
  }
  return h;
}

Matrix decode(const Matrix& latent, const Adjacency& adjacency, const AutoencoderParams& params,
              std::vector<LayerCache>* trace) {
  if (trace != nullptr) trace->assign(params.decoder.size(), LayerCache{});
  Matrix h = latent;
  for (std::size_t l = 0; l < params.decoder.size(); ++l) {
    h = attention_layer_forward(h, adjacency, params.decoder[l], params.kind,
                                trace != nullptr ? &(*trace)[l] : nullptr);
    check_finite(h, "decoder", l);
  }
  return h;
}

Matrix encode(const Graph& graph, const AutoencoderParams& params) {
  return encode(graph.attributes, graph.adjacency, params);
}

Matrix decode(const Matrix& latent, const Graph& graph, const AutoencoderParams& params) {
  return decode(latent, graph.adjacency, params);
}

Matrix decoder_backward(const Matrix& grad_reconstruction, const Adjacency& adjacency,
                        const AutoencoderParams& params, const std::vector<LayerCache>& trace,
                        AutoencoderParams& grad) {
  Matrix g = grad_reconstruction;
  for (std::size_t l = params.decoder.size(); l-- > 0;) {
    g = attention_layer_backward(g, adjacency, params.decoder[l], params.kind, trace[l],
                                 grad.decoder[l], true);
  }
  return g;
}

void encoder_backward(const Matrix& grad_latent, const Adjacency& adjacency,
                      const AutoencoderParams& params, const std::vector<LayerCache>& trace,
                      AutoencoderParams& grad) {
  Matrix g = grad_latent;
  for (std::size_t l = params.encoder.size(); l-- > 0;) {
    g = attention_layer_backward(g, adjacency, params.encoder[l], params.kind, trace[l],
                                 grad.encoder[l], l > 0);
  }
}

std::string to_string(Activation activation) {
  switch (activation) {
    case Activation::prelu: return "prelu";
    case Activation::elu: return "elu";
    case Activation::linear: return "linear";
  }
  return "prelu";
}

std::string to_string(LayerKind kind) {
  return kind == LayerKind::attention ? "attention" : "mean-aggregation";
}

Activation parse_activation(const std::string& text) {
  if (text == "prelu") return Activation::prelu;
  if (text == "elu") return Activation::elu;
  if (text == "linear") return Activation::linear;
  throw ConfigError("unknown activation '" + text + "'");
}

LayerKind parse_layer_kind(const std::string& text) {
  if (text == "attention" || text == "gat") return LayerKind::attention;
  if (text == "mean-aggregation" || text == "mean_aggregation" || text == "mean") {
    return LayerKind::mean_aggregation;
  }
  throw ConfigError("unknown gnn kind '" + text + "'");
}

}  // namespace ncagc
