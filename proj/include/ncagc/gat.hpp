#pragma once

#include <random>
#include <span>
#include <string>
#include <vector>

#include "ncagc/graph_io.hpp"
#include "ncagc/types.hpp"

namespace ncagc {

enum class Activation { prelu, elu, linear };

/// How a layer weighs neighbours: learned softmax attention, or a uniform
/// mean over the closed neighbourhood (the attention-free ablation).
enum class LayerKind { attention, mean_aggregation };

inline constexpr double kAttentionLeakySlope = 0.2;

/// One single-head graph layer. `attention` is [a_self ; a_neighbour], each
/// half of length d_out, so the score of edge i->j is
/// leaky_relu(a_self . p_i + a_neighbour . p_j) with p = h W.
struct AttentionLayerParams {
  Matrix weight;
  Vector attention;
  Activation activation = Activation::prelu;
  double prelu_slope = 0.25;

  Index input_dim() const { return weight.rows(); }
  Index output_dim() const { return weight.cols(); }
  bool all_finite() const;
};

struct AutoencoderParams {
  LayerKind kind = LayerKind::attention;
  std::vector<AttentionLayerParams> encoder;
  std::vector<AttentionLayerParams> decoder;

  Index input_dim() const { return encoder.front().input_dim(); }
  Index latent_dim() const { return encoder.back().output_dim(); }
};

/// Intermediates retained by a forward pass for the backward pass.
struct LayerCache {
  Matrix input;
  Matrix projected;            // input * weight
  Matrix aggregated;           // pre-activation
  std::vector<double> scores;  // pre-leaky attention logits, CSR order
  std::vector<double> alpha;   // normalized coefficients, CSR order
};

/// Glorot-uniform weights, attention vectors and a PReLU slope of 0.25.
/// `hidden_dims` lists encoder output sizes, e.g. {1024, 512}; the decoder
/// mirrors them back to `input_dim`.
AutoencoderParams init_autoencoder(Index input_dim, std::span<const Index> hidden_dims,
                                   LayerKind kind, Activation activation,
                                   std::mt19937_64& rng);

/// Zero-valued parameters with the same shapes (used as gradient storage).
AutoencoderParams zeros_like(const AutoencoderParams& params);

/// out_i = act(sum_{j in N(i)} alpha_ij p_j). `adjacency` must contain every
/// self-loop; a node with an empty neighbourhood violates the contract and
/// throws std::invalid_argument.
Matrix attention_layer_forward(const Matrix& input, const Adjacency& adjacency,
                               const AttentionLayerParams& params, LayerKind kind,
                               LayerCache* cache = nullptr);

/// Accumulates parameter gradients into `grad` and returns dL/d(input)
/// (an empty matrix when `want_input_grad` is false).
Matrix attention_layer_backward(const Matrix& grad_output, const Adjacency& adjacency,
                                const AttentionLayerParams& params, LayerKind kind,
                                const LayerCache& cache, AttentionLayerParams& grad,
                                bool want_input_grad = true);

Matrix encode(const Matrix& attributes, const Adjacency& adjacency,
              const AutoencoderParams& params, std::vector<LayerCache>* trace = nullptr);

/// Runs the mirrored decoder on the self-expressed latent matrix.
Matrix decode(const Matrix& latent, const Adjacency& adjacency, const AutoencoderParams& params,
              std::vector<LayerCache>* trace = nullptr);

Matrix encode(const Graph& graph, const AutoencoderParams& params);
Matrix decode(const Matrix& latent, const Graph& graph, const AutoencoderParams& params);

/// Backward through the decoder; returns dL/d(latent).
Matrix decoder_backward(const Matrix& grad_reconstruction, const Adjacency& adjacency,
                        const AutoencoderParams& params, const std::vector<LayerCache>& trace,
                        AutoencoderParams& grad);

/// Backward through the encoder. The attribute gradient is not needed.
void encoder_backward(const Matrix& grad_latent, const Adjacency& adjacency,
                      const AutoencoderParams& params, const std::vector<LayerCache>& trace,
                      AutoencoderParams& grad);

std::string to_string(Activation activation);
std::string to_string(LayerKind kind);
Activation parse_activation(const std::string& text);
LayerKind parse_layer_kind(const std::string& text);

}  // namespace ncagc
