#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ncagc/clustering.hpp"
#include "ncagc/gat.hpp"
#include "ncagc/graph_io.hpp"
#include "ncagc/losses.hpp"
#include "ncagc/self_expression.hpp"

namespace ncagc {

enum class KnnSource { latent, attributes };
enum class SelfExpressionMode { contrastive, plain };

struct TrainConfig {
  std::string dataset = "cora";
  double learning_rate = 1e-4;
  int epochs = 400;
  std::vector<Index> encoder_dims{1024, 512};
  LayerKind gnn_kind = LayerKind::attention;
  Activation activation = Activation::prelu;
  int neighborhood_size = 10;
  LossWeights weights{10.0, 10.0, 10.0};
  KnnSource knn_source = KnnSource::latent;
  int knn_refresh_every = 1;
  AffinityOptions affinity;
  SelfExpressionMode cse_mode = SelfExpressionMode::contrastive;
  bool nbr_enabled = true;
  CoefNorm coef_norm = CoefNorm::squared_frobenius;
  ContrastOptions contrast;
  AttributeNormalization normalization = AttributeNormalization::row_l1;
  std::uint64_t seed = 0;
  /// Evaluate every this many epochs; 0 evaluates only after the last one.
  int eval_every = 0;
  int kmeans_restarts = 10;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;

  /// Throws ConfigError on T < 1, K < 1, negative weights, bad dims, ...
  void validate() const;
};

/// Per-dataset parameter settings (learning rate, dims, K, loss weights,
/// epochs) for cora, citeseer, citeseer-prose, wiki, acm, plus a small
/// `toy` preset for the built-in synthetic graph.
TrainConfig preset(const std::string& dataset);
std::vector<std::string> preset_names();

/// Applies one `key = value` assignment. Throws ConfigError on unknown keys
/// or unparsable values.
void apply_setting(TrainConfig& config, const std::string& key, const std::string& value);

/// Parses flat `key = value` text ('#' starts a comment) on top of `base`.
TrainConfig parse_config(const std::string& text, TrainConfig base = {});
TrainConfig load_config(const std::filesystem::path& path, TrainConfig base = {});

/// Canonical `key = value` rendering; parse_config(to_text(c)) == c.
std::string to_text(const TrainConfig& config);

/// FNV-1a hash of to_text(config), as 16 hex digits.
std::string config_hash(const TrainConfig& config);

std::string to_string(KnnSource source);
std::string to_string(SelfExpressionMode mode);

}  // namespace ncagc
