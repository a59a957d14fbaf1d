#pragma once

#include <filesystem>

#include "ncagc/config.hpp"
#include "ncagc/gat.hpp"
#include "ncagc/self_expression.hpp"

namespace ncagc {

/// Trained state: network parameters, self-expression coefficients and the
/// configuration that produced them.
struct Checkpoint {
  TrainConfig config;
  AutoencoderParams params;
  SelfExpressionMatrix coefficients;
};

/// Keyed binary container: magic, the config as `key = value` text, then
/// named float64 tensors (`encoder.0.weight`, `encoder.0.attention`,
/// `encoder.0.prelu_slope`, ..., `self_expression.coefficients`).
void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace ncagc
