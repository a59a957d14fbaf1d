#pragma once

#include <cstdint>
#include <string>

#include "ncagc/graph_io.hpp"

namespace ncagc {

/// Attributed stochastic block model: k planted communities, each with its
/// own block of "topic" features that its members switch on more often.
struct SyntheticGraphSpec {
  std::string name = "toy";
  int num_clusters = 3;
  int nodes_per_cluster = 20;
  int num_features = 30;
  double edge_prob_within = 0.25;
  double edge_prob_between = 0.01;
  double topic_feature_prob = 0.5;
  double noise_feature_prob = 0.05;
  std::uint64_t seed = 7;
};

Graph make_synthetic_graph(const SyntheticGraphSpec& spec);

}  // namespace ncagc
