#include "ncagc/synthetic.hpp"

#include <random>

namespace ncagc {

Graph make_synthetic_graph(const SyntheticGraphSpec& spec) {
  const int k = spec.num_clusters;
  const Index n = static_cast<Index>(k) * spec.nodes_per_cluster;
  const Index d = spec.num_features;
  std::mt19937_64 rng(spec.seed);
  std::bernoulli_distribution within(spec.edge_prob_within);
  std::bernoulli_distribution between(spec.edge_prob_between);
  std::bernoulli_distribution topic(spec.topic_feature_prob);
  std::bernoulli_distribution noise(spec.noise_feature_prob);

  Graph graph;
  graph.name = spec.name;
  graph.num_clusters = k;
  std::vector<int> labels(n);
  for (Index i = 0; i < n; ++i) labels[i] = static_cast<int>(i / spec.nodes_per_cluster);

  graph.attributes = Matrix::Zero(n, d);
  const Index block = std::max<Index>(1, d / k);
  for (Index i = 0; i < n; ++i) {
    const Index first = labels[i] * block;
    for (Index j = 0; j < d; ++j) {
      const bool in_topic = j >= first && j < first + block;
      graph.attributes(i, j) = (in_topic ? topic(rng) : noise(rng)) ? 1.0 : 0.0;
    }
  }

  std::vector<std::pair<int, int>> edges;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const bool same = labels[i] == labels[j];
      if (same ? within(rng) : between(rng)) edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  }
  graph.adjacency = adjacency_from_edges(n, edges);
  graph.labels = std::move(labels);
  return graph;
}

}  // namespace ncagc
