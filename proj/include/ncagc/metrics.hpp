#pragma once

#include <span>
#include <string>
#include <vector>

#include "ncagc/types.hpp"

namespace ncagc {

struct MetricReport {
  double acc = 0.0;
  double nmi = 0.0;
  double ari = 0.0;
  Index n = 0;
};

enum class NmiNormalization { arithmetic, geometric };

/// Fraction of nodes correctly labelled under the best one-to-one mapping
/// between predicted and true label ids (exact assignment, not greedy).
double clustering_accuracy(std::span<const int> predicted, std::span<const int> truth);

double nmi(std::span<const int> predicted, std::span<const int> truth,
           NmiNormalization normalization = NmiNormalization::arithmetic);

double ari(std::span<const int> predicted, std::span<const int> truth);

MetricReport evaluate_clustering(std::span<const int> predicted, std::span<const int> truth);

/// Minimum-cost perfect matching on a square cost matrix (Hungarian
/// algorithm, O(n^3)); returns the column assigned to each row.
std::vector<int> solve_assignment(const Matrix& cost);

std::string to_json(const MetricReport& report);

}  // namespace ncagc
