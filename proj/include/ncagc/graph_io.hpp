#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ncagc/types.hpp"

namespace ncagc {

/// An attributed graph.
///
/// Attributes are stored node-major (N x d). Formulations that write the
/// attribute matrix feature-major (d x N) see the transpose of this; the
/// transposition happens once, here, and nowhere else.
struct Graph {
  std::string name;
  Matrix attributes;
  Adjacency adjacency;
  std::optional<std::vector<int>> labels;
  int num_clusters = 0;

  Index num_nodes() const { return attributes.rows(); }
  Index num_features() const { return attributes.cols(); }
};

enum class DatasetFormat { edge_list, packed_archive };
enum class AttributeNormalization { none, row_l1, row_l2 };

/// Throws ValidationError if any Graph invariant is broken: symmetric 0/1
/// adjacency, finite attributes, labels in [0, k), N >= k >= 2.
void validate(const Graph& graph);

/// Number of undirected edges, self-loops excluded.
Index count_undirected_edges(const Adjacency& adjacency);

/// Loads a dataset.
///
/// edge_list: `path` is either a directory holding one `*.content` feature
/// table plus a `*.cites` or `*.edges` edge list, or the `.content` file
/// itself. Feature-table lines are `node-id v_1 .. v_d label`; edge lines are
/// two node ids. Edges referencing unknown nodes and self-loop edges are
/// dropped, directed edges are symmetrized; all three log a warning.
/// Class label strings are mapped to ids in lexicographic order.
///
/// packed_archive: the binary container written by save_packed.
Graph load_dataset(const std::filesystem::path& path, DatasetFormat format);

/// Picks the format from the path: directories and `.content` files are
/// edge lists, everything else a packed archive.
DatasetFormat detect_format(const std::filesystem::path& path);

void save_packed(const Graph& graph, const std::filesystem::path& path);

/// Writes the graph as a `<stem>.content` / `<stem>.cites` pair in `directory`.
void save_edge_list(const Graph& graph, const std::filesystem::path& directory,
                    const std::string& stem);

Graph normalize_attributes(const Graph& graph, AttributeNormalization mode);

/// Returns the adjacency with its diagonal forced to 1.
Adjacency add_self_loops(const Adjacency& adjacency);

/// Builds a symmetric 0/1 adjacency from undirected (i, j) pairs.
Adjacency adjacency_from_edges(Index num_nodes,
                               const std::vector<std::pair<int, int>>& edges);

bool has_full_diagonal(const Adjacency& adjacency);

std::string to_string(AttributeNormalization mode);
AttributeNormalization parse_normalization(const std::string& text);

}  // namespace ncagc
