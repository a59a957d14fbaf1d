#include "ncagc/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "binary_io.hpp"
#include "ncagc/log.hpp"

namespace ncagc {
namespace fs = std::filesystem;

namespace {

constexpr char kPackedMagic[8] = {'N', 'C', 'A', 'G', 'C', 'P', 'K', '1'};
constexpr std::uint32_t kPackedVersion = 1;

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

double parse_double(std::string_view token, const fs::path& file, std::size_t line_no) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    std::ostringstream msg;
    msg << file.string() << ":" << line_no << ": not a number: '" << token << "'";
    throw ValidationError(msg.str());
  }
  return value;
}

fs::path find_with_extension(const fs::path& dir, std::initializer_list<const char*> exts) {
  std::vector<fs::path> hits;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    for (const char* ext : exts) {
      if (entry.path().extension() == ext) hits.push_back(entry.path());
    }
  }
  std::sort(hits.begin(), hits.end());
  return hits.empty() ? fs::path{} : hits.front();
}

Graph load_edge_list(const fs::path& path) {
  fs::path content;
  fs::path edges;
  if (fs::is_directory(path)) {
    content = find_with_extension(path, {".content"});
    edges = find_with_extension(path, {".cites", ".edges"});
  } else {
    content = path;
    for (const char* ext : {".cites", ".edges"}) {
      auto candidate = path;
      candidate.replace_extension(ext);
      if (fs::exists(candidate)) {
        edges = candidate;
        break;
      }
    }
  }
  if (content.empty() || !fs::exists(content)) {
    throw IoError("no feature table (*.content) found at " + path.string());
  }
  if (edges.empty() || !fs::exists(edges)) {
    throw IoError("no edge list (*.cites / *.edges) found next to " + content.string());
  }

  std::ifstream in(content);
  if (!in) throw IoError("cannot open " + content.string());

  std::vector<std::string> ids;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> label_names;
  std::unordered_map<std::string, int> id_to_node;
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.size() < 3) {
      throw ValidationError(content.string() + ":" + std::to_string(line_no) +
                            ": expected node id, features and label");
    }
    const std::size_t d = tokens.size() - 2;
    if (dim == 0) dim = d;
    if (d != dim) {
      throw ValidationError(content.string() + ":" + std::to_string(line_no) +
                            ": inconsistent feature count " + std::to_string(d) +
                            " (expected " + std::to_string(dim) + ")");
    }
    std::string id(tokens.front());
    if (id_to_node.contains(id)) {
      throw ValidationError(content.string() + ": duplicate node id '" + id + "'");
    }
    id_to_node.emplace(id, static_cast<int>(ids.size()));
    ids.push_back(std::move(id));
    std::vector<double> row(d);
    for (std::size_t j = 0; j < d; ++j) row[j] = parse_double(tokens[j + 1], content, line_no);
    rows.push_back(std::move(row));
    label_names.emplace_back(tokens.back());
  }
  if (rows.empty()) throw ValidationError(content.string() + ": empty feature table");

  const Index n = static_cast<Index>(rows.size());
  Graph graph;
  graph.name = content.stem().string();
  graph.attributes.resize(n, static_cast<Index>(dim));
  for (Index i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dim; ++j) graph.attributes(i, static_cast<Index>(j)) = rows[i][j];
  }

  std::set<std::string> distinct(label_names.begin(), label_names.end());
  std::map<std::string, int> label_ids;
  for (const auto& name : distinct) label_ids.emplace(name, static_cast<int>(label_ids.size()));
  std::vector<int> labels(n);
  for (Index i = 0; i < n; ++i) labels[i] = label_ids.at(label_names[i]);
  graph.labels = std::move(labels);
  graph.num_clusters = static_cast<int>(label_ids.size());

  std::ifstream ein(edges);
  if (!ein) throw IoError("cannot open " + edges.string());
  std::set<std::pair<int, int>> directed;
  std::size_t unknown = 0;
  std::size_t self_loops = 0;
  line_no = 0;
  while (std::getline(ein, line)) {
    ++line_no;
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 2) {
      throw ValidationError(edges.string() + ":" + std::to_string(line_no) +
                            ": expected two node ids");
    }
    const auto a = id_to_node.find(std::string(tokens[0]));
    const auto b = id_to_node.find(std::string(tokens[1]));
    if (a == id_to_node.end() || b == id_to_node.end()) {
      ++unknown;
      continue;
    }
    if (a->second == b->second) {
      ++self_loops;
      continue;
    }
    directed.emplace(a->second, b->second);
  }
  if (unknown > 0) {
    log_warning(edges.string() + ": dropped " + std::to_string(unknown) +
                " edges referencing unknown nodes");
  }
  if (self_loops > 0) {
    log_warning(edges.string() + ": dropped " + std::to_string(self_loops) + " self-loop edges");
  }
  std::size_t one_way = 0;
  std::vector<std::pair<int, int>> undirected;
  for (const auto& [a, b] : directed) {
    if (!directed.contains({b, a})) ++one_way;
    if (a < b || !directed.contains({b, a})) undirected.emplace_back(a, b);
  }
  if (one_way > 0) {
    log_warning(edges.string() + ": symmetrized " + std::to_string(one_way) + " directed edges");
  }
  graph.adjacency = adjacency_from_edges(n, undirected);
  validate(graph);
  return graph;
}

Graph load_packed(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || !std::equal(std::begin(magic), std::end(magic), std::begin(kPackedMagic))) {
    throw IoError(path.string() + ": not a packed graph archive");
  }
  const auto version = detail::read_pod<std::uint32_t>(in);
  if (version != kPackedVersion) {
    throw IoError(path.string() + ": unsupported archive version " + std::to_string(version));
  }
  Graph graph;
  graph.name = detail::read_string(in);
  const auto n = detail::read_pod<std::uint64_t>(in);
  const auto d = detail::read_pod<std::uint64_t>(in);
  graph.num_clusters = static_cast<int>(detail::read_pod<std::uint32_t>(in));
  const auto has_labels = detail::read_pod<std::uint8_t>(in);
  const auto encoding = detail::read_pod<std::uint8_t>(in);
  if (n > (1u << 24) || d > (1u << 24)) throw IoError(path.string() + ": implausible dimensions");

  graph.attributes = Matrix::Zero(static_cast<Index>(n), static_cast<Index>(d));
  if (encoding == 0) {
    in.read(reinterpret_cast<char*>(graph.attributes.data()),
            static_cast<std::streamsize>(n * d * sizeof(double)));
    if (!in) throw IoError(path.string() + ": truncated attribute block");
  } else if (encoding == 1) {
    const auto nnz = detail::read_pod<std::uint64_t>(in);
    for (std::uint64_t e = 0; e < nnz; ++e) {
      const auto r = detail::read_pod<std::uint32_t>(in);
      const auto c = detail::read_pod<std::uint32_t>(in);
      const auto v = detail::read_pod<double>(in);
      if (r >= n || c >= d) throw IoError(path.string() + ": attribute index out of range");
      graph.attributes(r, c) = v;
    }
  } else {
    throw IoError(path.string() + ": unknown attribute encoding");
  }

  const auto num_edges = detail::read_pod<std::uint64_t>(in);
  std::vector<std::pair<int, int>> edges;
  edges.reserve(num_edges);
  for (std::uint64_t e = 0; e < num_edges; ++e) {
    const auto a = detail::read_pod<std::uint32_t>(in);
    const auto b = detail::read_pod<std::uint32_t>(in);
    if (a >= n || b >= n) throw IoError(path.string() + ": edge index out of range");
    edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
  }
  graph.adjacency = adjacency_from_edges(static_cast<Index>(n), edges);

  if (has_labels) {
    std::vector<int> labels(n);
    for (auto& label : labels) label = detail::read_pod<std::int32_t>(in);
    graph.labels = std::move(labels);
  }
  validate(graph);
  return graph;
}

}  // namespace

void validate(const Graph& graph) {
  const Index n = graph.num_nodes();
  if (graph.adjacency.rows() != n || graph.adjacency.cols() != n) {
    throw ValidationError("adjacency must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (graph.num_clusters < 2 || n < graph.num_clusters) {
    throw ValidationError("need N >= num_clusters >= 2 (N=" + std::to_string(n) +
                          ", k=" + std::to_string(graph.num_clusters) + ")");
  }
  if (!graph.attributes.allFinite()) throw ValidationError("attributes contain NaN or Inf");
  for (Index i = 0; i < n; ++i) {
    for (Adjacency::InnerIterator it(graph.adjacency, i); it; ++it) {
      if (it.value() != 1.0) throw ValidationError("adjacency entries must be 0 or 1");
      if (graph.adjacency.coeff(it.col(), i) != 1.0) {
        throw ValidationError("adjacency is not symmetric at (" + std::to_string(i) + ", " +
                              std::to_string(it.col()) + ")");
      }
    }
  }
  if (graph.labels) {
    if (static_cast<Index>(graph.labels->size()) != n) {
      throw ValidationError("label vector length differs from node count");
    }
    for (const int label : *graph.labels) {
      if (label < 0 || label >= graph.num_clusters) {
        throw ValidationError("label " + std::to_string(label) + " outside [0, " +
                              std::to_string(graph.num_clusters) + ")");
      }
    }
  }
}

Index count_undirected_edges(const Adjacency& adjacency) {
  Index count = 0;
  for (Index i = 0; i < adjacency.outerSize(); ++i) {
    for (Adjacency::InnerIterator it(adjacency, i); it; ++it) {
      if (it.col() > i) ++count;
    }
  }
  return count;
}

DatasetFormat detect_format(const fs::path& path) {
  if (fs::is_directory(path) || path.extension() == ".content") return DatasetFormat::edge_list;
  return DatasetFormat::packed_archive;
}

Graph load_dataset(const fs::path& path, DatasetFormat format) {
  if (!fs::exists(path)) throw IoError("dataset not found: " + path.string());
  return format == DatasetFormat::edge_list ? load_edge_list(path) : load_packed(path);
}

void save_packed(const Graph& graph, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(kPackedMagic, sizeof kPackedMagic);
  detail::write_pod(out, kPackedVersion);
  detail::write_string(out, graph.name);
  const auto n = static_cast<std::uint64_t>(graph.num_nodes());
  const auto d = static_cast<std::uint64_t>(graph.num_features());
  detail::write_pod(out, n);
  detail::write_pod(out, d);
  detail::write_pod(out, static_cast<std::uint32_t>(graph.num_clusters));
  detail::write_pod(out, static_cast<std::uint8_t>(graph.labels.has_value()));

  const auto nnz = static_cast<std::uint64_t>((graph.attributes.array() != 0.0).count());
  const bool sparse = nnz * 16 < n * d * 8;
  detail::write_pod(out, static_cast<std::uint8_t>(sparse ? 1 : 0));
  if (sparse) {
    detail::write_pod(out, nnz);
    for (Index i = 0; i < graph.num_nodes(); ++i) {
      for (Index j = 0; j < graph.num_features(); ++j) {
        const double v = graph.attributes(i, j);
        if (v == 0.0) continue;
        detail::write_pod(out, static_cast<std::uint32_t>(i));
        detail::write_pod(out, static_cast<std::uint32_t>(j));
        detail::write_pod(out, v);
      }
    }
  } else {
    out.write(reinterpret_cast<const char*>(graph.attributes.data()),
              static_cast<std::streamsize>(n * d * sizeof(double)));
  }

  detail::write_pod(out, static_cast<std::uint64_t>(count_undirected_edges(graph.adjacency)));
  for (Index i = 0; i < graph.adjacency.outerSize(); ++i) {
    for (Adjacency::InnerIterator it(graph.adjacency, i); it; ++it) {
      if (it.col() <= i) continue;
      detail::write_pod(out, static_cast<std::uint32_t>(i));
      detail::write_pod(out, static_cast<std::uint32_t>(it.col()));
    }
  }
  if (graph.labels) {
    for (const int label : *graph.labels) detail::write_pod(out, static_cast<std::int32_t>(label));
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void save_edge_list(const Graph& graph, const fs::path& directory, const std::string& stem) {
  fs::create_directories(directory);
  std::ofstream content(directory / (stem + ".content"));
  std::ofstream cites(directory / (stem + ".cites"));
  if (!content || !cites) throw IoError("cannot write edge list into " + directory.string());
  content.precision(17);
  for (Index i = 0; i < graph.num_nodes(); ++i) {
    content << i;
    for (Index j = 0; j < graph.num_features(); ++j) content << ' ' << graph.attributes(i, j);
    content << " class" << (graph.labels ? (*graph.labels)[i] : 0) << '\n';
  }
  for (Index i = 0; i < graph.adjacency.outerSize(); ++i) {
    for (Adjacency::InnerIterator it(graph.adjacency, i); it; ++it) {
      if (it.col() > i) cites << i << ' ' << it.col() << '\n';
    }
  }
}

Graph normalize_attributes(const Graph& graph, AttributeNormalization mode) {
  Graph out = graph;
  if (mode == AttributeNormalization::none) return out;
  for (Index i = 0; i < out.num_nodes(); ++i) {
    auto row = out.attributes.row(i);
    const double norm = mode == AttributeNormalization::row_l1 ? row.lpNorm<1>() : row.norm();
    if (norm > 0.0) row /= norm;
  }
  return out;
}

Adjacency adjacency_from_edges(Index num_nodes, const std::vector<std::pair<int, int>>& edges) {
  std::vector<Eigen::Triplet<double, int>> triplets;
  triplets.reserve(edges.size() * 2);
  for (const auto& [a, b] : edges) {
    triplets.emplace_back(a, b, 1.0);
    if (a != b) triplets.emplace_back(b, a, 1.0);
  }
  Adjacency adjacency(num_nodes, num_nodes);
  // Duplicates collapse to a single 1 rather than summing.
  adjacency.setFromTriplets(triplets.begin(), triplets.end(),
                            [](double, double) { return 1.0; });
  adjacency.makeCompressed();
  return adjacency;
}

Adjacency add_self_loops(const Adjacency& adjacency) {
  std::vector<Eigen::Triplet<double, int>> triplets;
  triplets.reserve(static_cast<std::size_t>(adjacency.nonZeros() + adjacency.rows()));
  for (Index i = 0; i < adjacency.outerSize(); ++i) {
    for (Adjacency::InnerIterator it(adjacency, i); it; ++it) {
      if (it.col() != i) triplets.emplace_back(static_cast<int>(i), static_cast<int>(it.col()), it.value());
    }
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), 1.0);
  }
  Adjacency out(adjacency.rows(), adjacency.cols());
  out.setFromTriplets(triplets.begin(), triplets.end());
  out.makeCompressed();
  return out;
}

bool has_full_diagonal(const Adjacency& adjacency) {
  for (Index i = 0; i < adjacency.outerSize(); ++i) {
    if (adjacency.coeff(i, i) == 0.0) return false;
  }
  return true;
}

std::string to_string(AttributeNormalization mode) {
  switch (mode) {
    case AttributeNormalization::none: return "none";
    case AttributeNormalization::row_l1: return "row-l1";
    case AttributeNormalization::row_l2: return "row-l2";
  }
  return "none";
}

AttributeNormalization parse_normalization(const std::string& text) {
  if (text == "none") return AttributeNormalization::none;
  if (text == "row-l1" || text == "row_l1") return AttributeNormalization::row_l1;
  if (text == "row-l2" || text == "row_l2") return AttributeNormalization::row_l2;
  throw ConfigError("unknown attribute normalization '" + text + "'");
}

}  // namespace ncagc
