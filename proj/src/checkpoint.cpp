#include "ncagc/checkpoint.hpp"

#include <fstream>
#include <map>

#include "binary_io.hpp"

namespace ncagc {
namespace {

constexpr char kMagic[8] = {'N', 'C', 'A', 'G', 'C', 'C', 'K', '1'};

void write_tensor(std::ostream& out, const std::string& name, const Matrix& m) {
  detail::write_string(out, name);
  detail::write_pod(out, static_cast<std::uint64_t>(m.rows()));
  detail::write_pod(out, static_cast<std::uint64_t>(m.cols()));
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(m.size() * sizeof(double)));
}

Matrix as_matrix(const Vector& v) { return Matrix(Eigen::Map<const Matrix>(v.data(), v.size(), 1)); }

const Matrix& take(const std::map<std::string, Matrix>& tensors, const std::string& name) {
  const auto it = tensors.find(name);
  if (it == tensors.end()) throw IoError("checkpoint is missing tensor '" + name + "'");
  return it->second;
}

}  // namespace

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(kMagic, sizeof kMagic);
  detail::write_string(out, to_text(checkpoint.config));
  const auto& p = checkpoint.params;
  detail::write_pod(out, static_cast<std::uint32_t>(p.encoder.size()));
  detail::write_pod(out, static_cast<std::uint32_t>(p.decoder.size()));
  const std::uint32_t count = static_cast<std::uint32_t>(3 * (p.encoder.size() + p.decoder.size()) + 1);
  detail::write_pod(out, count);
  for (const auto& [prefix, layers] : {std::pair{"encoder", &p.encoder}, std::pair{"decoder", &p.decoder}}) {
    for (std::size_t l = 0; l < layers->size(); ++l) {
      const auto& layer = (*layers)[l];
      const std::string base = std::string(prefix) + "." + std::to_string(l) + ".";
      write_tensor(out, base + "weight", layer.weight);
      write_tensor(out, base + "attention", as_matrix(layer.attention));
      write_tensor(out, base + "prelu_slope", Matrix::Constant(1, 1, layer.prelu_slope));
    }
  }
  write_tensor(out, "self_expression.coefficients", checkpoint.coefficients.coefficients);
  if (!out) throw IoError("write failed: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || !std::equal(std::begin(magic), std::end(magic), std::begin(kMagic))) {
    throw IoError(path.string() + ": not a checkpoint");
  }
  Checkpoint checkpoint;
  checkpoint.config = parse_config(detail::read_string(in));
  const auto encoder_layers = detail::read_pod<std::uint32_t>(in);
  const auto decoder_layers = detail::read_pod<std::uint32_t>(in);
  const auto count = detail::read_pod<std::uint32_t>(in);
  std::map<std::string, Matrix> tensors;
  for (std::uint32_t t = 0; t < count; ++t) {
    std::string name = detail::read_string(in, 4096);
    const auto rows = detail::read_pod<std::uint64_t>(in);
    const auto cols = detail::read_pod<std::uint64_t>(in);
    if (rows > (1u << 24) || cols > (1u << 24)) throw IoError("implausible tensor shape in checkpoint");
    Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
    in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(double)));
    if (!in) throw IoError(path.string() + ": truncated tensor '" + name + "'");
    tensors.emplace(std::move(name), std::move(m));
  }

  auto& p = checkpoint.params;
  p.kind = checkpoint.config.gnn_kind;
  for (const auto& [prefix, layers, n] :
       {std::tuple{"encoder", &p.encoder, encoder_layers}, std::tuple{"decoder", &p.decoder, decoder_layers}}) {
    for (std::uint32_t l = 0; l < n; ++l) {
      const std::string base = std::string(prefix) + "." + std::to_string(l) + ".";
      AttentionLayerParams layer;
      layer.weight = take(tensors, base + "weight");
      const Matrix& a = take(tensors, base + "attention");
      layer.attention = Eigen::Map<const Vector>(a.data(), a.size());
      layer.prelu_slope = take(tensors, base + "prelu_slope")(0, 0);
      layer.activation = checkpoint.config.activation;
      layers->push_back(std::move(layer));
    }
  }
  checkpoint.coefficients.coefficients = take(tensors, "self_expression.coefficients");
  return checkpoint;
}

}  // namespace ncagc
