#include "ncagc/npy.hpp"

#include <fstream>
#include <regex>
#include <string>

#include "binary_io.hpp"

namespace ncagc {

void write_npy(const std::filesystem::path& path, const Matrix& matrix) {
  std::string header = "{'descr': '<f8', 'fortran_order': False, 'shape': (" +
                       std::to_string(matrix.rows()) + ", " + std::to_string(matrix.cols()) +
                       "), }";
  // magic(6) + version(2) + header_len(2) + header, padded to 64 bytes.
  const std::size_t unpadded = 10 + header.size() + 1;
  header.append((64 - unpadded % 64) % 64, ' ');
  header.push_back('\n');

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write("\x93NUMPY", 6);
  out.put(1);
  out.put(0);
  detail::write_pod(out, static_cast<std::uint16_t>(header.size()));
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(matrix.data()),
            static_cast<std::streamsize>(matrix.size() * sizeof(double)));
  if (!out) throw IoError("write failed: " + path.string());
}

Matrix read_npy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[6];
  in.read(magic, 6);
  if (!in || std::string(magic, 6) != "\x93NUMPY") throw IoError(path.string() + ": not an .npy file");
  const auto major = detail::read_pod<std::uint8_t>(in);
  detail::read_pod<std::uint8_t>(in);
  std::size_t header_len = 0;
  if (major == 1) header_len = detail::read_pod<std::uint16_t>(in);
  else header_len = detail::read_pod<std::uint32_t>(in);
  std::string header(header_len, '\0');
  in.read(header.data(), static_cast<std::streamsize>(header_len));
  if (header.find("'<f8'") == std::string::npos || header.find("'fortran_order': False") == std::string::npos) {
    throw IoError(path.string() + ": only C-ordered float64 arrays are supported");
  }
  std::smatch m;
  if (!std::regex_search(header, m, std::regex(R"(\((\d+),\s*(\d+)\))"))) {
    throw IoError(path.string() + ": only 2-D arrays are supported");
  }
  Matrix matrix(std::stoll(m[1]), std::stoll(m[2]));
  in.read(reinterpret_cast<char*>(matrix.data()),
          static_cast<std::streamsize>(matrix.size() * sizeof(double)));
  if (!in) throw IoError(path.string() + ": truncated data");
  return matrix;
}

}  // namespace ncagc
