#pragma once

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "ncagc/types.hpp"

namespace ncagc::detail {

static_assert(std::endian::native == std::endian::little,
              "binary containers are little-endian");

template <typename T>
void write_pod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw IoError("unexpected end of binary stream");
  return value;
}

inline void write_string(std::ostream& out, const std::string& s) {
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string read_string(std::istream& in, std::size_t limit = 1u << 26) {
  const auto size = read_pod<std::uint32_t>(in);
  if (size > limit) throw IoError("corrupt string length in binary stream");
  std::string s(size, '\0');
  in.read(s.data(), size);
  if (!in) throw IoError("unexpected end of binary stream");
  return s;
}

}  // namespace ncagc::detail
