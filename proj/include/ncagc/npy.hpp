#pragma once

#include <filesystem>

#include "ncagc/types.hpp"

namespace ncagc {

/// Dense float64 matrix in NumPy's .npy v1.0 format (C order).
void write_npy(const std::filesystem::path& path, const Matrix& matrix);
Matrix read_npy(const std::filesystem::path& path);

}  // namespace ncagc
