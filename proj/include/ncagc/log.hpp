#pragma once

#include <iostream>
#include <string_view>

namespace ncagc {

enum class LogLevel { quiet = 0, warn = 1, info = 2 };

inline LogLevel& log_level() {
  static LogLevel level = LogLevel::warn;
  return level;
}

inline void log_warning(std::string_view message) {
  if (log_level() >= LogLevel::warn) std::clog << "[warn] " << message << '\n';
}

inline void log_info(std::string_view message) {
  if (log_level() >= LogLevel::info) std::clog << "[info] " << message << '\n';
}

}  // namespace ncagc
