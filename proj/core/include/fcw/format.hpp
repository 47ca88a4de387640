#pragma once

#include <charconv>
#include <string>

namespace fcw {

// Shortest decimal representation that round-trips to the same double.
// Locale-independent, so CSV output is byte-stable across runs.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace fcw
