#pragma once

#include <charconv>
#include <string>

namespace gmt {

// Shortest round-trip decimal form, C locale, '.' separator -- the one float
// format every CSV and data file in this project uses.
inline std::string double_str(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace gmt
