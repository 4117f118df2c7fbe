#pragma once

#include <cstdio>
#include <string>

namespace vsl {
namespace detail {

// 17 significant digits round-trip a double exactly.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail
}  // namespace vsl
