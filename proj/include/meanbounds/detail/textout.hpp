#pragma once

#include <cstdio>
#include <string>

namespace meanbounds::detail {

/// Doubles serialized with 17 significant digits so golden files are exact
/// at double precision and stable across runs.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace meanbounds::detail
