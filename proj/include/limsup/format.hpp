#pragma once

#include <cstdio>
#include <span>
#include <string>
#include <string_view>

namespace limsup {

// 17 significant digits: every double survives a print/parse round trip.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string join_doubles(std::span<const double> values, std::string_view sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += sep;
    out += format_double(values[i]);
  }
  return out;
}

}  // namespace limsup
