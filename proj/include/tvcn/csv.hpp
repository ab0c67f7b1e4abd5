#pragma once

#include <cstdio>
#include <string>

namespace tvcn {

// Fixed-format double for CSV output; NaN prints as "nan" on every
// platform so result files are byte-stable.
inline std::string csv_double(double x) {
  if (x != x) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

}  // namespace tvcn
