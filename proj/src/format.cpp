#include "rigidloc/format.hpp"

#include <cmath>
#include <cstdio>

namespace rigidloc {

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace rigidloc
