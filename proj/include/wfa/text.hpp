#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>
#include <string_view>

#include "wfa/errors.hpp"

namespace wfa {

// 17 significant digits round-trip any double exactly; every CLI and file
// surface prints through this so identical runs produce identical bytes.
inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_real(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') throw DomainError("not a real number: '" + text + "'");
  return v;
}

inline long long parse_integer(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  long long v = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0') throw DomainError("not an integer: '" + text + "'");
  return v;
}

}  // namespace wfa
