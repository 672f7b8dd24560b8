#include "hoplr/reference.hpp"

#include <cmath>
#include <cstdio>

namespace hoplr::reference {

namespace {

// Power of ten that brings |x| into [10^(digits-1), 10^digits).
int scale_exponent(double x, int digits) {
  return digits - 1 - static_cast<int>(std::floor(std::log10(std::abs(x))));
}

}  // namespace

double truncate_significant(double x, int digits) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  const int e = scale_exponent(x, digits);
  const double scale = std::pow(10.0, e);
  // Absorbs representation error of values that sit exactly on a digit.
  const double mantissa = std::floor(std::abs(x) * scale * (1.0 + 1e-12));
  return std::copysign(mantissa / scale, x);
}

bool matches_truncated(double computed, double published, int digits) {
  if (computed == 0.0 || published == 0.0) return computed == published;
  if ((computed < 0) != (published < 0)) return false;
  const int e = scale_exponent(computed, digits);
  const double scale = std::pow(10.0, e);
  const double lhs = std::floor(std::abs(computed) * scale * (1.0 + 1e-12));
  const double rhs = std::round(std::abs(published) * scale);
  return lhs == rhs;
}

std::string format_significant(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", digits - 1, x);
  return buf;
}

}  // namespace hoplr::reference
