#include "pasta/types.hpp"

#include "pasta/errors.hpp"

#include <algorithm>
#include <cmath>

namespace pasta {

double guarded_ceil(double v) {
  const double r = std::round(v);
  if (std::abs(v - r) <= 1e-12 * std::max(1.0, std::abs(v))) return r;
  return std::ceil(v);
}

double guarded_floor(double v) {
  const double r = std::round(v);
  if (std::abs(v - r) <= 1e-12 * std::max(1.0, std::abs(v))) return r;
  return std::floor(v);
}

std::size_t ceil_count(double v, std::size_t floor_value) {
  if (std::isnan(v)) throw ConfigError("count is not a number");
  const double c = guarded_ceil(v);
  if (c <= static_cast<double>(floor_value)) return floor_value;
  if (!(c < 9.0e18)) throw ConfigError("iteration or batch count overflows");
  return static_cast<std::size_t>(c);
}

double div_or_inf(double a, double b) { return b == 0.0 ? kInf : a / b; }

bool all_finite(const Vec& v) { return v.allFinite(); }

}  // namespace pasta
