#ifndef PASTA_TYPES_HPP
#define PASTA_TYPES_HPP

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <limits>

namespace pasta {

using Vec = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Ceiling with a relative guard: values within 1e-12 (relative) of an
/// integer snap to that integer before rounding up.
double guarded_ceil(double v);

/// Floor with the same relative snapping as guarded_ceil.
double guarded_floor(double v);

/// guarded_ceil clamped below by `floor_value` and converted to a count.
std::size_t ceil_count(double v, std::size_t floor_value = 1);

/// a / b with a zero denominator read as +infinity (for min{...} terms).
double div_or_inf(double a, double b);

bool all_finite(const Vec& v);

}  // namespace pasta

#endif
