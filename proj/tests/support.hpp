#ifndef PASTA_TESTS_SUPPORT_HPP
#define PASTA_TESTS_SUPPORT_HPP

#include "pasta/rng.hpp"
#include "pasta/types.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace pasta::testing {

// Hand-rolled generators for property tests.

inline Vec random_vec(Rng& rng, std::size_t n, double lo, double hi) {
  Vec v(static_cast<Eigen::Index>(n));
  rng.fill_uniform(v, lo, hi);
  return v;
}

/// Mixes zeros, small and large magnitudes so kinks and plateaus get hit.
inline Vec mixed_vec(Rng& rng, std::size_t n, double scale) {
  Vec v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double u = rng.uniform();
    if (u < 0.2)
      v[i] = 0.0;
    else if (u < 0.6)
      v[i] = rng.uniform(-0.1, 0.1) * scale;
    else
      v[i] = rng.uniform(-1.0, 1.0) * scale;
  }
  return v;
}

inline std::size_t random_size(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.next_u64() % (hi - lo + 1));
}

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

inline Moments moments(const std::vector<double>& xs) {
  Moments m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  for (double x : xs) m.var += (x - m.mean) * (x - m.mean);
  m.var /= static_cast<double>(xs.size() - 1);
  return m;
}

/// Central finite-difference gradient with step 1e-6 max(1, |x_i|).
template <class F>
Vec fd_gradient(F&& f, const Vec& x) {
  Vec g(x.size());
  Vec y = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
    y[i] = x[i] + h;
    const double fp = f(y);
    y[i] = x[i] - h;
    const double fm = f(y);
    y[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace pasta::testing

#endif
