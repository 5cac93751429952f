#ifndef PASTA_ORACLE_HPP
#define PASTA_ORACLE_HPP

#include "pasta/problems.hpp"
#include "pasta/rng.hpp"
#include "pasta/types.hpp"

#include <cstddef>
#include <memory>

namespace pasta {

/// Variance envelope B_v^2 ||x - x0||^2 + b_v^2 around the anchor x0.
struct BG0Params {
  double B_v = 0.0;
  double b_v = 0.0;
  Vec x0;

  void validate(std::size_t dim) const;
  double envelope(const Vec& x) const;
};

struct OracleSample {
  Vec g;
  std::size_t calls = 0;
};

/// Stochastic first-order oracle obeying a BG-0 envelope.
class GradientOracle {
 public:
  explicit GradientOracle(BG0Params params) : params_(std::move(params)) {}
  virtual ~GradientOracle() = default;

  virtual std::size_t dimension() const = 0;
  /// E[g(x)]: the (sub)gradient the noise is centred on.
  virtual void mean_into(const Vec& x, Vec& out) const = 0;
  /// Average of n independent draws at x.
  virtual void sample_mean_into(const Vec& x, std::size_t n, Rng& rng, Vec& out) const = 0;
  /// Average over n draws z of g(x, z) - g(y, z), each z shared by both points.
  virtual void paired_difference_into(const Vec& x, const Vec& y, std::size_t n, Rng& rng,
                                      Vec& out) const = 0;
  /// Declared bound on E||g(x) - E g(x)||^2.
  virtual double variance_bound(const Vec& x) const { return params_.envelope(x); }

  const BG0Params& params() const { return params_; }

 private:
  BG0Params params_;
};

/// g = grad f(x) + sqrt(envelope(x)/p) z with z standard normal in R^p.
class GaussianBG0Oracle final : public GradientOracle {
 public:
  GaussianBG0Oracle(ObjectivePtr objective, BG0Params params);

  std::size_t dimension() const override { return objective_->dimension(); }
  void mean_into(const Vec& x, Vec& out) const override;
  void sample_mean_into(const Vec& x, std::size_t n, Rng& rng, Vec& out) const override;
  void paired_difference_into(const Vec& x, const Vec& y, std::size_t n, Rng& rng,
                              Vec& out) const override;

  const Objective& objective() const { return *objective_; }

 private:
  double noise_scale(const Vec& x) const;

  ObjectivePtr objective_;
};

OracleSample sample(const GradientOracle& oracle, const Vec& x, Rng& rng);
OracleSample sample_minibatch(const GradientOracle& oracle, const Vec& x, std::size_t N, Rng& rng);

struct VarianceReport {
  double empirical_var = 0.0;
  double bound = 0.0;
  double mean_deviation = 0.0;
  std::size_t samples = 0;
  bool ok = false;
};

/// Monte-Carlo check of the envelope with M >= 1000 single draws.
/// ok iff empirical_var <= bound (1 + 3/sqrt(M)).
VarianceReport verify_variance_contract(const GradientOracle& oracle, const Vec& x, std::size_t M,
                                        Rng& rng);

/// Mean-square smoothness constant of the Gaussian oracle: sqrt(L^2 + B_v^2).
double gaussian_mss_constant(double L, double B_v);

}  // namespace pasta

#endif
