#include "pasta/oracle.hpp"

#include "pasta/errors.hpp"

#include <cmath>

namespace pasta {

void BG0Params::validate(std::size_t dim) const {
  if (!(B_v >= 0.0) || !std::isfinite(B_v)) throw InputError("B_v must be finite and >= 0");
  if (!(b_v >= 0.0) || !std::isfinite(b_v)) throw InputError("b_v must be finite and >= 0");
  if (static_cast<std::size_t>(x0.size()) != dim) throw InputError("anchor dimension mismatch");
  if (!x0.allFinite()) throw InputError("anchor must be finite");
}

double BG0Params::envelope(const Vec& x) const {
  return B_v * B_v * (x - x0).squaredNorm() + b_v * b_v;
}

GaussianBG0Oracle::GaussianBG0Oracle(ObjectivePtr objective, BG0Params params)
    : GradientOracle(std::move(params)), objective_(std::move(objective)) {
  if (!objective_) throw InputError("null objective");
  this->params().validate(objective_->dimension());
}

namespace {

// Sum of n standard normal vectors of length d.
Vec normal_sum(Eigen::Index d, std::size_t n, Rng& rng) {
  Vec z(d), acc = Vec::Zero(d);
  for (std::size_t k = 0; k < n; ++k) {
    rng.fill_normal(z);
    acc += z;
  }
  return acc;
}

}  // namespace

double GaussianBG0Oracle::noise_scale(const Vec& x) const {
  return std::sqrt(params().envelope(x) / static_cast<double>(dimension()));
}

void GaussianBG0Oracle::mean_into(const Vec& x, Vec& out) const { objective_->gradient_into(x, out); }

void GaussianBG0Oracle::sample_mean_into(const Vec& x, std::size_t n, Rng& rng, Vec& out) const {
  objective_->gradient_into(x, out);
  const double s = noise_scale(x);
  if (s == 0.0) return;
  out += (s / static_cast<double>(n)) * normal_sum(x.size(), n, rng);
}

void GaussianBG0Oracle::paired_difference_into(const Vec& x, const Vec& y, std::size_t n, Rng& rng,
                                               Vec& out) const {
  Vec gy(y.size());
  objective_->gradient_into(y, gy);
  objective_->gradient_into(x, out);
  out -= gy;
  const double ds = noise_scale(x) - noise_scale(y);
  if (ds == 0.0) return;
  out += (ds / static_cast<double>(n)) * normal_sum(x.size(), n, rng);
}

namespace {

void check_point(const GradientOracle& oracle, const Vec& x) {
  if (static_cast<std::size_t>(x.size()) != oracle.dimension()) throw InputError("dimension mismatch");
  if (!x.allFinite()) throw InputError("query point must be finite");
}

}  // namespace

OracleSample sample(const GradientOracle& oracle, const Vec& x, Rng& rng) {
  return sample_minibatch(oracle, x, 1, rng);
}

OracleSample sample_minibatch(const GradientOracle& oracle, const Vec& x, std::size_t N, Rng& rng) {
  if (N == 0) throw InputError("minibatch size must be >= 1");
  check_point(oracle, x);
  OracleSample s;
  s.g.resize(x.size());
  oracle.sample_mean_into(x, N, rng, s.g);
  s.calls = N;
  return s;
}

VarianceReport verify_variance_contract(const GradientOracle& oracle, const Vec& x, std::size_t M,
                                        Rng& rng) {
  if (M < 1000) throw InputError("variance verification needs M >= 1000");
  check_point(oracle, x);
  Vec mean(x.size()), g(x.size());
  oracle.mean_into(x, mean);
  Vec sum = Vec::Zero(x.size());
  double sq = 0.0;
  for (std::size_t k = 0; k < M; ++k) {
    oracle.sample_mean_into(x, 1, rng, g);
    g -= mean;
    sum += g;
    sq += g.squaredNorm();
  }
  VarianceReport r;
  r.samples = M;
  r.empirical_var = sq / static_cast<double>(M);
  r.bound = oracle.variance_bound(x);
  r.mean_deviation = sum.norm() / static_cast<double>(M);
  r.ok = r.empirical_var <= r.bound * (1.0 + 3.0 / std::sqrt(static_cast<double>(M)));
  return r;
}

double gaussian_mss_constant(double L, double B_v) { return std::sqrt(L * L + B_v * B_v); }

}  // namespace pasta
