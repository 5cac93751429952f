#include "pasta/estimators.hpp"

#include "pasta/errors.hpp"

#include <algorithm>
#include <cmath>

namespace pasta {

std::size_t dynamic_batch(const Vec& x, const Vec& x0, double B_v, double b_v, double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw ConfigError("sigma2 must be positive");
  const double env = B_v * B_v * (x - x0).squaredNorm() + b_v * b_v;
  return ceil_count(env / sigma2, 1);
}

std::size_t page_dynamic_batch(const Vec& x, const Vec& x0, double B_v, double b_v, double eps,
                               std::size_t N_ref) {
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");
  const double env = B_v * B_v * (x - x0).squaredNorm() + b_v * b_v;
  return std::max(N_ref, ceil_count(2.0 * env / (eps * eps), 1));
}

PageParams page_params(double eps, double Delta, double B_v, double b_v, double Lbar) {
  if (!(eps > 0) || !(Delta > 0) || !(Lbar > 0)) throw ConfigError("page_params needs eps, Delta, Lbar > 0");
  if (!(B_v >= 0) || !(b_v >= 0)) throw ConfigError("page_params needs B_v, b_v >= 0");
  PageParams r;
  const double e2 = eps * eps;
  r.N_ref = ceil_count(8.0 * B_v * B_v * Delta * Delta / (e2 * e2) + 2.0 * b_v * b_v / e2, 1);
  r.b = ceil_count(std::sqrt(static_cast<double>(r.N_ref)), 1);
  r.p = std::min(1.0, static_cast<double>(r.b) / static_cast<double>(r.N_ref));
  r.eta = 1.0 / (4.0 * Lbar);
  r.K = ceil_count(16.0 * Delta * Lbar / e2 + 1.0 / r.p, 1);
  r.N_0 = ceil_count(2.0 * b_v * b_v / e2, 1);
  return r;
}

BatchRule BatchRule::unit() { return BatchRule{}; }

BatchRule BatchRule::dynamic_sigma(double sigma2, double B_v, double b_v) {
  BatchRule r;
  r.kind = Kind::DynamicSigma;
  r.sigma2 = sigma2;
  r.B_v = B_v;
  r.b_v = b_v;
  r.validate();
  return r;
}

BatchRule BatchRule::page_ref(double eps, std::size_t N_ref, std::size_t N_0, double B_v, double b_v) {
  BatchRule r;
  r.kind = Kind::PageRef;
  r.B_v = B_v;
  r.b_v = b_v;
  r.eps = eps;
  r.N_ref = N_ref;
  r.N_0 = N_0;
  r.validate();
  return r;
}

BatchRule BatchRule::weakly_convex(std::size_t N_0, std::size_t N) {
  BatchRule r;
  r.kind = Kind::WeaklyConvexConst;
  r.N_0 = N_0;
  r.N = N;
  r.validate();
  return r;
}

void BatchRule::validate() const {
  if (!(B_v >= 0.0) || !(b_v >= 0.0)) throw ConfigError("batch rule needs B_v, b_v >= 0");
  switch (kind) {
    case Kind::Unit:
      break;
    case Kind::DynamicSigma:
      if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw ConfigError("sigma2 must be positive");
      break;
    case Kind::PageRef:
      if (!(eps > 0.0)) throw ConfigError("page batch rule needs eps > 0");
      if (N_ref == 0 || N_0 == 0) throw ConfigError("page batch sizes must be >= 1");
      break;
    case Kind::WeaklyConvexConst:
      if (N_0 == 0 || N == 0) throw ConfigError("batch sizes must be >= 1");
      break;
  }
}

std::size_t BatchRule::batch(std::size_t t, const Vec& x, const Vec& x0) const {
  switch (kind) {
    case Kind::Unit:
      return 1;
    case Kind::DynamicSigma:
      return dynamic_batch(x, x0, B_v, b_v, sigma2);
    case Kind::PageRef:
      return t == 0 ? N_0 : page_dynamic_batch(x, x0, B_v, b_v, eps, N_ref);
    case Kind::WeaklyConvexConst:
      return t == 0 ? N_0 : N;
  }
  return 1;
}

const char* to_string(BatchRule::Kind kind) {
  switch (kind) {
    case BatchRule::Kind::Unit:
      return "unit";
    case BatchRule::Kind::DynamicSigma:
      return "dynamic-sigma";
    case BatchRule::Kind::PageRef:
      return "page-ref";
    case BatchRule::Kind::WeaklyConvexConst:
      return "weakly-convex-const";
  }
  return "unknown";
}

namespace detail {

void page_check(const PageState& state, const Vec& x_t, const GradientOracle& oracle, double p_t,
                std::size_t b_t) {
  if (!(p_t > 0.0 && p_t <= 1.0)) throw ConfigError("reset probability must lie in (0, 1]");
  if (b_t == 0) throw InputError("correction batch must be >= 1");
  if (static_cast<std::size_t>(x_t.size()) != oracle.dimension()) throw InputError("dimension mismatch");
  if (!x_t.allFinite()) throw InputError("iterate must be finite");
  if (!state.initialized && p_t < 1.0) throw StateError("PAGE state is uninitialized and p_t < 1");
}

void page_reset(PageState& state, const Vec& x_t, const GradientOracle& oracle, std::size_t N_t, Rng& rng) {
  if (N_t == 0) throw InputError("reset batch must be >= 1");
  state.g_prev.resize(x_t.size());
  oracle.sample_mean_into(x_t, N_t, rng, state.g_prev);
  state.x_prev = x_t;
  state.initialized = true;
}

void page_correct(PageState& state, const Vec& x_t, const GradientOracle& oracle, std::size_t b_t, Rng& rng) {
  state.scratch.resize(x_t.size());
  oracle.paired_difference_into(x_t, state.x_prev, b_t, rng, state.scratch);
  state.g_prev += state.scratch;
  state.x_prev = x_t;
}

}  // namespace detail

PageStepResult page_step(PageState& state, const Vec& x_t, const GradientOracle& oracle, double p_t,
                         std::size_t N_t, std::size_t b_t, Rng& rng) {
  if (N_t == 0) throw InputError("reset batch must be >= 1");
  return page_step(state, x_t, oracle, p_t, [N_t] { return N_t; }, b_t, rng);
}

}  // namespace pasta
