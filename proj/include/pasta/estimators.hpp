#ifndef PASTA_ESTIMATORS_HPP
#define PASTA_ESTIMATORS_HPP

#include "pasta/oracle.hpp"
#include "pasta/rng.hpp"
#include "pasta/types.hpp"

#include <concepts>
#include <cstddef>

namespace pasta {

/// max{1, ceil((B_v^2 ||x - x0||^2 + b_v^2) / sigma2)}.
std::size_t dynamic_batch(const Vec& x, const Vec& x0, double B_v, double b_v, double sigma2);

/// max{N_ref, ceil(2 (B_v^2 ||x - x0||^2 + b_v^2) / eps^2)}.
std::size_t page_dynamic_batch(const Vec& x, const Vec& x0, double B_v, double b_v, double eps,
                               std::size_t N_ref);

struct PageParams {
  std::size_t N_ref = 1;
  std::size_t b = 1;
  double p = 1.0;
  double eta = 0.0;
  std::size_t K = 1;
  std::size_t N_0 = 1;
};

PageParams page_params(double eps, double Delta, double B_v, double b_v, double Lbar);

/// Batch size emitted at inner step t of an epoch.
struct BatchRule {
  enum class Kind { Unit, DynamicSigma, PageRef, WeaklyConvexConst };

  Kind kind = Kind::Unit;
  /// Envelope constants the schedule is sized for.
  double B_v = 0.0;
  double b_v = 0.0;
  double sigma2 = 1.0;
  double eps = 1.0;
  std::size_t N_ref = 1;
  std::size_t N_0 = 1;
  std::size_t N = 1;

  static BatchRule unit();
  static BatchRule dynamic_sigma(double sigma2, double B_v, double b_v);
  static BatchRule page_ref(double eps, std::size_t N_ref, std::size_t N_0, double B_v, double b_v);
  static BatchRule weakly_convex(std::size_t N_0, std::size_t N);

  /// PageRef and WeaklyConvexConst emit N_0 at t = 0.
  std::size_t batch(std::size_t t, const Vec& x, const Vec& x0) const;
  void validate() const;
};

const char* to_string(BatchRule::Kind kind);

struct PageState {
  Vec g_prev;
  Vec x_prev;
  bool initialized = false;
  Vec scratch;
};

struct PageStepResult {
  std::size_t calls = 0;
  bool reset = false;
  /// Batch drawn: N_t on reset, b_t otherwise.
  std::size_t batch = 0;
};

/// One PAGE update; the new estimate is left in state.g_prev. `reset_batch`
/// is evaluated only when the reset branch fires.
template <std::invocable ResetBatch>
PageStepResult page_step(PageState& state, const Vec& x_t, const GradientOracle& oracle, double p_t,
                         ResetBatch&& reset_batch, std::size_t b_t, Rng& rng);

/// Same with a fixed reset batch N_t.
PageStepResult page_step(PageState& state, const Vec& x_t, const GradientOracle& oracle, double p_t,
                         std::size_t N_t, std::size_t b_t, Rng& rng);

namespace detail {
void page_check(const PageState& state, const Vec& x_t, const GradientOracle& oracle, double p_t,
                std::size_t b_t);
void page_reset(PageState& state, const Vec& x_t, const GradientOracle& oracle, std::size_t N_t, Rng& rng);
void page_correct(PageState& state, const Vec& x_t, const GradientOracle& oracle, std::size_t b_t, Rng& rng);
}  // namespace detail

template <std::invocable ResetBatch>
PageStepResult page_step(PageState& state, const Vec& x_t, const GradientOracle& oracle, double p_t,
                         ResetBatch&& reset_batch, std::size_t b_t, Rng& rng) {
  detail::page_check(state, x_t, oracle, p_t, b_t);
  // p_t = 1 consumes no coin so the draw stream matches plain minibatching
  const bool reset = p_t >= 1.0 || rng.bernoulli(p_t);
  PageStepResult r;
  r.reset = reset;
  if (reset) {
    const std::size_t N_t = reset_batch();
    detail::page_reset(state, x_t, oracle, N_t, rng);
    r.calls = N_t;
    r.batch = N_t;
  } else {
    detail::page_correct(state, x_t, oracle, b_t, rng);
    r.calls = 2 * b_t;
    r.batch = b_t;
  }
  return r;
}

}  // namespace pasta

#endif
