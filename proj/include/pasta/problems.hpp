#ifndef PASTA_PROBLEMS_HPP
#define PASTA_PROBLEMS_HPP

#include "pasta/types.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pasta {

/// Box on which numerical certificates are evaluated, per coordinate.
struct CertificationBox {
  double lo = -20.0;
  double hi = 20.0;
};

struct ObjectiveMeta {
  std::optional<double> L;
  std::optional<double> Lbar;
  std::optional<double> mu_pl;
  std::optional<double> mu_star;
  std::optional<double> rho;
  std::optional<double> G;
  std::optional<double> f_star;
  std::optional<Vec> x_star;
  /// Upper bound on f(start) - inf f.
  double Delta = 0.0;
  CertificationBox box;
};

class Objective {
 public:
  Objective(std::string name, std::size_t dim, Vec start);
  virtual ~Objective() = default;

  const std::string& name() const { return name_; }
  std::size_t dimension() const { return dim_; }
  const ObjectiveMeta& meta() const { return meta_; }
  /// Default initial point, also the default oracle anchor.
  const Vec& start() const { return start_; }

  virtual double value(const Vec& x) const = 0;
  /// Gradient, or the minimum-norm subgradient on nonsmooth instances.
  virtual void gradient_into(const Vec& x, Vec& out) const = 0;
  virtual bool smooth() const = 0;

  Vec gradient(const Vec& x) const;
  /// Copy of this objective started from `x0`; Delta is recomputed from
  /// f_star when the optimum is known.
  std::shared_ptr<const Objective> with_start(const Vec& x0) const;
  /// f(x) - f_star when the optimum is known, else meta().Delta.
  double gap_bound(const Vec& x) const;

 protected:
  virtual std::shared_ptr<Objective> clone() const = 0;

  ObjectiveMeta meta_;

 private:
  std::string name_;
  std::size_t dim_;
  Vec start_;
};

using ObjectivePtr = std::shared_ptr<const Objective>;

/// Objective of the form sum_i h(x_i) with a scalar 1-D piece h.
class SeparableObjective : public Objective {
 public:
  using Objective::Objective;

  double value(const Vec& x) const override;
  void gradient_into(const Vec& x, Vec& out) const override;

  virtual double coord_value(double t) const = 0;
  /// Minimum-norm element of the subdifferential of h at t.
  virtual double coord_grad(double t) const = 0;
  /// Subdifferential of the convexified piece is [lo, hi]; lo == hi off kinks.
  virtual std::pair<double, double> coord_subdifferential(double t) const;
  /// Points where h is not differentiable.
  virtual std::vector<double> coord_kinks() const { return {}; }
};

ObjectivePtr make_quadratic(std::size_t p, double condition);
/// sum x_i^2 + 3 sin^2 x_i.
ObjectivePtr make_pl_nonconvex(std::size_t p);
/// sum |x_i^2 - 1|, optionally with linear continuation beyond |x_i| = radius
/// so that G = 2 radius holds globally.
ObjectivePtr make_weakly_convex(std::size_t p, double radius = kInf);
/// sum |x_i|.
ObjectivePtr make_abs(std::size_t p);
/// sum x_i^2 + (1/2) x_i sin x_i.
ObjectivePtr make_star_convex(std::size_t p);
/// 1-D descent ramp: slope -2 eps up to D = Delta/(4 eps), flattening with
/// curvature L/2 until D + 4 eps/L, constant afterwards.
ObjectivePtr make_travel(double eps, double Delta, double L);

struct ProblemOptions {
  std::optional<double> eps;
  /// Replaces the default start point when set (length 1 broadcasts).
  std::optional<Vec> start;
};

/// Registry lookup by key, e.g. "quadratic-p10-c4", "pl-p2", "star-p2",
/// "weakly-convex-p1", "weakly-convex-p1-r1.5", "abs-p1", "travel-L16-D2".
ObjectivePtr make_problem(std::string_view key, const ProblemOptions& opts = {});
std::vector<std::string> problem_key_patterns();

/// Result of a sampled certificate: worst observed ratio or violation.
struct Certificate {
  std::string name;
  double observed = 0.0;
  double limit = 0.0;
  bool ok = false;
};

Certificate certify_gradient_consistency(const Objective& f, std::size_t n, std::uint64_t seed);
Certificate certify_lipschitz_gradient(const Objective& f, std::size_t n, std::uint64_t seed);
Certificate certify_pl(const Objective& f, std::size_t n, std::uint64_t seed);
Certificate certify_star(const Objective& f, std::size_t n, std::uint64_t seed);
Certificate certify_weak_convexity(const Objective& f, std::size_t n, std::uint64_t seed);

}  // namespace pasta

#endif
