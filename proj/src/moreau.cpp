#include "pasta/moreau.hpp"

#include "pasta/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pasta {

namespace {

constexpr std::size_t kMaxIters = 1000000;

double weak_convexity(const Objective& f) {
  if (f.meta().rho) return *f.meta().rho;
  if (f.meta().L) return *f.meta().L;
  throw InputError("objective declares neither rho nor L");
}

ProxResult prox_smooth(const Objective& f, double lambda, const Vec& x, double tol) {
  if (!f.meta().L) throw InputError("smooth prox needs a declared L");
  const double step = 1.0 / (lambda + *f.meta().L);
  ProxResult r;
  Vec y = x, g(x.size()), best = x;
  double best_res = kInf;
  for (std::size_t k = 0; k <= kMaxIters; ++k) {
    f.gradient_into(y, g);
    g += lambda * (y - x);
    const double res = g.norm();
    if (res < best_res) {
      best_res = res;
      best = y;
    }
    if (res <= tol) {
      r.xhat = y;
      r.inner_residual = res;
      r.iters = k;
      return r;
    }
    if (!std::isfinite(res)) break;
    y -= step * g;
  }
  std::ostringstream os;
  os << "prox did not reach tolerance " << tol << "; best residual " << best_res;
  throw NonConvergenceError(os.str(), best_res);
}

// 0 in dh(y) + lambda (y - x) for a scalar piece with lambda > rho.
double prox_coordinate(const SeparableObjective& f, double lambda, double x, double& residual, std::size_t& iters) {
  for (double k : f.coord_kinks()) {
    const auto [lo, hi] = f.coord_subdifferential(k);
    const double shift = lambda * (k - x);
    if (lo + shift <= 0.0 && 0.0 <= hi + shift) {
      residual = 0.0;
      return k;
    }
  }
  auto q = [&](double y) { return f.coord_grad(y) + lambda * (y - x); };
  double width = 1.0;
  double a = x - width, b = x + width;
  while (q(a) > 0.0) {
    width *= 2.0;
    a = x - width;
    if (!std::isfinite(a)) throw NonConvergenceError("prox bracket diverged", kInf);
  }
  width = 1.0;
  while (q(b) < 0.0) {
    width *= 2.0;
    b = x + width;
    if (!std::isfinite(b)) throw NonConvergenceError("prox bracket diverged", kInf);
  }
  double mid = 0.5 * (a + b);
  for (std::size_t k = 0; k < 2000; ++k) {
    ++iters;
    mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double v = q(mid);
    if (v == 0.0) break;
    (v < 0.0 ? a : b) = mid;
  }
  residual = std::abs(q(mid));
  return mid;
}

ProxResult prox_separable(const SeparableObjective& f, double lambda, const Vec& x, double tol) {
  ProxResult r;
  r.subgradient_residual = true;
  r.xhat.resize(x.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double res = 0.0;
    r.xhat[i] = prox_coordinate(f, lambda, x[i], res, r.iters);
    acc += res * res;
  }
  r.inner_residual = std::sqrt(acc);
  if (r.inner_residual > tol) {
    std::ostringstream os;
    os << "prox residual " << r.inner_residual << " above tolerance " << tol;
    throw NonConvergenceError(os.str(), r.inner_residual);
  }
  return r;
}

}  // namespace

double default_prox_tol(const Vec& x) { return 1e-8 * std::max(1.0, x.norm()); }

ProxResult prox(const Objective& f, double lambda, const Vec& x, std::optional<double> tol) {
  if (static_cast<std::size_t>(x.size()) != f.dimension()) throw InputError("prox point dimension mismatch");
  if (!x.allFinite()) throw InputError("prox point must be finite");
  const double rho = weak_convexity(f);
  if (!(lambda > rho)) {
    std::ostringstream os;
    os << "prox needs lambda > rho (lambda = " << lambda << ", rho = " << rho << ")";
    throw CurvatureError(os.str());
  }
  const double t = tol.value_or(default_prox_tol(x));
  if (!(t > 0.0)) throw InputError("prox tolerance must be positive");
  if (f.smooth()) return prox_smooth(f, lambda, x, t);
  const auto* sep = dynamic_cast<const SeparableObjective*>(&f);
  if (!sep) throw InputError("prox of a nonsmooth objective needs separable structure");
  return prox_separable(*sep, lambda, x, t);
}

Vec moreau_grad(const Objective& f, double lambda, const Vec& x, std::optional<double> tol) {
  return lambda * (x - prox(f, lambda, x, tol).xhat);
}

double moreau_value(const Objective& f, double lambda, const Vec& x, std::optional<double> tol) {
  const Vec y = prox(f, lambda, x, tol).xhat;
  return f.value(y) + 0.5 * lambda * (y - x).squaredNorm();
}

Vec prox_abs(double lambda, const Vec& x) {
  if (!(lambda > 0.0)) throw CurvatureError("prox needs lambda > 0");
  const double tau = 1.0 / lambda;
  return x.unaryExpr([tau](double v) { return v > tau ? v - tau : (v < -tau ? v + tau : 0.0); });
}

Vec prox_diag_quadratic(const Vec& a, double lambda, const Vec& x) {
  if (a.size() != x.size()) throw InputError("prox_diag_quadratic dimension mismatch");
  if (!(lambda + a.minCoeff() > 0.0)) throw CurvatureError("prox needs lambda + min a > 0");
  return (lambda * x.array() / (a.array() + lambda)).matrix();
}

double moreau_smoothness(double lambda, double rho) {
  if (!(lambda > rho)) throw CurvatureError("moreau smoothness needs lambda > rho");
  return std::max(lambda, lambda * rho / (lambda - rho));
}

MoreauReport moreau_stationarity(const std::vector<Vec>& anchors, const Objective& f, double lambda,
                                 std::optional<double> tol) {
  MoreauReport r;
  r.per_anchor.reserve(anchors.size());
  for (const Vec& a : anchors) {
    const ProxResult p = prox(f, lambda, a, tol);
    r.per_anchor.push_back((lambda * (a - p.xhat)).squaredNorm());
    r.max_residual = std::max(r.max_residual, p.inner_residual);
  }
  if (!r.per_anchor.empty()) {
    double s = 0.0;
    for (double v : r.per_anchor) s += v;
    r.average = s / static_cast<double>(r.per_anchor.size());
  }
  return r;
}

}  // namespace pasta
