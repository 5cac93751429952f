#ifndef PASTA_MOREAU_HPP
#define PASTA_MOREAU_HPP

#include "pasta/problems.hpp"
#include "pasta/types.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace pasta {

struct ProxResult {
  Vec xhat;
  /// Smooth f: ||grad f(xhat) + lambda (xhat - x)||. Nonsmooth f: distance from
  /// 0 to the subdifferential of the regularized subproblem at xhat.
  double inner_residual = 0.0;
  std::size_t iters = 0;
  bool subgradient_residual = false;
};

/// Default tolerance 1e-8 max(1, ||x||).
double default_prox_tol(const Vec& x);

/// argmin_y f(y) + (lambda/2) ||y - x||^2. Smooth objectives use gradient
/// descent with step 1/(lambda + L); nonsmooth separable objectives solve each
/// coordinate's monotone inclusion by bisection with exact kink detection.
ProxResult prox(const Objective& f, double lambda, const Vec& x, std::optional<double> tol = std::nullopt);

/// lambda (x - prox(x)).
Vec moreau_grad(const Objective& f, double lambda, const Vec& x, std::optional<double> tol = std::nullopt);

/// f(xhat) + (lambda/2) ||xhat - x||^2.
double moreau_value(const Objective& f, double lambda, const Vec& x, std::optional<double> tol = std::nullopt);

/// Closed-form prox of sum |y_i|: soft-threshold at 1/lambda.
Vec prox_abs(double lambda, const Vec& x);
/// Closed-form prox of (1/2) sum a_i y_i^2: lambda x_i / (a_i + lambda).
Vec prox_diag_quadratic(const Vec& a, double lambda, const Vec& x);

/// max{lambda, lambda rho / (lambda - rho)}.
double moreau_smoothness(double lambda, double rho);

struct MoreauReport {
  std::vector<double> per_anchor;
  double average = 0.0;
  double max_residual = 0.0;
};

MoreauReport moreau_stationarity(const std::vector<Vec>& anchors, const Objective& f, double lambda,
                                 std::optional<double> tol = std::nullopt);

}  // namespace pasta

#endif
