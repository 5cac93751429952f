#include "pasta/presets.hpp"

#include <algorithm>
#include <cmath>

namespace pasta {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(name) + " must be positive and finite");
}

void require_nonneg(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(std::string(name) + " must be finite and >= 0");
}

double positive_part(double v) { return v > 0.0 ? v : 0.0; }

}  // namespace

const char* to_string(PresetKind k) {
  switch (k) {
    case PresetKind::Smooth:
      return "smooth";
    case PresetKind::ConvexSmooth:
      return "convex-smooth";
    case PresetKind::LipschitzConvex:
      return "lipschitz-convex";
    case PresetKind::Page:
      return "page";
    case PresetKind::Pl:
      return "pl";
    case PresetKind::Star:
      return "star";
    case PresetKind::WeaklyConvex:
      return "weakly-convex";
  }
  return "unknown";
}

std::vector<std::string> preset_names() {
  return {"smooth", "convex-smooth", "lipschitz-convex", "page", "pl", "star", "weakly-convex"};
}

PresetKind parse_preset(std::string_view name) {
  for (PresetKind k : {PresetKind::Smooth, PresetKind::ConvexSmooth, PresetKind::LipschitzConvex, PresetKind::Page,
                       PresetKind::Pl, PresetKind::Star, PresetKind::WeaklyConvex})
    if (name == to_string(k)) return k;
  throw InputError("unknown preset '" + std::string(name) + "'");
}

PastaConfig preset_smooth(double eps, double L, double Delta, double B_v, double b_v, double sigma2) {
  require_positive(eps, "eps");
  require_positive(L, "L");
  require_nonneg(Delta, "Delta");
  require_positive(sigma2, "sigma2");
  PastaConfig c;
  c.preset = to_string(PresetKind::Smooth);
  c.eps = eps;
  c.eta = std::min(1.0 / L, eps * eps / (2.0 * L * sigma2));
  c.K = ceil_count(4.0 * Delta / (c.eta * eps * eps));
  c.batch = BatchRule::dynamic_sigma(sigma2, B_v, b_v);
  c.stop = StopCriterion::MeanSquareGradient;
  return c;
}

PastaConfig preset_convex_smooth(double eps, double L, double R0, double B_v, double b_v, double sigma2) {
  require_positive(eps, "eps");
  require_positive(L, "L");
  require_nonneg(R0, "R0");
  require_positive(sigma2, "sigma2");
  PastaConfig c;
  c.preset = to_string(PresetKind::ConvexSmooth);
  c.eps = eps;
  c.eta = std::min(1.0 / (2.0 * L), eps / (2.0 * sigma2));
  c.K = ceil_count(2.0 * R0 * R0 / (c.eta * eps));
  c.batch = BatchRule::dynamic_sigma(sigma2, B_v, b_v);
  c.stop = StopCriterion::ErgodicGap;
  return c;
}

PastaConfig preset_lipschitz_convex(double eps, double G, double R0, double B_v, double b_v, double sigma2) {
  require_positive(eps, "eps");
  require_nonneg(G, "G");
  require_nonneg(R0, "R0");
  require_positive(sigma2, "sigma2");
  PastaConfig c;
  c.preset = to_string(PresetKind::LipschitzConvex);
  c.eps = eps;
  c.eta = eps / (G * G + sigma2);
  c.K = ceil_count((G * G + sigma2) * R0 * R0 / (eps * eps));
  c.batch = BatchRule::dynamic_sigma(sigma2, B_v, b_v);
  c.stop = StopCriterion::ErgodicGap;
  return c;
}

PastaConfig preset_page(double eps, double Lbar, double Delta, double B_v, double b_v) {
  const PageParams pp = page_params(eps, Delta, B_v, b_v, Lbar);
  PastaConfig c;
  c.preset = to_string(PresetKind::Page);
  c.eps = eps;
  c.eta = pp.eta;
  c.K = pp.K;
  c.p = pp.p;
  c.page_b = pp.b;
  c.batch = BatchRule::page_ref(eps, pp.N_ref, pp.N_0, B_v, b_v);
  c.estimator = EstimatorKind::Page;
  c.stop = StopCriterion::MeanSquareGradient;
  return c;
}

PastaConfig preset_pl(double eps, double L, double mu, double Delta, double B_v, double b_v) {
  require_positive(eps, "eps");
  require_positive(L, "L");
  require_positive(mu, "mu");
  require_nonneg(Delta, "Delta");
  require_nonneg(B_v, "B_v");
  require_nonneg(b_v, "b_v");
  PastaConfig c;
  c.preset = to_string(PresetKind::Pl);
  c.eps = eps;
  c.eta = std::min({1.0 / L, div_or_inf(mu * eps, 3.0 * L * b_v * b_v),
                    div_or_inf(mu * mu * eps, 12.0 * L * B_v * B_v * Delta)});
  c.K = ceil_count(2.0 / (c.eta * mu) * positive_part(std::log(3.0 * Delta / eps)));
  c.batch = BatchRule::unit();
  c.stop = StopCriterion::LastIterateGap;
  return c;
}

PastaConfig preset_star(double eps, double L, double mu, double Delta, double B_v, double b_v) {
  require_positive(eps, "eps");
  require_positive(L, "L");
  require_positive(mu, "mu");
  require_nonneg(Delta, "Delta");
  require_nonneg(B_v, "B_v");
  require_nonneg(b_v, "b_v");
  PastaConfig c;
  c.preset = to_string(PresetKind::Star);
  c.eps = eps;
  c.eta = std::min({1.0 / L, div_or_inf(mu, 4.0 * B_v * B_v), div_or_inf(mu * mu * eps, 12.0 * L * B_v * B_v * Delta),
                    div_or_inf(mu * eps, 3.0 * L * b_v * b_v)});
  c.K = ceil_count(2.0 / (c.eta * mu) * positive_part(std::log(3.0 * L * Delta / (mu * eps))));
  c.batch = BatchRule::unit();
  c.stop = StopCriterion::LastIterateGap;
  return c;
}

PastaConfig preset_weakly_convex(double eps, double rho, double lambda, double G, double Delta, double B_v,
                                 double b_v) {
  require_positive(eps, "eps");
  require_nonneg(rho, "rho");
  require_nonneg(G, "G");
  require_nonneg(Delta, "Delta");
  require_nonneg(B_v, "B_v");
  require_nonneg(b_v, "b_v");
  if (!(lambda > rho) || !std::isfinite(lambda)) throw ConfigError("lambda must exceed rho");
  const double mu = lambda - rho;
  const double c3 = 3.0 * lambda * lambda - rho * rho;
  const double mu3 = mu * mu * mu;
  const double l2 = lambda * lambda;
  const double e2 = eps * eps;
  PastaConfig c;
  c.preset = to_string(PresetKind::WeaklyConvex);
  c.eps = eps;
  c.lambda = lambda;
  c.eta = std::min(mu3 / (96.0 * l2 * c3), div_or_inf(mu3 * e2, 256.0 * G * G * l2 * c3));
  c.S = ceil_count(32.0 * l2 * Delta / (mu * e2));
  c.K = ceil_count(1.0 + std::log(12.0 * c3 / (mu * mu)) / (c.eta * mu));
  const double S = static_cast<double>(c.S);
  const double B2 = B_v * B_v;
  const double b2 = b_v * b_v;
  const double n0 = std::max((4.0 / 3.0 + 2.0 * mu * mu / (3.0 * c3)) * B2 * c.eta * c.eta * S * S,
                             16.0 * b2 * c.eta * c.eta / (3.0 * l2 * e2));
  const double n = std::max({(96.0 * c3 / mu3 + 48.0 / mu) * B2 * c.eta * S * S,
                             128.0 * b2 * c.eta * c3 / (mu3 * l2 * e2), 72.0 * B2 * c.eta * c3 / mu3});
  c.batch = BatchRule::weakly_convex(ceil_count(n0), ceil_count(n));
  c.batch.B_v = B_v;
  c.batch.b_v = b_v;
  c.stop = StopCriterion::MoreauStationarity;
  return c;
}

UncertaintyCheck check_uncertainty(double beta, double N, double eta, double B_v, double L) {
  if (!(beta >= 0.0 && beta < 1.0)) throw InputError("beta must lie in [0, 1)");
  if (!(N >= 1.0)) throw InputError("N must be >= 1");
  UncertaintyCheck r;
  r.slack = beta * (1.0 - 2.0 * beta) * N - eta * eta * B_v * B_v;
  r.sampling_ok = r.slack >= 0.0;
  r.step_ok = eta <= std::sqrt(beta) / (2.0 * L);
  r.holds = r.sampling_ok && r.step_ok;
  return r;
}

PastaConfig make_preset(PresetKind kind, const PresetInputs& in) {
  switch (kind) {
    case PresetKind::Smooth:
      return preset_smooth(in.eps, in.L, in.Delta, in.B_v, in.b_v, in.sigma2);
    case PresetKind::ConvexSmooth:
      return preset_convex_smooth(in.eps, in.L, in.R0, in.B_v, in.b_v, in.sigma2);
    case PresetKind::LipschitzConvex:
      return preset_lipschitz_convex(in.eps, in.G, in.R0, in.B_v, in.b_v, in.sigma2);
    case PresetKind::Page:
      return preset_page(in.eps, in.Lbar, in.Delta, in.B_v, in.b_v);
    case PresetKind::Pl:
      return preset_pl(in.eps, in.L, in.mu, in.Delta, in.B_v, in.b_v);
    case PresetKind::Star:
      return preset_star(in.eps, in.L, in.mu, in.Delta, in.B_v, in.b_v);
    case PresetKind::WeaklyConvex:
      return preset_weakly_convex(in.eps, in.rho, in.lambda, in.G, in.Delta, in.B_v, in.b_v);
  }
  throw InputError("unknown preset");
}

}  // namespace pasta
