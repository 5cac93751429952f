#include "pasta/presets.hpp"

#include <algorithm>
#include <cmath>

namespace pasta {

namespace {

double smooth_bound(const PresetInputs& in, const PastaConfig& cfg) {
  const double B2 = in.B_v * in.B_v, b2 = in.b_v * in.b_v;
  const double s2 = in.sigma2, L = in.L, D = in.Delta;
  const double e2 = in.eps * in.eps;
  const double e4 = e2 * e2, e6 = e4 * e2;
  if (e2 <= 2.0 * s2) {
    return 256.0 * B2 * D * D * D * L / e6 + 80.0 * B2 * D * D / (e2 * s2) + 32.0 * B2 * D * D / e4 +
           8.0 * B2 * D * e2 / (L * s2 * s2) + 8.0 * B2 * D / (L * s2) + B2 * e6 / (4.0 * L * L * s2 * s2 * s2) +
           B2 * e4 / (2.0 * L * L * s2 * s2) + 8.0 * D * L * b2 / e4 + 8.0 * D * L * s2 / e4 + b2 / s2 + 1.0;
  }
  // eta = 1/L branch: sum the distance drift bound over the K steps
  const double K = static_cast<double>(cfg.K);
  const double drift = 4.0 * K * D / L + 2.0 * K * K * s2 / (L * L) + 2.0 * K * s2 / (L * L);
  return K * (1.0 + b2 / s2) + B2 / s2 * K * drift;
}

double page_bound(const PresetInputs& in) {
  const PageParams pp = page_params(in.eps, in.Delta, in.B_v, in.b_v, in.Lbar);
  const double e2 = in.eps * in.eps;
  const double B2 = in.B_v * in.B_v, b2 = in.b_v * in.b_v;
  const double D = in.Delta, Lb = in.Lbar, p = pp.p;
  const double A = 16.0 * D * Lb / e2 + std::sqrt(8.0 * B2 * D * D / (e2 * e2) + 2.0 * b2 / e2 + 1.0) + 1.0;
  const double per_step = 2.0 * static_cast<double>(pp.b) + p + p * 2.0 * b2 / e2 +
                          p * 2.0 * B2 / (16.0 * Lb * Lb * e2) * A * (32.0 * D * Lb + 2.0 * e2 / p + e2);
  return 2.0 * b2 / e2 + 1.0 + A * per_step;
}

// displayed expression S (N_0 + K N)
double weakly_convex_calls(const PastaConfig& c) {
  return static_cast<double>(c.S) *
         (static_cast<double>(c.batch.N_0) + static_cast<double>(c.K) * static_cast<double>(c.batch.N));
}

// executed: N_0 at t = 0, then N for t = 1..K-1
double weakly_convex_executed(const PastaConfig& c) {
  return static_cast<double>(c.S) *
         (static_cast<double>(c.batch.N_0) + static_cast<double>(c.K - 1) * static_cast<double>(c.batch.N));
}

}  // namespace

BudgetReport budget(PresetKind kind, const PresetInputs& in) {
  const PastaConfig cfg = make_preset(kind, in);
  PresetInputs quiet = in;
  quiet.B_v = 0.0;
  quiet.b_v = 0.0;
  const PastaConfig det = make_preset(kind, quiet);

  BudgetReport r;
  r.kind = kind;
  r.deterministic_calls = kind == PresetKind::WeaklyConvex ? weakly_convex_executed(det) : static_cast<double>(det.K);
  const double K = static_cast<double>(cfg.K);
  const double B2 = in.B_v * in.B_v, b2 = in.b_v * in.b_v;
  switch (kind) {
    case PresetKind::Smooth:
      r.bound = smooth_bound(in, cfg);
      break;
    case PresetKind::ConvexSmooth:
      r.bound = K * (1.0 + (b2 + 4.0 * B2 * in.R0 * in.R0) / in.sigma2) + B2 * K * K * cfg.eta * cfg.eta;
      break;
    case PresetKind::LipschitzConvex: {
      const double GS = in.G * in.G + in.sigma2;
      r.bound = K * (1.0 + (b2 + 4.0 * B2 * in.R0 * in.R0) / in.sigma2) +
                B2 * in.eps * in.eps / (in.sigma2 * GS) * K * K;
      break;
    }
    case PresetKind::Page:
      r.bound = page_bound(in);
      break;
    case PresetKind::Pl: {
      const double lg = std::max(0.0, std::log(3.0 * in.Delta / in.eps));
      const double mu = in.mu, L = in.L;
      const double m = std::max({2.0 * L / mu, 6.0 * L * b2 / (mu * mu * in.eps),
                                 24.0 * L * B2 * in.Delta / (mu * mu * mu * in.eps)});
      r.bound = static_cast<double>(ceil_count(m * lg));
      break;
    }
    case PresetKind::Star: {
      const double mu = in.mu, L = in.L;
      const double lg = std::max(0.0, std::log(3.0 * L * in.Delta / (mu * in.eps)));
      const double m = std::max({2.0 * L / mu, 8.0 * B2 / (mu * mu), 24.0 * L * B2 * in.Delta / (mu * mu * mu * in.eps),
                                 6.0 * L * b2 / (mu * mu * in.eps)});
      r.bound = static_cast<double>(ceil_count(m * lg));
      break;
    }
    case PresetKind::WeaklyConvex:
      r.bound = weakly_convex_calls(cfg);
      break;
  }
  return r;
}

}  // namespace pasta
