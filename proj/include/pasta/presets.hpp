#ifndef PASTA_PRESETS_HPP
#define PASTA_PRESETS_HPP

#include "pasta/pasta.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pasta {

enum class PresetKind { Smooth, ConvexSmooth, LipschitzConvex, Page, Pl, Star, WeaklyConvex };

const char* to_string(PresetKind k);
PresetKind parse_preset(std::string_view name);
std::vector<std::string> preset_names();

/// Dynamic batching on an L-smooth objective, mean-square gradient target.
PastaConfig preset_smooth(double eps, double L, double Delta, double B_v, double b_v, double sigma2);
/// Dynamic batching on a convex L-smooth objective, ergodic gap target.
PastaConfig preset_convex_smooth(double eps, double L, double R0, double B_v, double b_v, double sigma2);
/// Dynamic batching on a convex G-Lipschitz objective, ergodic gap target.
PastaConfig preset_lipschitz_convex(double eps, double G, double R0, double B_v, double b_v, double sigma2);
/// PAGE estimator under mean-square smoothness Lbar.
PastaConfig preset_page(double eps, double Lbar, double Delta, double B_v, double b_v);
/// Single-sample SGD under the PL inequality, last-iterate gap target.
PastaConfig preset_pl(double eps, double L, double mu, double Delta, double B_v, double b_v);
/// Single-sample SGD under star-convexity, last-iterate gap target.
PastaConfig preset_star(double eps, double L, double mu, double Delta, double B_v, double b_v);
/// Anchored epochs on a rho-weakly convex G-Lipschitz objective, Moreau target.
PastaConfig preset_weakly_convex(double eps, double rho, double lambda, double G, double Delta, double B_v,
                                 double b_v);

struct UncertaintyCheck {
  bool holds = false;
  double slack = 0.0;
  bool sampling_ok = false;
  bool step_ok = false;
};

/// beta (1 - 2 beta) N >= eta^2 B_v^2 and eta <= sqrt(beta) / (2 L).
UncertaintyCheck check_uncertainty(double beta, double N, double eta, double B_v, double L);

/// Every constant any preset or budget may need.
struct PresetInputs {
  double eps = 0.0;
  double L = 0.0;
  double Lbar = 0.0;
  double Delta = 0.0;
  double R0 = 0.0;
  double G = 0.0;
  double mu = 0.0;
  double rho = 0.0;
  double lambda = 0.0;
  double sigma2 = 1.0;
  double B_v = 0.0;
  double b_v = 0.0;
};

PastaConfig make_preset(PresetKind kind, const PresetInputs& in);

struct BudgetReport {
  PresetKind kind = PresetKind::Smooth;
  /// Closed-form expected-call bound.
  double bound = 0.0;
  /// Calls the same preset makes when B_v = b_v = 0.
  double deterministic_calls = 0.0;
  std::optional<double> measured;
};

BudgetReport budget(PresetKind kind, const PresetInputs& in);

}  // namespace pasta

#endif
