#ifndef PASTA_HARNESS_HPP
#define PASTA_HARNESS_HPP

#include "pasta/pasta.hpp"
#include "pasta/presets.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pasta {

/// Default eps grid for sweeps.
std::vector<double> default_eps_grid();

struct SweepSpec {
  std::string preset = "smooth";
  std::string problem = "quadratic-p10-c4";
  std::vector<double> eps = default_eps_grid();
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  double B_v = 0.0;
  double b_v = 0.0;
  double sigma2 = 1.0;
  /// Anchoring strength for the weakly convex preset; defaults to 2 rho.
  std::optional<double> lambda;
  std::optional<Vec> start;
  std::size_t trace_every = 1;
  std::string out;

  void validate() const;
};

/// Reads a TOML file whose keys mirror SweepSpec.
SweepSpec load_sweep_spec(const std::string& path);
/// Applies keys present in the TOML text on top of `base`.
SweepSpec parse_sweep_spec(const std::string& toml_text, SweepSpec base = {});

struct ResultRow {
  std::string preset;
  std::string problem;
  double eps = 0.0;
  std::uint64_t seed = 0;
  std::size_t calls_total = 0;
  double criterion = 0.0;
  double target = 0.0;
  bool pass = false;
  bool diverged = false;
};

/// Everything needed to execute one (eps, seed) cell.
struct CellSetup {
  ObjectivePtr objective;
  std::shared_ptr<GradientOracle> oracle;
  PresetKind kind = PresetKind::Smooth;
  PresetInputs inputs;
  PastaConfig config;
};

CellSetup setup_cell(const SweepSpec& spec, double eps);

/// Terminal criterion value of a finished run.
double evaluate_criterion(const RunTrace& trace, const Objective& f, const PastaConfig& cfg);

/// Per-cell stream: Rng::stream(root, splitmix64(seed) ^ bits(eps)).
Rng cell_rng(std::uint64_t root, double eps, std::uint64_t seed);

ResultRow run_cell(const SweepSpec& spec, double eps, std::uint64_t seed, std::uint64_t root);

/// One row per (eps, seed), sorted by (eps, seed); divergent cells are flagged.
std::vector<ResultRow> run_sweep(const SweepSpec& spec, std::uint64_t root);

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_results_csv(std::istream& is);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

/// Least squares of log(calls) against log(1/eps).
ScalingFit fit_exponent(const std::vector<std::pair<double, double>>& points);

struct BudgetEntry {
  std::string preset;
  std::string problem;
  double eps = 0.0;
  double bound = 0.0;
};

std::vector<BudgetEntry> sweep_budgets(const SweepSpec& spec);

/// Plain-text table per (preset, problem): mean calls, budget, pass rate, fitted exponent.
std::string report(const std::vector<ResultRow>& results, const std::vector<BudgetEntry>& budgets);

}  // namespace pasta

#endif
