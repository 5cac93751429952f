#include "pasta/harness.hpp"

#include "pasta/moreau.hpp"

#include <toml.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace pasta {

std::vector<double> default_eps_grid() { return {0.5, 0.35, 0.25, 0.18}; }

void SweepSpec::validate() const {
  parse_preset(preset);
  if (eps.empty()) throw InputError("sweep needs at least one eps");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0) || !std::isfinite(eps[i])) throw InputError("eps values must be positive");
    for (std::size_t j = 0; j < i; ++j)
      if (eps[i] == eps[j]) throw InputError("eps values must be distinct");
  }
  if (seeds.empty()) throw InputError("sweep needs at least one seed");
  if (!(B_v >= 0.0) || !(b_v >= 0.0)) throw InputError("B_v and b_v must be >= 0");
  if (!(sigma2 > 0.0)) throw InputError("sigma2 must be positive");
  if (trace_every == 0) throw InputError("trace_every must be >= 1");
}

namespace {

double toml_number(const toml::node& n, const std::string& key) {
  if (auto v = n.value<double>()) return *v;
  throw InputError("config key '" + key + "' must be a number");
}

std::vector<double> toml_numbers(const toml::node& n, const std::string& key) {
  std::vector<double> out;
  if (const auto* arr = n.as_array()) {
    for (const auto& e : *arr) out.push_back(toml_number(e, key));
  } else {
    out.push_back(toml_number(n, key));
  }
  return out;
}

}  // namespace

SweepSpec parse_sweep_spec(const std::string& text, SweepSpec s) {
  toml::table tbl;
  try {
    tbl = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "config parse error: " << e.description() << " at line " << e.source().begin.line;
    throw InputError(os.str());
  }
  for (const auto& [k, node] : tbl) {
    const std::string key(k.str());
    if (key == "preset") {
      s.preset = node.value<std::string>().value_or("");
    } else if (key == "problem") {
      s.problem = node.value<std::string>().value_or("");
    } else if (key == "eps") {
      s.eps = toml_numbers(node, key);
    } else if (key == "seeds") {
      s.seeds.clear();
      for (double v : toml_numbers(node, key)) {
        if (v < 0 || v != std::floor(v)) throw InputError("seeds must be nonnegative integers");
        s.seeds.push_back(static_cast<std::uint64_t>(v));
      }
    } else if (key == "seed_count") {
      const double n = toml_number(node, key);
      if (!(n >= 1) || n != std::floor(n)) throw InputError("seed_count must be a positive integer");
      s.seeds.clear();
      for (std::uint64_t i = 1; i <= static_cast<std::uint64_t>(n); ++i) s.seeds.push_back(i);
    } else if (key == "B_v") {
      s.B_v = toml_number(node, key);
    } else if (key == "b_v") {
      s.b_v = toml_number(node, key);
    } else if (key == "sigma2") {
      s.sigma2 = toml_number(node, key);
    } else if (key == "lambda") {
      s.lambda = toml_number(node, key);
    } else if (key == "start") {
      const auto v = toml_numbers(node, key);
      s.start = Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
    } else if (key == "trace_every") {
      const double n = toml_number(node, key);
      if (!(n >= 1) || n != std::floor(n)) throw InputError("trace_every must be a positive integer");
      s.trace_every = static_cast<std::size_t>(n);
    } else if (key == "out") {
      s.out = node.value<std::string>().value_or("");
    } else if (key == "root_seed") {
      // read by the CLI
    } else {
      throw InputError("unknown config key '" + key + "'");
    }
  }
  return s;
}

SweepSpec load_sweep_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_sweep_spec(ss.str());
}

namespace {

double need(const std::optional<double>& v, const char* what, const std::string& preset) {
  if (!v) throw InputError("preset '" + preset + "' needs the problem to declare " + what);
  return *v;
}

}  // namespace

CellSetup setup_cell(const SweepSpec& spec, double eps) {
  CellSetup c;
  ProblemOptions opts;
  opts.eps = eps;
  opts.start = spec.start;
  c.objective = make_problem(spec.problem, opts);
  c.kind = parse_preset(spec.preset);
  const auto& m = c.objective->meta();
  const Vec& x0 = c.objective->start();
  c.oracle = std::make_shared<GaussianBG0Oracle>(c.objective, BG0Params{spec.B_v, spec.b_v, x0});

  PresetInputs& in = c.inputs;
  in.eps = eps;
  in.sigma2 = spec.sigma2;
  in.B_v = spec.B_v;
  in.b_v = spec.b_v;
  in.Delta = m.Delta;
  const std::string& name = spec.preset;
  switch (c.kind) {
    case PresetKind::Smooth:
      in.L = need(m.L, "L", name);
      break;
    case PresetKind::ConvexSmooth:
      in.L = need(m.L, "L", name);
      if (!m.x_star) throw InputError("preset '" + name + "' needs a known minimizer");
      in.R0 = (x0 - *m.x_star).norm();
      break;
    case PresetKind::LipschitzConvex:
      in.G = need(m.G, "G", name);
      if (!m.x_star) throw InputError("preset '" + name + "' needs a known minimizer");
      in.R0 = (x0 - *m.x_star).norm();
      break;
    case PresetKind::Page:
      in.L = need(m.L, "L", name);
      in.Lbar = m.Lbar ? *m.Lbar : gaussian_mss_constant(in.L, spec.B_v);
      break;
    case PresetKind::Pl:
      in.L = need(m.L, "L", name);
      in.mu = need(m.mu_pl, "mu_pl", name);
      break;
    case PresetKind::Star:
      in.L = need(m.L, "L", name);
      in.mu = need(m.mu_star, "mu_star", name);
      break;
    case PresetKind::WeaklyConvex:
      in.rho = m.rho ? *m.rho : need(m.L, "rho", name);
      in.G = need(m.G, "G", name);
      in.lambda = spec.lambda ? *spec.lambda : (in.rho > 0.0 ? 2.0 * in.rho : 1.0);
      break;
  }
  c.config = make_preset(c.kind, in);
  c.config.trace_every = spec.trace_every;
  return c;
}

double evaluate_criterion(const RunTrace& trace, const Objective& f, const PastaConfig& cfg) {
  const auto& m = f.meta();
  switch (cfg.stop) {
    case StopCriterion::MeanSquareGradient:
      return trace.summary.mean_grad_norm_sq;
    case StopCriterion::ErgodicGap:
      if (!m.f_star) throw InputError("gap criterion needs a known optimal value");
      return trace.summary.ergodic_value - *m.f_star;
    case StopCriterion::LastIterateGap:
      if (!m.f_star) throw InputError("gap criterion needs a known optimal value");
      return trace.summary.final_value - *m.f_star;
    case StopCriterion::MoreauStationarity:
      return moreau_stationarity(trace.anchors, f, cfg.lambda).average;
  }
  return NAN;
}

Rng cell_rng(std::uint64_t root, double eps, std::uint64_t seed) {
  return Rng::stream(root, splitmix64(seed) ^ std::bit_cast<std::uint64_t>(eps));
}

ResultRow run_cell(const SweepSpec& spec, double eps, std::uint64_t seed, std::uint64_t root) {
  const CellSetup c = setup_cell(spec, eps);
  ResultRow row;
  row.preset = spec.preset;
  row.problem = spec.problem;
  row.eps = eps;
  row.seed = seed;
  row.target = c.config.target();
  Rng rng = cell_rng(root, eps, seed);
  try {
    const RunTrace tr = run(*c.objective, *c.oracle, c.config, rng);
    row.calls_total = tr.summary.total_calls;
    row.criterion = evaluate_criterion(tr, *c.objective, c.config);
    row.pass = row.criterion <= row.target;
  } catch (const DivergenceError& e) {
    row.diverged = true;
    row.calls_total = e.trace().summary.total_calls;
    row.criterion = NAN;
    row.pass = false;
  }
  return row;
}

std::vector<ResultRow> run_sweep(const SweepSpec& spec, std::uint64_t root) {
  spec.validate();
  std::vector<double> eps = spec.eps;
  std::vector<std::uint64_t> seeds = spec.seeds;
  std::sort(eps.begin(), eps.end());
  std::sort(seeds.begin(), seeds.end());
  std::vector<ResultRow> rows;
  rows.reserve(eps.size() * seeds.size());
  for (double e : eps)
    for (std::uint64_t s : seeds) rows.push_back(run_cell(spec, e, s, root));
  return rows;
}

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << "preset,problem,eps,seed,calls_total,criterion,target,pass\n";
  for (const auto& r : rows)
    os << r.preset << ',' << r.problem << ',' << format_double(r.eps) << ',' << r.seed << ',' << r.calls_total << ','
       << (r.diverged ? std::string("nan") : format_double(r.criterion)) << ',' << format_double(r.target) << ','
       << (r.diverged ? "diverged" : (r.pass ? "1" : "0")) << '\n';
}

std::vector<ResultRow> read_results_csv(std::istream& is) {
  std::vector<ResultRow> rows;
  std::string line;
  if (!std::getline(is, line) || line.rfind("preset,problem,eps,seed", 0) != 0)
    throw InputError("results file lacks the expected header");
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 8) throw InputError("malformed results row at line " + std::to_string(lineno));
    ResultRow r;
    try {
      r.preset = f[0];
      r.problem = f[1];
      r.eps = std::stod(f[2]);
      r.seed = std::stoull(f[3]);
      r.calls_total = std::stoull(f[4]);
      r.diverged = f[7] == "diverged";
      r.criterion = r.diverged ? NAN : std::stod(f[5]);
      r.target = std::stod(f[6]);
      r.pass = f[7] == "1";
    } catch (const std::logic_error&) {
      throw InputError("malformed results row at line " + std::to_string(lineno));
    }
    rows.push_back(r);
  }
  return rows;
}

ScalingFit fit_exponent(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw InputError("fit needs at least two points");
  const double e0 = points.front().first;
  if (std::all_of(points.begin(), points.end(), [&](const auto& p) { return p.first == e0; }))
    throw InputError("fit needs at least two distinct eps values");
  double sx = 0, sy = 0;
  for (const auto& [e, c] : points) {
    if (!(e > 0) || !(c > 0)) throw InputError("fit needs positive eps and calls");
    sx += std::log(1.0 / e);
    sy += std::log(c);
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [e, c] : points) {
    const double dx = std::log(1.0 / e) - mx, dy = std::log(c) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  ScalingFit f;
  f.points = points.size();
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0;
  for (const auto& [e, c] : points) {
    const double r = std::log(c) - (f.intercept + f.slope * std::log(1.0 / e));
    ssr += r * r;
  }
  f.r2 = syy > 0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
  return f;
}

std::vector<BudgetEntry> sweep_budgets(const SweepSpec& spec) {
  std::vector<BudgetEntry> out;
  for (double e : spec.eps) {
    const CellSetup c = setup_cell(spec, e);
    out.push_back({spec.preset, spec.problem, e, budget(c.kind, c.inputs).bound});
  }
  return out;
}

std::string report(const std::vector<ResultRow>& results, const std::vector<BudgetEntry>& budgets) {
  if (results.empty()) throw InputError("report needs at least one result row");
  using Key = std::pair<std::string, std::string>;
  std::map<Key, std::map<double, std::vector<const ResultRow*>>> groups;
  for (const auto& r : results) groups[{r.preset, r.problem}][r.eps].push_back(&r);
  const bool with_budget = !budgets.empty();

  std::ostringstream os;
  os << "# sweep report\n";
  os << "# eps grid, seed counts and tolerances are harness defaults chosen for desk-scale runtimes\n";
  for (const auto& [key, by_eps] : groups) {
    os << "\n## " << key.first << " on " << key.second << "\n";
    os << "eps,cells,diverged,mean_calls," << (with_budget ? "budget," : "") << "mean_criterion,target,pass_rate\n";
    std::vector<std::pair<double, double>> pts;
    for (const auto& [eps, rows] : by_eps) {
      double calls = 0, crit = 0;
      std::size_t pass = 0, div = 0, finite = 0;
      for (const auto* r : rows) {
        calls += static_cast<double>(r->calls_total);
        if (r->diverged) {
          ++div;
        } else {
          crit += r->criterion;
          ++finite;
        }
        if (r->pass) ++pass;
      }
      const double n = static_cast<double>(rows.size());
      const double mean_calls = calls / n;
      os << format_double(eps) << ',' << rows.size() << ',' << div << ',' << format_double(mean_calls) << ',';
      if (with_budget) {
        auto it = std::find_if(budgets.begin(), budgets.end(), [&](const BudgetEntry& b) {
          return b.preset == key.first && b.problem == key.second && b.eps == eps;
        });
        if (it != budgets.end()) os << format_double(it->bound);
        os << ',';
      }
      os << (finite ? format_double(crit / static_cast<double>(finite)) : std::string("nan")) << ','
         << format_double(rows.front()->target) << ',' << format_double(static_cast<double>(pass) / n) << '\n';
      if (mean_calls > 0) pts.emplace_back(eps, mean_calls);
    }
    if (pts.size() >= 2) {
      const ScalingFit f = fit_exponent(pts);
      os << "fitted exponent " << format_double(f.slope) << " (r2 " << format_double(f.r2) << ", " << f.points
         << " points)\n";
    }
  }
  return os.str();
}

}  // namespace pasta
