#include "pasta/errors.hpp"
#include "pasta/hard_instance.hpp"
#include "pasta/harness.hpp"
#include "pasta/moreau.hpp"
#include "pasta/oracle.hpp"

#include <CLI11.hpp>
#include <toml.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace pasta;

namespace {

enum Exit : int { kOk = 0, kInput = 1, kAllDiverged = 2, kCertification = 3 };

// Sink for --out: a file when a path is given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw InputError("cannot open output '" + path + "'");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

struct SweepFlags {
  std::string config;
  std::optional<std::string> preset, problem;
  std::vector<double> eps;
  std::optional<std::size_t> seed_count;
  std::optional<double> B_v, b_v, sigma2, lambda;
  std::vector<double> start;
  std::optional<std::size_t> trace_every;
};

void add_sweep_flags(CLI::App* cmd, SweepFlags& f) {
  cmd->add_option("--config", f.config, "TOML file whose keys mirror the sweep fields")->check(CLI::ExistingFile);
  cmd->add_option("--preset", f.preset, "smooth, convex-smooth, lipschitz-convex, page, pl, star, weakly-convex");
  cmd->add_option("--problem", f.problem, "problem key, e.g. quadratic-p10-c4");
  cmd->add_option("--eps", f.eps, "accuracy targets");
  cmd->add_option("--seeds", f.seed_count, "number of seeds 1..n");
  cmd->add_option("--B-v", f.B_v, "distance-growing noise coefficient");
  cmd->add_option("--b-v", f.b_v, "constant noise level");
  cmd->add_option("--sigma2", f.sigma2, "variance proxy used by the convex presets");
  cmd->add_option("--lambda", f.lambda, "anchoring strength for weakly-convex");
  cmd->add_option("--start", f.start, "start point (one value broadcasts)");
  cmd->add_option("--trace-every", f.trace_every, "trace record stride");
}

std::optional<std::uint64_t> config_root_seed(const std::string& path) {
  if (path.empty()) return std::nullopt;
  try {
    const toml::table tbl = toml::parse_file(path);
    if (auto v = tbl["root_seed"].value<std::int64_t>()) {
      if (*v < 0) throw InputError("root_seed must be nonnegative");
      return static_cast<std::uint64_t>(*v);
    }
  } catch (const toml::parse_error&) {
    // load_sweep_spec reports the parse error
  }
  return std::nullopt;
}

SweepSpec resolve_spec(const SweepFlags& f) {
  SweepSpec s = f.config.empty() ? SweepSpec{} : load_sweep_spec(f.config);
  if (f.preset) s.preset = *f.preset;
  if (f.problem) s.problem = *f.problem;
  if (!f.eps.empty()) s.eps = f.eps;
  if (f.seed_count) {
    if (*f.seed_count == 0) throw InputError("--seeds must be positive");
    s.seeds.clear();
    for (std::uint64_t i = 1; i <= *f.seed_count; ++i) s.seeds.push_back(i);
  }
  if (f.B_v) s.B_v = *f.B_v;
  if (f.b_v) s.b_v = *f.b_v;
  if (f.sigma2) s.sigma2 = *f.sigma2;
  if (f.lambda) s.lambda = *f.lambda;
  if (!f.start.empty()) s.start = Eigen::Map<const Vec>(f.start.data(), static_cast<Eigen::Index>(f.start.size()));
  if (f.trace_every) {
    if (*f.trace_every == 0) throw InputError("--trace-every must be positive");
    s.trace_every = *f.trace_every;
  }
  s.validate();
  return s;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, const std::string& config) {
  if (flag) return *flag;
  return config_root_seed(config).value_or(1);
}

std::vector<ResultRow> read_results(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open results '" + path + "'");
  return read_results_csv(in);
}

// Mean calls per eps over non-diverged rows.
std::vector<std::pair<double, double>> mean_calls(const std::vector<ResultRow>& rows) {
  std::map<double, std::pair<double, std::size_t>> acc;
  for (const auto& r : rows) {
    if (r.diverged) continue;
    auto& a = acc[r.eps];
    a.first += static_cast<double>(r.calls_total);
    ++a.second;
  }
  std::vector<std::pair<double, double>> pts;
  for (const auto& [e, a] : acc) pts.emplace_back(e, a.first / static_cast<double>(a.second));
  return pts;
}

int cmd_run(const SweepFlags& f, std::optional<std::uint64_t> seed_flag, std::uint64_t cell, const std::string& out) {
  const SweepSpec s = resolve_spec(f);
  if (s.eps.size() != 1 && f.eps.size() != 1) throw InputError("run takes exactly one --eps");
  const double eps = f.eps.empty() ? s.eps.front() : f.eps.front();
  const std::uint64_t root = resolve_seed(seed_flag, f.config);
  const CellSetup c = setup_cell(s, eps);
  Rng rng = cell_rng(root, eps, cell);
  Output o(out);
  try {
    const RunTrace tr = run(*c.objective, *c.oracle, c.config, rng);
    write_trace_csv(o.stream(), tr);
    const double crit = evaluate_criterion(tr, *c.objective, c.config);
    std::cerr << "calls " << tr.summary.total_calls << " criterion " << format_double(crit) << " target "
              << format_double(c.config.target()) << (crit <= c.config.target() ? " pass" : " fail") << '\n';
    return kOk;
  } catch (const DivergenceError& e) {
    write_trace_csv(o.stream(), e.trace());
    std::cerr << "diverged: " << e.what() << '\n';
    return kAllDiverged;
  }
}

int cmd_sweep(const SweepFlags& f, std::optional<std::uint64_t> seed_flag, const std::string& out) {
  SweepSpec s = resolve_spec(f);
  if (!out.empty()) s.out = out;
  const std::uint64_t root = resolve_seed(seed_flag, f.config);
  const auto rows = run_sweep(s, root);
  Output o(s.out);
  write_results_csv(o.stream(), rows);
  std::size_t diverged = 0;
  for (const auto& r : rows) diverged += r.diverged ? 1 : 0;
  if (diverged) std::cerr << diverged << " of " << rows.size() << " cells diverged\n";
  return diverged == rows.size() ? kAllDiverged : kOk;
}

struct HardFlags {
  double eps = 0.0, Delta = 1.0, L = 1.0, B_v = 0.0, b_v = 0.0;
  bool mss = false;
  std::size_t samples = 10000;
};

int cmd_hard(const HardFlags& h, std::optional<std::uint64_t> seed_flag, const std::string& out) {
  HardInstanceParams p;
  p.eps = h.eps;
  p.Delta = h.Delta;
  p.L = h.L;
  p.B_v = h.B_v;
  p.b_v = h.b_v;
  p.mss = h.mss;
  const HardInstance inst(p);
  const CertificateReport rep = certify_instance(inst, h.samples, seed_flag.value_or(1));
  Output o(out);
  std::ostream& os = o.stream();
  os << "# eps=" << format_double(inst.eps()) << " Delta=" << format_double(inst.Delta())
     << " L=" << format_double(inst.L()) << " T=" << inst.T() << " p=" << format_double(inst.p_mask())
     << " D=" << format_double(inst.D()) << '\n';
  os << "certificate,observed,limit,ok\n";
  for (const auto& c : rep.items)
    os << c.name << ',' << format_double(c.observed) << ',' << format_double(c.limit) << ',' << (c.ok ? 1 : 0)
       << '\n';
  if (!rep.ok()) {
    std::cerr << rep.describe() << '\n';
    return kCertification;
  }
  return kOk;
}

struct ProxFlags {
  std::string problem = "weakly-convex-p1";
  double lambda = 0.0;
  std::size_t points = 20;
  std::optional<double> tol;
};

int cmd_prox_check(const ProxFlags& pf, std::optional<std::uint64_t> seed_flag, const std::string& out) {
  const ObjectivePtr f = make_problem(pf.problem);
  const CertificationBox box = f->meta().box;
  Rng rng(seed_flag.value_or(1));
  Output o(out);
  std::ostream& os = o.stream();
  os << "point,residual,tol,envelope_grad_norm,ok\n";
  bool all_ok = true;
  for (std::size_t k = 0; k < pf.points; ++k) {
    Vec x(static_cast<Eigen::Index>(f->dimension()));
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.uniform(box.lo, box.hi);
    const double tol = pf.tol.value_or(default_prox_tol(x));
    bool ok = true;
    double residual = NAN, gnorm = NAN;
    try {
      const ProxResult r = prox(*f, pf.lambda, x, tol);
      residual = r.inner_residual;
      gnorm = (pf.lambda * (x - r.xhat)).norm();
      ok = residual <= tol;
    } catch (const NonConvergenceError& e) {
      residual = e.best_residual();
      ok = false;
    }
    all_ok = all_ok && ok;
    os << k << ',' << format_double(residual) << ',' << format_double(tol) << ',' << format_double(gnorm) << ','
       << (ok ? 1 : 0) << '\n';
  }
  return all_ok ? kOk : kCertification;
}

struct VarianceFlags {
  std::string problem = "quadratic-p10-c4";
  double B_v = 1.0, b_v = 1.0;
  std::size_t states = 10, samples = 100000;
  double radius = 3.0;
};

int cmd_variance_check(const VarianceFlags& v, std::optional<std::uint64_t> seed_flag, const std::string& out) {
  const ObjectivePtr f = make_problem(v.problem);
  GaussianBG0Oracle oracle(f, BG0Params{v.B_v, v.b_v, f->start()});
  const std::uint64_t root = seed_flag.value_or(1);
  Rng pick = Rng::stream(root, 0);
  Output o(out);
  std::ostream& os = o.stream();
  os << "state,distance,empirical_var,bound,mean_deviation,ok\n";
  bool all_ok = true;
  for (std::size_t k = 0; k < v.states; ++k) {
    Vec x = f->start();
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] += pick.uniform(-v.radius, v.radius);
    Rng rng = Rng::stream(root, k + 1);
    const VarianceReport r = verify_variance_contract(oracle, x, v.samples, rng);
    all_ok = all_ok && r.ok;
    os << k << ',' << format_double((x - f->start()).norm()) << ',' << format_double(r.empirical_var) << ','
       << format_double(r.bound) << ',' << format_double(r.mean_deviation) << ',' << (r.ok ? 1 : 0) << '\n';
  }
  return all_ok ? kOk : kCertification;
}

int cmd_fit(const std::string& in, const std::string& out) {
  const ScalingFit fit = fit_exponent(mean_calls(read_results(in)));
  Output o(out);
  o.stream() << "slope,intercept,r2,points\n"
             << format_double(fit.slope) << ',' << format_double(fit.intercept) << ',' << format_double(fit.r2)
             << ',' << fit.points << '\n';
  return kOk;
}

int cmd_report(const std::string& in, const SweepFlags& f, const std::string& out) {
  const auto rows = read_results(in);
  std::vector<BudgetEntry> budgets;
  if (!f.config.empty() || f.preset || f.problem) {
    SweepSpec s = resolve_spec(f);
    std::vector<double> eps;
    for (const auto& r : rows)
      if (r.preset == s.preset && r.problem == s.problem && std::find(eps.begin(), eps.end(), r.eps) == eps.end())
        eps.push_back(r.eps);
    if (!eps.empty()) {
      s.eps = eps;
      budgets = sweep_budgets(s);
    }
  }
  Output o(out);
  o.stream() << report(rows, budgets);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PASTA optimizer, oracle checks and sweeps"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::string out;
  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "root seed");
    cmd->add_option("--out", out, "output path (stdout when omitted)");
  };

  SweepFlags run_flags, sweep_flags, report_flags;
  std::uint64_t cell = 1;
  auto* run_cmd = app.add_subcommand("run", "one run; writes the trace CSV");
  add_sweep_flags(run_cmd, run_flags);
  run_cmd->add_option("--cell", cell, "cell seed, as in a sweep row");
  common(run_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep", "grid over eps and seeds; writes the results CSV");
  add_sweep_flags(sweep_cmd, sweep_flags);
  common(sweep_cmd);

  HardFlags hard;
  auto* hard_cmd = app.add_subcommand("hard", "build the zero-chain instance and certify it");
  hard_cmd->add_option("--eps", hard.eps, "accuracy")->required();
  hard_cmd->add_option("--delta", hard.Delta, "initial gap");
  hard_cmd->add_option("--L", hard.L, "smoothness, or mean-square constant with --mss");
  hard_cmd->add_option("--B-v", hard.B_v);
  hard_cmd->add_option("--b-v", hard.b_v);
  hard_cmd->add_flag("--mss", hard.mss, "derive L from the mean-square constant");
  hard_cmd->add_option("--samples", hard.samples, "certificate sample count");
  common(hard_cmd);

  ProxFlags pf;
  auto* prox_cmd = app.add_subcommand("prox-check", "prox residuals at random points");
  prox_cmd->add_option("--problem", pf.problem);
  prox_cmd->add_option("--lambda", pf.lambda)->required();
  prox_cmd->add_option("--points", pf.points);
  prox_cmd->add_option("--tol", pf.tol);
  common(prox_cmd);

  VarianceFlags vf;
  auto* var_cmd = app.add_subcommand("variance-check", "Monte-Carlo check of the oracle variance envelope");
  var_cmd->add_option("--problem", vf.problem);
  var_cmd->add_option("--B-v", vf.B_v);
  var_cmd->add_option("--b-v", vf.b_v);
  var_cmd->add_option("--states", vf.states);
  var_cmd->add_option("--samples", vf.samples);
  var_cmd->add_option("--radius", vf.radius, "states drawn uniformly in a box around the anchor");
  common(var_cmd);

  std::string fit_in;
  auto* fit_cmd = app.add_subcommand("fit", "complexity exponent from a results CSV");
  fit_cmd->add_option("--in", fit_in)->required()->check(CLI::ExistingFile);
  common(fit_cmd);

  std::string report_in;
  auto* report_cmd = app.add_subcommand("report", "summary table from a results CSV");
  report_cmd->add_option("--in", report_in)->required()->check(CLI::ExistingFile);
  add_sweep_flags(report_cmd, report_flags);
  common(report_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*run_cmd) return cmd_run(run_flags, seed, cell, out);
    if (*sweep_cmd) return cmd_sweep(sweep_flags, seed, out);
    if (*hard_cmd) return cmd_hard(hard, seed, out);
    if (*prox_cmd) return cmd_prox_check(pf, seed, out);
    if (*var_cmd) return cmd_variance_check(vf, seed, out);
    if (*fit_cmd) return cmd_fit(fit_in, out);
    if (*report_cmd) return cmd_report(report_in, report_flags, out);
  } catch (const CertificationError& e) {
    std::cerr << "certification failed: " << e.what() << '\n';
    return kCertification;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  }
  return kOk;
}
