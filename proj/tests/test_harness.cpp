#include "pasta/errors.hpp"
#include "pasta/harness.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace pasta;

namespace {

SweepSpec small_spec() {
  SweepSpec s;
  s.preset = "smooth";
  s.problem = "quadratic-p3-c2";
  s.eps = {0.9, 0.7};
  s.seeds = {1, 2, 3};
  s.B_v = 0.5;
  s.b_v = 0.5;
  return s;
}

std::string csv(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  write_results_csv(os, rows);
  return os.str();
}

}  // namespace

TEST_CASE("sweep cardinality, order and determinism") {
  const SweepSpec s = small_spec();
  const auto rows = run_sweep(s, 11);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].eps == 0.7);
  CHECK(rows[0].seed == 1);
  CHECK(rows[5].eps == 0.9);
  CHECK(rows[5].seed == 3);
  CHECK(csv(rows) == csv(run_sweep(s, 11)));
  CHECK(csv(rows) != csv(run_sweep(s, 12)));
  for (const auto& r : rows) CHECK(r.target == doctest::Approx(r.eps * r.eps));
}

TEST_CASE("cells are order independent") {
  SweepSpec a = small_spec(), b = small_spec();
  b.eps = {0.7, 0.9};
  b.seeds = {3, 1, 2};
  CHECK(csv(run_sweep(a, 5)) == csv(run_sweep(b, 5)));
  const ResultRow one = run_cell(a, 0.9, 2, 5);
  CHECK(csv({one}) == csv({run_sweep(a, 5)[4]}));
}

TEST_CASE("results csv round trip") {
  std::vector<ResultRow> rows = run_sweep(small_spec(), 3);
  rows[1].diverged = true;
  rows[1].pass = false;
  const std::string text = csv(rows);
  CHECK(text.rfind("preset,problem,eps,seed,calls_total,criterion,target,pass\n", 0) == 0);
  std::istringstream is(text);
  const auto back = read_results_csv(is);
  CHECK(csv(back) == text);
  CHECK(back[1].diverged);
  CHECK(std::isnan(back[1].criterion));

  std::istringstream bad("eps,seed\n");
  CHECK_THROWS_AS(read_results_csv(bad), InputError);
  std::istringstream torn("preset,problem,eps,seed,calls_total,criterion,target,pass\nsmooth,q,0.5\n");
  CHECK_THROWS_AS(read_results_csv(torn), InputError);
}

TEST_CASE("fit recovers planted power laws") {
  for (double k : {2.0, 4.0, 6.0}) {
    std::vector<std::pair<double, double>> pts;
    for (double e : default_eps_grid()) pts.emplace_back(e, 3.7 * std::pow(e, -k));
    const ScalingFit f = fit_exponent(pts);
    CHECK(f.slope == doctest::Approx(k).epsilon(1e-12));
    CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::exp(f.intercept) == doctest::Approx(3.7).epsilon(1e-10));
  }
  CHECK_THROWS_AS(fit_exponent({{0.5, 10.0}}), InputError);
  CHECK_THROWS_AS(fit_exponent({{0.5, 10.0}, {0.5, 12.0}}), InputError);
}

TEST_CASE("report") {
  SweepSpec s = small_spec();
  s.B_v = 0.0;
  s.b_v = 0.0;
  const auto rows = run_sweep(s, 1);
  const std::string with = report(rows, sweep_budgets(s));
  CHECK(with.find("eps,cells,diverged,mean_calls,budget,mean_criterion,target,pass_rate") != std::string::npos);
  CHECK(with.find("harness defaults") != std::string::npos);
  CHECK(with.find(",1\n") != std::string::npos);
  CHECK(with.find("fitted exponent") != std::string::npos);
  const std::string without = report(rows, {});
  CHECK(without.find("budget") == std::string::npos);
  CHECK_THROWS_AS(report({}, {}), InputError);
}

TEST_CASE("lipschitz-convex runs stay within their budget") {
  SweepSpec s;
  s.preset = "lipschitz-convex";
  s.problem = "abs-p1";
  s.eps = {0.5};
  s.seeds = {1, 2, 3, 4, 5};
  s.B_v = 0.5;
  s.b_v = 0.5;
  const auto rows = run_sweep(s, 9);
  const double bound = sweep_budgets(s)[0].bound;
  double mean = 0.0;
  for (const auto& r : rows) mean += static_cast<double>(r.calls_total) / rows.size();
  CHECK(mean <= bound);
}

TEST_CASE("budget consistency with noiseless oracles") {
  struct Case {
    const char* preset;
    const char* problem;
    double eps;
    bool exact;
  };
  const Case cases[] = {
      {"smooth", "quadratic-p3-c2", 0.5, false},   {"convex-smooth", "quadratic-p3-c2", 0.5, true},
      {"lipschitz-convex", "abs-p2", 0.5, true},   {"page", "quadratic-p3-c2", 0.5, false},
      {"pl", "pl-p2", 0.3, true},                  {"star", "star-p2", 0.3, true},
      {"weakly-convex", "weakly-convex-p1-r1.5", 4.0, false},
  };
  for (const Case& c : cases) {
    CAPTURE(c.preset);
    SweepSpec s;
    s.preset = c.preset;
    s.problem = c.problem;
    s.eps = {c.eps};
    s.seeds = {1};
    if (std::string(c.preset) == "weakly-convex") s.start = Vec::Constant(1, 1.2);
    const ResultRow r = run_cell(s, c.eps, 1, 1);
    const CellSetup cell = setup_cell(s, c.eps);
    const BudgetReport b = budget(cell.kind, cell.inputs);
    CHECK(static_cast<double>(r.calls_total) == b.deterministic_calls);
    if (c.exact) CHECK(b.bound == b.deterministic_calls);
    else CHECK(b.bound >= b.deterministic_calls);
  }
}

TEST_CASE("toml config") {
  const SweepSpec s = parse_sweep_spec(R"(
preset = "pl"
problem = "pl-p2"
eps = [0.5, 0.3]
seed_count = 4
B_v = 0.2
b_v = 0.1
start = [1.0, -1.0]
trace_every = 10
root_seed = 7
)");
  CHECK(s.preset == "pl");
  CHECK(s.eps == std::vector<double>{0.5, 0.3});
  CHECK(s.seeds.size() == 4);
  CHECK(s.B_v == 0.2);
  REQUIRE(s.start);
  CHECK(s.start->size() == 2);
  CHECK(s.trace_every == 10);
  CHECK(parse_sweep_spec("eps = 0.25").eps == std::vector<double>{0.25});

  CHECK_THROWS_AS(parse_sweep_spec("bogus = 1"), InputError);
  CHECK_THROWS_AS(parse_sweep_spec("eps = \"x\""), InputError);
  CHECK_THROWS_AS(parse_sweep_spec("eps = [0.5,"), InputError);
  CHECK_THROWS_AS(load_sweep_spec("/nonexistent/sweep.toml"), InputError);

  SweepSpec bad;
  bad.eps = {0.5, 0.5};
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = SweepSpec{};
  bad.preset = "nope";
  CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("setup derives preset inputs from problem metadata") {
  SweepSpec s;
  s.preset = "convex-smooth";
  s.problem = "quadratic-p10-c4";
  const CellSetup c = setup_cell(s, 0.5);
  CHECK(c.inputs.R0 == doctest::Approx(std::sqrt(10.0)));
  CHECK(c.inputs.L == 4.0);
  s.preset = "pl";
  s.problem = "abs-p1";
  CHECK_THROWS_AS(setup_cell(s, 0.5), InputError);
  s.preset = "weakly-convex";
  s.problem = "weakly-convex-p1-r1.5";
  const CellSetup w = setup_cell(s, 1.0);
  CHECK(w.inputs.lambda == 4.0);
  CHECK(w.inputs.G == 3.0);
}
