#include "pasta/pasta.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace pasta {

const char* to_string(EstimatorKind k) {
  return k == EstimatorKind::Page ? "page" : "minibatch";
}

const char* to_string(StopCriterion c) {
  switch (c) {
    case StopCriterion::MeanSquareGradient:
      return "mean-square-gradient";
    case StopCriterion::ErgodicGap:
      return "ergodic-gap";
    case StopCriterion::LastIterateGap:
      return "last-iterate-gap";
    case StopCriterion::MoreauStationarity:
      return "moreau-stationarity";
  }
  return "unknown";
}

double PastaConfig::target() const {
  switch (stop) {
    case StopCriterion::MeanSquareGradient:
    case StopCriterion::MoreauStationarity:
      return eps * eps;
    case StopCriterion::ErgodicGap:
    case StopCriterion::LastIterateGap:
      return eps;
  }
  return eps;
}

void PastaConfig::validate() const {
  if (S == 0 || K == 0) throw ConfigError("S and K must be >= 1");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ConfigError("step size must be positive and finite");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be finite and >= 0");
  const double b = beta();
  if (!(b >= 0.0 && b < 1.0)) throw ConfigError("beta = lambda * eta must lie in [0, 1)");
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("reset probability must lie in (0, 1]");
  if (page_b == 0) throw ConfigError("PAGE correction batch must be >= 1");
  if (trace_every == 0) throw ConfigError("trace stride must be >= 1");
  batch.validate();
}

void pasta_update(const Vec& x, const Vec& anchor, const Vec& g, double eta, double beta, Vec& out) {
  if (beta == 0.0)
    out.noalias() = x - eta * g;
  else
    out.noalias() = beta * anchor + (1.0 - beta) * x - eta * g;
}

RunTrace run(const Objective& f, const GradientOracle& oracle, const PastaConfig& cfg, Rng& rng) {
  cfg.validate();
  const std::size_t dim = oracle.dimension();
  if (f.dimension() != dim) throw InputError("objective and oracle dimensions differ");
  const Vec& x0 = oracle.params().x0;

  auto trace = std::make_shared<RunTrace>();
  RunTrace& tr = *trace;
  const std::size_t total_steps = cfg.S * cfg.K;
  tr.records.reserve(total_steps / cfg.trace_every + 2);
  tr.anchors.reserve(cfg.S);

  Vec x = x0;
  Vec anchor = x0;
  Vec g(static_cast<Eigen::Index>(dim));
  Vec grad(static_cast<Eigen::Index>(dim));
  Vec next(static_cast<Eigen::Index>(dim));
  Vec x_sum = Vec::Zero(static_cast<Eigen::Index>(dim));
  PageState page;
  const double beta = cfg.beta();
  std::size_t calls = 0;
  std::size_t step = 0;
  double grad_sq_sum = 0.0;

  for (std::size_t s = 1; s <= cfg.S; ++s) {
    tr.anchors.push_back(anchor);
    for (std::size_t t = 0; t < cfg.K; ++t, ++step) {
      const double fx = f.value(x);
      f.gradient_into(x, grad);
      const double gsq = grad.squaredNorm();
      const double dist = (x - x0).norm();
      grad_sq_sum += gsq;
      x_sum += x;
      tr.summary.max_dist_to_anchor0 = std::max(tr.summary.max_dist_to_anchor0, dist);

      std::size_t batch = 0;
      if (cfg.estimator == EstimatorKind::Minibatch) {
        batch = cfg.batch.batch(t, x, x0);
        oracle.sample_mean_into(x, batch, rng, g);
        calls += batch;
      } else {
        const bool first = !page.initialized;
        const double p_t = first ? 1.0 : cfg.p;
        const PageStepResult r = page_step(
            page, x, oracle, p_t, [&] { return cfg.batch.batch(t, x, x0); }, cfg.page_b, rng);
        g = page.g_prev;
        batch = r.batch;
        calls += r.calls;
        if (r.reset) ++tr.summary.resets;
      }

      if (step % cfg.trace_every == 0) tr.records.push_back({s, t, fx, gsq, dist, batch, calls});

      pasta_update(x, anchor, g, cfg.eta, beta, next);
      if (!next.allFinite()) {
        tr.final_x = x;
        tr.summary.steps = step + 1;
        tr.summary.total_calls = calls;
        throw DivergenceError("iterate became non-finite at epoch " + std::to_string(s) + ", step " +
                                  std::to_string(t),
                              trace);
      }
      x.swap(next);
    }
    anchor = x;
  }

  tr.final_x = x;
  tr.ergodic_x = x_sum / static_cast<double>(total_steps);
  f.gradient_into(x, grad);
  tr.summary.steps = total_steps;
  tr.summary.total_calls = calls;
  tr.summary.mean_grad_norm_sq = grad_sq_sum / static_cast<double>(total_steps);
  tr.summary.final_value = f.value(x);
  tr.summary.ergodic_value = f.value(tr.ergodic_x);
  const double dist = (x - x0).norm();
  tr.summary.max_dist_to_anchor0 = std::max(tr.summary.max_dist_to_anchor0, dist);
  tr.records.push_back({cfg.S, cfg.K, tr.summary.final_value, grad.squaredNorm(), dist, 0, calls});
  return std::move(tr);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& os, const RunTrace& trace) {
  os << "epoch,t,f,grad_norm_sq,dist_to_anchor0,batch,calls_cum\n";
  for (const auto& r : trace.records)
    os << r.epoch << ',' << r.t << ',' << format_double(r.f) << ',' << format_double(r.grad_norm_sq) << ','
       << format_double(r.dist_to_anchor0) << ',' << r.batch << ',' << r.calls_cum << '\n';
  const auto& s = trace.summary;
  os << "summary," << s.steps << ',' << format_double(s.ergodic_value) << ','
     << format_double(s.mean_grad_norm_sq) << ',' << format_double(s.max_dist_to_anchor0) << ',' << s.resets
     << ',' << s.total_calls << '\n';
}

}  // namespace pasta
