#ifndef PASTA_PASTA_HPP
#define PASTA_PASTA_HPP

#include "pasta/errors.hpp"
#include "pasta/estimators.hpp"
#include "pasta/oracle.hpp"
#include "pasta/problems.hpp"
#include "pasta/rng.hpp"
#include "pasta/types.hpp"

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace pasta {

enum class EstimatorKind { Minibatch, Page };

enum class StopCriterion {
  /// (1/K) sum_t ||grad f(x_t)||^2 <= eps^2
  MeanSquareGradient,
  /// f(ergodic average) - f* <= eps
  ErgodicGap,
  /// f(x_K) - f* <= eps
  LastIterateGap,
  /// (1/S) sum_s ||grad phi(anchor_s)||^2 <= eps^2
  MoreauStationarity,
};

const char* to_string(EstimatorKind k);
const char* to_string(StopCriterion c);

struct PastaConfig {
  std::string preset = "custom";
  std::size_t S = 1;
  std::size_t K = 1;
  double eta = 0.0;
  /// Anchoring strength; beta = lambda * eta.
  double lambda = 0.0;
  /// Reset probability of the PAGE estimator.
  double p = 1.0;
  /// PAGE correction batch.
  std::size_t page_b = 1;
  BatchRule batch;
  EstimatorKind estimator = EstimatorKind::Minibatch;
  StopCriterion stop = StopCriterion::MeanSquareGradient;
  double eps = 0.0;
  /// Record every n-th step; the final iterate is always recorded.
  std::size_t trace_every = 1;

  double beta() const { return lambda * eta; }
  /// eps^2 for the stationarity criteria, eps for the gap criteria.
  double target() const;
  void validate() const;
};

struct TraceRecord {
  std::size_t epoch = 0;
  std::size_t t = 0;
  double f = 0.0;
  double grad_norm_sq = 0.0;
  double dist_to_anchor0 = 0.0;
  std::size_t batch = 0;
  std::size_t calls_cum = 0;
};

struct TraceSummary {
  std::size_t steps = 0;
  std::size_t total_calls = 0;
  std::size_t resets = 0;
  double mean_grad_norm_sq = 0.0;
  double max_dist_to_anchor0 = 0.0;
  double final_value = 0.0;
  double ergodic_value = 0.0;
};

struct RunTrace {
  std::vector<TraceRecord> records;
  /// Anchor of every epoch: x0, then each epoch's last iterate.
  std::vector<Vec> anchors;
  Vec final_x;
  /// Average of the pre-step iterates over all S K steps.
  Vec ergodic_x;
  TraceSummary summary;
};

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::shared_ptr<const RunTrace> partial)
      : Error(what), trace_(std::move(partial)) {}
  const RunTrace& trace() const { return *trace_; }

 private:
  std::shared_ptr<const RunTrace> trace_;
};

/// out = beta * anchor + (1 - beta) * x - eta * g.
void pasta_update(const Vec& x, const Vec& anchor, const Vec& g, double eta, double beta, Vec& out);

/// Runs S epochs of K steps from the oracle's anchor x0.
RunTrace run(const Objective& f, const GradientOracle& oracle, const PastaConfig& cfg, Rng& rng);

void write_trace_csv(std::ostream& os, const RunTrace& trace);

/// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace pasta

#endif
