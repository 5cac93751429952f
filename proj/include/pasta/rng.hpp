#ifndef PASTA_RNG_HPP
#define PASTA_RNG_HPP

#include "pasta/types.hpp"

#include <cstdint>
#include <random>

namespace pasta {

std::uint64_t splitmix64(std::uint64_t x);

/// Seeded generator handed explicitly to every stochastic operation.
///
/// Streams: `Rng::stream(root, id)` seeds a fresh mt19937_64 with
/// splitmix64(root ^ splitmix64(id)). Sweeps derive one stream per cell from
/// the root seed and the cell's (eps index, seed) pair, so cells never share
/// draws and a replay with the same root reproduces every draw.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  static Rng stream(std::uint64_t root, std::uint64_t id);

  double normal();
  double uniform();
  double uniform(double lo, double hi);
  bool bernoulli(double p);
  std::uint64_t next_u64();

  /// Overwrites every entry of `v` with an independent standard normal.
  void fill_normal(Vec& v);
  void fill_uniform(Vec& v, double lo, double hi);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

}  // namespace pasta

#endif
