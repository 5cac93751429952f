#include "pasta/rng.hpp"

namespace pasta {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

Rng Rng::stream(std::uint64_t root, std::uint64_t id) {
  return Rng(splitmix64(root ^ splitmix64(id)));
}

double Rng::normal() { return normal_(engine_); }

double Rng::uniform() { return unit_(engine_); }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * unit_(engine_); }

bool Rng::bernoulli(double p) { return unit_(engine_) < p; }

std::uint64_t Rng::next_u64() { return engine_(); }

void Rng::fill_normal(Vec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal_(engine_);
}

void Rng::fill_uniform(Vec& v, double lo, double hi) {
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = lo + (hi - lo) * unit_(engine_);
}

}  // namespace pasta
