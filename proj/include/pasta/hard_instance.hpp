#ifndef PASTA_HARD_INSTANCE_HPP
#define PASTA_HARD_INSTANCE_HPP

#include "pasta/problems.hpp"
#include "pasta/rng.hpp"
#include "pasta/types.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace pasta {

struct ChainConstants {
  static constexpr double Delta0 = 12.0;
  static constexpr double ell1 = 152.0;
  static constexpr double gamma_inf = 23.0;
  static constexpr double varsigma = 23.0;
  static constexpr double ellbar1 = 328.0;
};

double psi(double t);
double psi_prime(double t);
/// sqrt(e) * integral_{-inf}^t exp(-s^2/2) ds.
double phi_cap(double t);
double phi_cap_prime(double t);

double fbar(const Vec& y);
void grad_fbar_into(const Vec& y, Vec& out);
Vec grad_fbar(const Vec& y);

/// Largest 1-based index i with |y_i| > alpha, or 0.
std::size_t prog(const Vec& y, double alpha);

struct HardInstanceParams {
  double eps = 0.0;
  double Delta = 0.0;
  /// Smoothness L, or the mean-square constant Lbar when mss is set.
  double L = 0.0;
  double B_v = 0.0;
  double b_v = 0.0;
  /// Derive L = (ell1/ellbar1) Lbar sqrt(p_mask) from the given Lbar.
  bool mss = false;
};

class HardInstance {
 public:
  explicit HardInstance(const HardInstanceParams& params);

  /// Largest admissible eps: sqrt(L Delta / (1536 ell1)).
  static double eps_cap(double L, double Delta);

  double eps() const { return eps_; }
  double Delta() const { return Delta_; }
  double L() const { return L_; }
  double Lbar() const { return Lbar_; }
  double B_v() const { return B_v_; }
  double b_v() const { return b_v_; }
  double D() const { return D_; }
  double lambda_scale() const { return lambda_; }
  std::size_t T() const { return T_; }
  double p_mask() const { return p_; }
  double shift() const { return 12.0 * static_cast<double>(T_); }

  double f_scaled(const Vec& y) const;
  void grad_f_scaled_into(const Vec& y, Vec& out) const;

  struct Travel {
    double value;
    double derivative;
  };
  Travel travel_f0(double u) const;

  struct Activation {
    double value;
    double d1;
    double d2;
  };
  Activation activation(double u) const;

  /// Composite F(u, y) on R^{1+T}: z = (u, y).
  double composite_value(const Vec& z) const;
  void composite_grad_into(const Vec& z, Vec& out) const;

  /// Stochastic gradient of f_scaled: coordinates past prog_{1/4}(y/lambda)
  /// are multiplied by w/p with one shared w ~ Bernoulli(p).
  void chain_oracle_into(const Vec& y, Rng& rng, Vec& out) const;

  /// -Delta/2 - 4 eps^2/L.
  double travel_inf() const;

 private:
  double eps_, Delta_, L_, Lbar_, B_v_, b_v_;
  double D_, lambda_;
  std::size_t T_;
  double p_;
};

double mask_probability(const HardInstance& inst);
double mask_probability(double eps, double Delta, double B_v, double b_v);

/// The composite as an Objective on R^{1+T}, started at the origin.
ObjectivePtr make_hard_objective(const HardInstance& inst);

struct CertificateReport {
  std::vector<Certificate> items;
  bool ok() const;
  std::string describe() const;
};

/// Sampled checks of smoothness, value range, gradient floor and the
/// zero-chain progress property.
CertificateReport certify_instance(const HardInstance& inst, std::size_t n_samples, std::uint64_t seed);

}  // namespace pasta

#endif
