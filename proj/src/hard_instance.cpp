#include "pasta/hard_instance.hpp"

#include "pasta/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace pasta {

namespace {

const double kSqrtE = std::sqrt(std::numbers::e);

}  // namespace

double psi(double t) {
  if (t <= 0.5) return 0.0;
  const double s = 2.0 * t - 1.0;
  return std::exp(1.0 - 1.0 / (s * s));
}

double psi_prime(double t) {
  if (t <= 0.5) return 0.0;
  const double s = 2.0 * t - 1.0;
  return psi(t) * 4.0 / (s * s * s);
}

double phi_cap(double t) {
  return kSqrtE * std::sqrt(std::numbers::pi / 2.0) * std::erfc(-t / std::numbers::sqrt2);
}

double phi_cap_prime(double t) { return kSqrtE * std::exp(-0.5 * t * t); }

double fbar(const Vec& y) {
  const Eigen::Index T = y.size();
  if (T < 1) throw InputError("chain length must be >= 1");
  double v = -psi(1.0) * phi_cap(y[0]);
  for (Eigen::Index i = 1; i < T; ++i)
    v += psi(-y[i - 1]) * phi_cap(-y[i]) - psi(y[i - 1]) * phi_cap(y[i]);
  return v;
}

void grad_fbar_into(const Vec& y, Vec& out) {
  const Eigen::Index T = y.size();
  if (T < 1) throw InputError("chain length must be >= 1");
  out.resize(T);
  out[0] = -psi(1.0) * phi_cap_prime(y[0]);
  for (Eigen::Index j = 1; j < T; ++j)
    out[j] = -psi(-y[j - 1]) * phi_cap_prime(-y[j]) - psi(y[j - 1]) * phi_cap_prime(y[j]);
  for (Eigen::Index j = 0; j + 1 < T; ++j)
    out[j] += -psi_prime(-y[j]) * phi_cap(-y[j + 1]) - psi_prime(y[j]) * phi_cap(y[j + 1]);
}

Vec grad_fbar(const Vec& y) {
  Vec g;
  grad_fbar_into(y, g);
  return g;
}

std::size_t prog(const Vec& y, double alpha) {
  if (!(alpha >= 0.0)) throw InputError("progress threshold must be >= 0");
  for (Eigen::Index i = y.size(); i > 0; --i)
    if (std::abs(y[i - 1]) > alpha) return static_cast<std::size_t>(i);
  return 0;
}

double mask_probability(double eps, double Delta, double B_v, double b_v) {
  const double c = ChainConstants::varsigma;
  const double num = 256.0 * c * c * std::pow(eps, 4);
  return num / (B_v * B_v * Delta * Delta + 64.0 * b_v * b_v * eps * eps + num);
}

double mask_probability(const HardInstance& inst) { return inst.p_mask(); }

double HardInstance::eps_cap(double L, double Delta) {
  return std::sqrt(L * Delta / (1536.0 * ChainConstants::ell1));
}

HardInstance::HardInstance(const HardInstanceParams& prm)
    : eps_(prm.eps), Delta_(prm.Delta), B_v_(prm.B_v), b_v_(prm.b_v) {
  if (!(eps_ > 0) || !(Delta_ > 0) || !(prm.L > 0) || !std::isfinite(eps_) || !std::isfinite(Delta_) ||
      !std::isfinite(prm.L))
    throw InputError("hard instance needs positive finite eps, Delta, L");
  if (!(B_v_ >= 0) || !(b_v_ >= 0)) throw InputError("hard instance needs B_v, b_v >= 0");
  p_ = mask_probability(eps_, Delta_, B_v_, b_v_);
  if (prm.mss) {
    Lbar_ = prm.L;
    L_ = ChainConstants::ell1 / ChainConstants::ellbar1 * Lbar_ * std::sqrt(p_);
  } else {
    L_ = prm.L;
    Lbar_ = kInf;
  }
  const double cap = eps_cap(L_, Delta_);
  if (eps_ > cap * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "eps = " << eps_ << " exceeds the validity cap " << cap;
    throw InputError(os.str());
  }
  D_ = Delta_ / (4.0 * eps_);
  lambda_ = 4.0 * ChainConstants::ell1 * eps_ / L_;
  const double t = guarded_floor(L_ * Delta_ / (768.0 * ChainConstants::ell1 * eps_ * eps_));
  if (t < 2.0) throw InputError("chain length T must be >= 2");
  T_ = static_cast<std::size_t>(t);
  if (!(p_ > 0.0 && p_ <= 1.0)) throw InputError("mask probability outside (0, 1]");
}

double HardInstance::f_scaled(const Vec& y) const {
  const double scale = L_ * lambda_ * lambda_ / (2.0 * ChainConstants::ell1);
  return scale * (fbar(y / lambda_) - shift());
}

void HardInstance::grad_f_scaled_into(const Vec& y, Vec& out) const {
  grad_fbar_into(y / lambda_, out);
  out *= 2.0 * eps_;
}

HardInstance::Travel HardInstance::travel_f0(double u) const {
  const double flat = D_ + 4.0 * eps_ / L_;
  if (u <= D_) return {-2.0 * eps_ * u, -2.0 * eps_};
  const double w = std::min(u, flat) - D_;
  const double v = -2.0 * eps_ * D_ - 2.0 * eps_ * w + 0.25 * L_ * w * w;
  if (u >= flat) return {v, 0.0};
  return {v, -2.0 * eps_ + 0.5 * L_ * w};
}

double HardInstance::travel_inf() const { return -Delta_ / 2.0 - 4.0 * eps_ * eps_ / L_; }

HardInstance::Activation HardInstance::activation(double u) const {
  const double t = 8.0 * eps_ * u / Delta_ - 1.0;
  if (t <= 0.0) return {0.0, 0.0, 0.0};
  if (t >= 1.0) return {1.0, 0.0, 0.0};
  const double k = 8.0 * eps_ / Delta_;
  const double t2 = t * t;
  const double v = t2 * t * (10.0 - 15.0 * t + 6.0 * t2);
  const double d1 = 30.0 * t2 * (1.0 - 2.0 * t + t2) * k;
  const double d2 = 60.0 * t * (1.0 - 3.0 * t + 2.0 * t2) * k * k;
  return {v, d1, d2};
}

double HardInstance::composite_value(const Vec& z) const {
  if (static_cast<std::size_t>(z.size()) != T_ + 1) throw InputError("composite point dimension mismatch");
  const Activation a = activation(z[0]);
  const double f0 = travel_f0(z[0]).value;
  if (a.value == 0.0) return f0;
  return f0 + a.value * f_scaled(z.tail(static_cast<Eigen::Index>(T_)));
}

void HardInstance::composite_grad_into(const Vec& z, Vec& out) const {
  if (static_cast<std::size_t>(z.size()) != T_ + 1) throw InputError("composite point dimension mismatch");
  const Eigen::Index T = static_cast<Eigen::Index>(T_);
  const Vec y = z.tail(T);
  const Activation a = activation(z[0]);
  Vec gy;
  grad_f_scaled_into(y, gy);
  out.resize(T + 1);
  out[0] = travel_f0(z[0]).derivative + a.d1 * f_scaled(y);
  out.tail(T) = a.value * gy;
}

void HardInstance::chain_oracle_into(const Vec& y, Rng& rng, Vec& out) const {
  const Vec x = y / lambda_;
  grad_fbar_into(x, out);
  if (p_ < 1.0) {
    const std::size_t k = prog(x, 0.25);
    const double w = rng.bernoulli(p_) ? 1.0 / p_ : 0.0;
    for (Eigen::Index i = static_cast<Eigen::Index>(k); i < out.size(); ++i) out[i] *= w;
  }
  out *= 2.0 * eps_;
}

namespace {

class HardObjective final : public Objective {
 public:
  explicit HardObjective(const HardInstance& inst)
      : Objective("hard-T" + std::to_string(inst.T()), inst.T() + 1,
                  Vec::Zero(static_cast<Eigen::Index>(inst.T() + 1))),
        inst_(inst) {
    meta_.L = inst.L();
    meta_.rho = inst.L();
    meta_.Delta = inst.Delta();
  }

  double value(const Vec& x) const override { return inst_.composite_value(x); }
  void gradient_into(const Vec& x, Vec& out) const override { inst_.composite_grad_into(x, out); }
  bool smooth() const override { return true; }

 protected:
  std::shared_ptr<Objective> clone() const override { return std::make_shared<HardObjective>(*this); }

 private:
  HardInstance inst_;
};

// Chain coordinates: a third exactly zero, a third small, a third large.
Vec chain_point(std::size_t T, Rng& rng) {
  Vec x(static_cast<Eigen::Index>(T));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double c = rng.uniform();
    if (c < 1.0 / 3.0)
      x[i] = 0.0;
    else if (c < 2.0 / 3.0)
      x[i] = rng.uniform(-0.5, 0.5);
    else
      x[i] = rng.uniform(-3.0, 3.0);
  }
  return x;
}

}  // namespace

ObjectivePtr make_hard_objective(const HardInstance& inst) { return std::make_shared<HardObjective>(inst); }

bool CertificateReport::ok() const {
  return std::all_of(items.begin(), items.end(), [](const Certificate& c) { return c.ok; });
}

std::string CertificateReport::describe() const {
  std::ostringstream os;
  os.precision(10);
  os << "certificate,observed,limit,ok\n";
  for (const auto& c : items) os << c.name << ',' << c.observed << ',' << c.limit << ',' << (c.ok ? 1 : 0) << '\n';
  return os.str();
}

CertificateReport certify_instance(const HardInstance& inst, std::size_t n, std::uint64_t seed) {
  if (n < 1000) throw InputError("certification needs at least 1000 samples");
  Rng rng(seed);
  const std::size_t T = inst.T();
  const Eigen::Index Ti = static_cast<Eigen::Index>(T);
  const double lam = inst.lambda_scale();
  const double D = inst.D();
  const double eps = inst.eps();
  CertificateReport rep;

  // smoothness of the composite; half the pairs are local, half sit in the activation band
  {
    Certificate c{"composite-smoothness", 0.0, inst.L() * 1.01, true};
    Vec z1(Ti + 1), z2(Ti + 1), g1, g2;
    for (std::size_t k = 0; k < n; ++k) {
      const bool band = k % 2 == 1;
      z1[0] = band ? rng.uniform(D / 2.0, D) : rng.uniform(-0.25 * D, 1.25 * D + 4.0 * eps / inst.L());
      z1.tail(Ti) = lam * chain_point(T, rng);
      if (k % 4 < 2) {
        Vec d(Ti + 1);
        rng.fill_normal(d);
        d[0] *= D * 1e-3;
        d.tail(Ti) *= lam * 1e-3;
        z2 = z1 + d;
      } else {
        z2[0] = band ? rng.uniform(D / 2.0, D) : rng.uniform(-0.25 * D, 1.25 * D);
        z2.tail(Ti) = lam * chain_point(T, rng);
      }
      const double dist = (z1 - z2).norm();
      if (dist == 0.0) continue;
      inst.composite_grad_into(z1, g1);
      inst.composite_grad_into(z2, g2);
      c.observed = std::max(c.observed, (g1 - g2).norm() / dist);
    }
    c.ok = c.observed <= c.limit;
    rep.items.push_back(c);
  }

  // chain range: |fbar| <= 12 T and -Delta/4 <= f_scaled <= 0
  {
    Certificate tv{"fbar-total-variation", 0.0, 12.0 * static_cast<double>(T), true};
    Certificate lo{"f-scaled-lower", -kInf, 0.0, true};
    Certificate hi{"f-scaled-upper", -kInf, 0.0, true};
    Certificate inf{"fbar-grad-inf-norm", 0.0, ChainConstants::gamma_inf, true};
    Vec g;
    for (std::size_t k = 0; k < n; ++k) {
      const Vec x = chain_point(T, rng);
      tv.observed = std::max(tv.observed, std::abs(fbar(x)));
      const double fs = inst.f_scaled(lam * x);
      lo.observed = std::max(lo.observed, -inst.Delta() / 4.0 - fs);
      hi.observed = std::max(hi.observed, fs);
      grad_fbar_into(x, g);
      inf.observed = std::max(inf.observed, g.cwiseAbs().maxCoeff());
    }
    tv.ok = tv.observed <= tv.limit;
    lo.ok = lo.observed <= lo.limit;
    hi.ok = hi.observed <= hi.limit;
    inf.ok = inf.observed <= inf.limit;
    rep.items.insert(rep.items.end(), {tv, lo, hi, inf});
  }

  // gradient floor: ||grad F|| >= 2 eps for u <= D; reported as the minimum norm
  {
    Certificate c{"composite-gradient-floor", kInf, 2.0 * eps, true};
    Vec z(Ti + 1), g;
    for (std::size_t k = 0; k < n; ++k) {
      z[0] = rng.uniform(-0.25 * D, D);
      z.tail(Ti) = lam * chain_point(T, rng);
      inst.composite_grad_into(z, g);
      c.observed = std::min(c.observed, g.norm());
    }
    c.ok = c.observed >= c.limit;
    rep.items.push_back(c);
  }

  // value gap: F(0) - inf F <= Delta with the chain at its worst value -Delta/4
  {
    Certificate c{"composite-value-gap", 0.0, inst.Delta(), true};
    const double hi_u = D + 4.0 * eps / inst.L();
    double worst = 0.0;
    const std::size_t grid = 200000;
    for (std::size_t k = 0; k <= grid; ++k) {
      const double u = hi_u * 1.5 * static_cast<double>(k) / static_cast<double>(grid);
      const double v = inst.travel_f0(u).value - inst.activation(u).value * inst.Delta() / 4.0;
      worst = std::min(worst, v);
    }
    Vec zero = Vec::Zero(Ti + 1);
    c.observed = inst.composite_value(zero) - worst;
    const double proof_floor = -0.75 * inst.Delta() - 4.0 * eps * eps / inst.L();
    c.ok = c.observed <= c.limit && worst >= proof_floor - 1e-12;
    rep.items.push_back(c);
  }

  // zero-chain: prog_0(grad fbar(x)) <= prog_{1/2}(x) + 1; reported as the largest excess
  {
    Certificate c{"zero-chain-progress", -kInf, 1.0, true};
    Vec g;
    for (std::size_t k = 0; k < n; ++k) {
      const Vec x = chain_point(T, rng);
      grad_fbar_into(x, g);
      const double excess = static_cast<double>(prog(g, 0.0)) - static_cast<double>(prog(x, 0.5));
      c.observed = std::max(c.observed, excess);
    }
    c.ok = c.observed <= c.limit;
    rep.items.push_back(c);
  }

  // partial progress: prog_1(x) < T implies ||grad fbar(x)||_inf > 1
  {
    Certificate c{"partial-progress-gradient", kInf, 1.0, true};
    Vec g;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t reached = static_cast<std::size_t>(rng.next_u64() % T);
      Vec x(Ti);
      for (Eigen::Index i = 0; i < Ti; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        if (iu < reached)
          x[i] = (rng.bernoulli(0.5) ? 1.0 : -1.0) * rng.uniform(1.0 + 1e-9, 3.0);
        else
          x[i] = rng.uniform(-1.0, 1.0);
      }
      if (prog(x, 1.0) >= T) continue;
      grad_fbar_into(x, g);
      c.observed = std::min(c.observed, g.cwiseAbs().maxCoeff());
    }
    c.ok = c.observed > c.limit;
    rep.items.push_back(c);
  }
  return rep;
}

}  // namespace pasta
