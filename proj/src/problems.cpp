#include "pasta/problems.hpp"

#include "pasta/errors.hpp"
#include "pasta/rng.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <sstream>

namespace pasta {

Objective::Objective(std::string name, std::size_t dim, Vec start)
    : name_(std::move(name)), dim_(dim), start_(std::move(start)) {
  if (dim_ == 0) throw InputError("objective dimension must be positive");
  if (static_cast<std::size_t>(start_.size()) != dim_)
    throw InputError("start point dimension mismatch");
}

Vec Objective::gradient(const Vec& x) const {
  Vec g(x.size());
  gradient_into(x, g);
  return g;
}

double Objective::gap_bound(const Vec& x) const {
  if (meta_.f_star) return value(x) - *meta_.f_star;
  return meta_.Delta;
}

std::shared_ptr<const Objective> Objective::with_start(const Vec& x0) const {
  Vec s = x0;
  if (s.size() == 1 && dim_ > 1) s = Vec::Constant(static_cast<Eigen::Index>(dim_), x0[0]);
  if (static_cast<std::size_t>(s.size()) != dim_) throw InputError("start point dimension mismatch");
  if (!s.allFinite()) throw InputError("start point must be finite");
  auto c = clone();
  c->start_ = s;
  if (c->meta_.f_star) c->meta_.Delta = std::max(0.0, c->value(s) - *c->meta_.f_star);
  return c;
}

double SeparableObjective::value(const Vec& x) const {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) acc += coord_value(x[i]);
  return acc;
}

void SeparableObjective::gradient_into(const Vec& x, Vec& out) const {
  out.resize(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = coord_grad(x[i]);
}

std::pair<double, double> SeparableObjective::coord_subdifferential(double t) const {
  const double g = coord_grad(t);
  return {g, g};
}

namespace {

double sq(double v) { return v * v; }

class Quadratic final : public Objective {
 public:
  Quadratic(std::size_t p, double condition)
      : Objective("quadratic-p" + std::to_string(p) + "-c" + fmt(condition), p,
                  Vec::Ones(static_cast<Eigen::Index>(p))),
        a_(static_cast<Eigen::Index>(p)) {
    if (!(condition >= 1.0) || !std::isfinite(condition))
      throw InputError("quadratic condition must be >= 1");
    if (p == 1) {
      a_[0] = condition;
    } else {
      for (std::size_t i = 0; i < p; ++i)
        a_[static_cast<Eigen::Index>(i)] =
            1.0 + (condition - 1.0) * static_cast<double>(i) / static_cast<double>(p - 1);
    }
    meta_.L = condition;
    meta_.rho = 0.0;
    meta_.mu_pl = 1.0;
    meta_.mu_star = 1.0;
    meta_.f_star = 0.0;
    meta_.x_star = Vec::Zero(static_cast<Eigen::Index>(p));
    meta_.Delta = value(start());
  }

  double value(const Vec& x) const override { return 0.5 * x.dot(a_.cwiseProduct(x)); }
  void gradient_into(const Vec& x, Vec& out) const override { out = a_.cwiseProduct(x); }
  bool smooth() const override { return true; }
  const Vec& diagonal() const { return a_; }

  static std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
  }

 protected:
  std::shared_ptr<Objective> clone() const override { return std::make_shared<Quadratic>(*this); }

 private:
  Vec a_;
};

struct GridCert {
  double mu = kInf;
  double argmin = 0.0;
  double max_curv = 0.0;
  double min_curv = kInf;
};

// 1-D certificate on [-20, 20] with spacing 1e-5.
template <class Ratio, class Curv>
GridCert scan_grid(Ratio ratio, Curv curv, double skip_radius) {
  GridCert c;
  const long n = 4000000;
  for (long k = 0; k <= n; ++k) {
    const double t = -20.0 + 40.0 * static_cast<double>(k) / static_cast<double>(n);
    const double h2 = curv(t);
    c.max_curv = std::max(c.max_curv, std::abs(h2));
    c.min_curv = std::min(c.min_curv, h2);
    if (std::abs(t) < skip_radius) continue;
    const double r = ratio(t);
    if (r < c.mu) {
      c.mu = r;
      c.argmin = t;
    }
  }
  return c;
}

class PlNonconvex final : public SeparableObjective {
 public:
  explicit PlNonconvex(std::size_t p)
      : SeparableObjective("pl-p" + std::to_string(p), p, Vec::Ones(static_cast<Eigen::Index>(p))) {
    const GridCert& c = certificate();
    meta_.L = c.max_curv * (1.0 + 1e-6);
    meta_.rho = std::max(0.0, -c.min_curv) * (1.0 + 1e-6);
    meta_.mu_pl = c.mu * (1.0 - 1e-6);
    meta_.f_star = 0.0;
    meta_.x_star = Vec::Zero(static_cast<Eigen::Index>(p));
    meta_.Delta = value(start());
  }

  double coord_value(double t) const override { return t * t + 3.0 * sq(std::sin(t)); }
  double coord_grad(double t) const override { return 2.0 * t + 3.0 * std::sin(2.0 * t); }
  bool smooth() const override { return true; }

  static const GridCert& certificate() {
    // near 0 the ratio tends to 8, well above the grid minimum
    static const GridCert c = scan_grid(
        [](double t) {
          const double g = 2.0 * t + 3.0 * std::sin(2.0 * t);
          return g * g / (2.0 * (t * t + 3.0 * sq(std::sin(t))));
        },
        [](double t) { return 2.0 + 6.0 * std::cos(2.0 * t); }, 1e-3);
    return c;
  }

 protected:
  std::shared_ptr<Objective> clone() const override { return std::make_shared<PlNonconvex>(*this); }
};

class StarConvex final : public SeparableObjective {
 public:
  explicit StarConvex(std::size_t p)
      : SeparableObjective("star-p" + std::to_string(p), p, Vec::Ones(static_cast<Eigen::Index>(p))) {
    const GridCert& c = certificate();
    meta_.L = c.max_curv * (1.0 + 1e-3);
    meta_.rho = std::max(0.0, -c.min_curv) * (1.0 + 1e-3);
    meta_.mu_star = c.mu * (1.0 - 1e-6);
    meta_.f_star = 0.0;
    meta_.x_star = Vec::Zero(static_cast<Eigen::Index>(p));
    meta_.Delta = value(start());
    const Certificate chk = certify_star(*this, 10000, 0x5747u);
    if (!chk.ok) {
      std::ostringstream os;
      os << "star-convexity violated: worst slack " << chk.observed;
      throw CertificationError(os.str());
    }
  }

  double coord_value(double t) const override { return t * t + 0.5 * t * std::sin(t); }
  double coord_grad(double t) const override {
    return 2.0 * t + 0.5 * std::sin(t) + 0.5 * t * std::cos(t);
  }
  bool smooth() const override { return true; }

  static const GridCert& certificate() {
    static const GridCert c = scan_grid(
        [](double t) {
          const double g = 2.0 * t + 0.5 * std::sin(t) + 0.5 * t * std::cos(t);
          const double h = t * t + 0.5 * t * std::sin(t);
          return 2.0 * (g * t - h) / (t * t);
        },
        [](double t) { return 2.0 + std::cos(t) - 0.5 * t * std::sin(t); }, 1e-3);
    return c;
  }

 protected:
  std::shared_ptr<Objective> clone() const override { return std::make_shared<StarConvex>(*this); }
};

class WeaklyConvex final : public SeparableObjective {
 public:
  WeaklyConvex(std::size_t p, double radius)
      : SeparableObjective(name_for(p, radius), p, Vec::Constant(static_cast<Eigen::Index>(p), 2.0)),
        r_(radius) {
    if (!(radius > 1.0)) throw InputError("weakly convex tail radius must exceed 1");
    meta_.rho = 2.0;
    const double reach = std::min(r_, meta_.box.hi);
    meta_.G = 2.0 * reach * std::sqrt(static_cast<double>(p));
    meta_.f_star = 0.0;
    meta_.x_star = Vec::Ones(static_cast<Eigen::Index>(p));
    meta_.Delta = value(start());
  }

  double coord_value(double t) const override {
    const double a = std::abs(t);
    if (a > r_) return (r_ * r_ - 1.0) + 2.0 * r_ * (a - r_);
    return std::abs(t * t - 1.0);
  }
  double coord_grad(double t) const override {
    const double a = std::abs(t);
    if (a > r_) return t > 0 ? 2.0 * r_ : -2.0 * r_;
    if (a == 1.0) return 0.0;
    return a > 1.0 ? 2.0 * t : -2.0 * t;
  }
  std::pair<double, double> coord_subdifferential(double t) const override {
    if (std::abs(t) == 1.0) return {-2.0, 2.0};
    const double g = coord_grad(t);
    return {g, g};
  }
  std::vector<double> coord_kinks() const override { return {-1.0, 1.0}; }
  bool smooth() const override { return false; }

 protected:
  std::shared_ptr<Objective> clone() const override { return std::make_shared<WeaklyConvex>(*this); }

 private:
  static std::string name_for(std::size_t p, double r) {
    std::string n = "weakly-convex-p" + std::to_string(p);
    if (std::isfinite(r)) n += "-r" + Quadratic::fmt(r);
    return n;
  }
  double r_;
};

class AbsValue final : public SeparableObjective {
 public:
  explicit AbsValue(std::size_t p)
      : SeparableObjective("abs-p" + std::to_string(p), p, Vec::Constant(static_cast<Eigen::Index>(p), 2.0)) {
    meta_.rho = 0.0;
    meta_.G = std::sqrt(static_cast<double>(p));
    meta_.f_star = 0.0;
    meta_.x_star = Vec::Zero(static_cast<Eigen::Index>(p));
    meta_.Delta = value(start());
  }

  double coord_value(double t) const override { return std::abs(t); }
  double coord_grad(double t) const override { return t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0); }
  std::pair<double, double> coord_subdifferential(double t) const override {
    if (t == 0.0) return {-1.0, 1.0};
    const double g = coord_grad(t);
    return {g, g};
  }
  std::vector<double> coord_kinks() const override { return {0.0}; }
  bool smooth() const override { return false; }

 protected:
  std::shared_ptr<Objective> clone() const override { return std::make_shared<AbsValue>(*this); }
};

class Travel final : public SeparableObjective {
 public:
  Travel(double eps, double Delta, double L)
      : SeparableObjective("travel-L" + Quadratic::fmt(L) + "-D" + Quadratic::fmt(Delta) + "-e" +
                               Quadratic::fmt(eps),
                           1, Vec::Zero(1)),
        eps_(eps),
        D_(Delta / (4.0 * eps)),
        L_(L) {
    if (!(eps > 0) || !(Delta > 0) || !(L > 0)) throw InputError("travel parameters must be positive");
    meta_.L = L;
    meta_.rho = 0.0;
    meta_.f_star = -Delta / 2.0 - 4.0 * eps * eps / L;
    meta_.x_star = Vec::Constant(1, D_ + 4.0 * eps / L);
    meta_.Delta = value(start()) - *meta_.f_star;
  }

  double coord_value(double u) const override {
    if (u <= D_) return -2.0 * eps_ * u;
    const double w = std::min(u, D_ + 4.0 * eps_ / L_) - D_;
    return -2.0 * eps_ * D_ - 2.0 * eps_ * w + 0.25 * L_ * w * w;
  }
  double coord_grad(double u) const override {
    if (u <= D_) return -2.0 * eps_;
    if (u >= D_ + 4.0 * eps_ / L_) return 0.0;
    return -2.0 * eps_ + 0.5 * L_ * (u - D_);
  }
  bool smooth() const override { return true; }

 protected:
  std::shared_ptr<Objective> clone() const override { return std::make_shared<Travel>(*this); }

 private:
  double eps_;
  double D_;
  double L_;
};

std::size_t parse_dim(const std::string& s) {
  const unsigned long v = std::stoul(s);
  if (v == 0) throw InputError("problem dimension must be positive");
  return v;
}

}  // namespace

ObjectivePtr make_quadratic(std::size_t p, double condition) {
  if (p == 0) throw InputError("dimension must be positive");
  return std::make_shared<Quadratic>(p, condition);
}

ObjectivePtr make_pl_nonconvex(std::size_t p) {
  if (p == 0) throw InputError("dimension must be positive");
  return std::make_shared<PlNonconvex>(p);
}

ObjectivePtr make_weakly_convex(std::size_t p, double radius) {
  if (p == 0) throw InputError("dimension must be positive");
  return std::make_shared<WeaklyConvex>(p, radius);
}

ObjectivePtr make_abs(std::size_t p) {
  if (p == 0) throw InputError("dimension must be positive");
  return std::make_shared<AbsValue>(p);
}

ObjectivePtr make_star_convex(std::size_t p) {
  if (p == 0) throw InputError("dimension must be positive");
  return std::make_shared<StarConvex>(p);
}

ObjectivePtr make_travel(double eps, double Delta, double L) {
  return std::make_shared<Travel>(eps, Delta, L);
}

std::vector<std::string> problem_key_patterns() {
  return {"quadratic-p<dim>-c<condition>", "pl-p<dim>", "star-p<dim>", "weakly-convex-p<dim>[-r<radius>]",
          "abs-p<dim>", "travel[-L<smoothness>][-D<delta>]  (needs eps)"};
}

ObjectivePtr make_problem(std::string_view key_view, const ProblemOptions& opts) {
  const std::string key(key_view);
  static const std::string num = R"(([0-9]+(?:\.[0-9]*)?(?:[eE][-+]?[0-9]+)?))";
  static const std::regex quad("quadratic-p([0-9]+)-c" + num);
  static const std::regex pl("pl-p([0-9]+)");
  static const std::regex star("star-p([0-9]+)");
  static const std::regex weak("weakly-convex-p([0-9]+)(?:-r" + num + ")?");
  static const std::regex absre("abs-p([0-9]+)");
  static const std::regex travel("travel(?:-L" + num + ")?(?:-D" + num + ")?");
  std::smatch m;
  ObjectivePtr f;
  try {
    if (std::regex_match(key, m, quad)) {
      f = make_quadratic(parse_dim(m[1]), std::stod(m[2]));
    } else if (std::regex_match(key, m, pl)) {
      f = make_pl_nonconvex(parse_dim(m[1]));
    } else if (std::regex_match(key, m, star)) {
      f = make_star_convex(parse_dim(m[1]));
    } else if (std::regex_match(key, m, weak)) {
      f = make_weakly_convex(parse_dim(m[1]), m[2].matched ? std::stod(m[2]) : kInf);
    } else if (std::regex_match(key, m, absre)) {
      f = make_abs(parse_dim(m[1]));
    } else if (std::regex_match(key, m, travel)) {
      if (!opts.eps) throw InputError("problem '" + key + "' needs eps");
      const double L = m[1].matched ? std::stod(m[1]) : 16.0;
      const double D = m[2].matched ? std::stod(m[2]) : 2.0;
      f = make_travel(*opts.eps, D, L);
    }
  } catch (const std::out_of_range&) {
    throw InputError("numeric field out of range in problem key '" + key + "'");
  }
  if (!f) throw InputError("unknown problem key '" + key + "'");
  if (opts.start) f = f->with_start(*opts.start);
  return f;
}

namespace {

Vec box_point(const Objective& f, Rng& rng) {
  Vec x(static_cast<Eigen::Index>(f.dimension()));
  rng.fill_uniform(x, f.meta().box.lo, f.meta().box.hi);
  return x;
}

}  // namespace

Certificate certify_gradient_consistency(const Objective& f, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Certificate c{"gradient-consistency", 0.0, 1e-5, true};
  Vec g, xp, xm;
  for (std::size_t k = 0; k < n; ++k) {
    const Vec x = box_point(f, rng);
    f.gradient_into(x, g);
    Vec fd(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
      xp = x;
      xm = x;
      xp[i] += h;
      xm[i] -= h;
      fd[i] = (f.value(xp) - f.value(xm)) / (xp[i] - xm[i]);
    }
    const double rel = (g - fd).norm() / std::max(1.0, g.norm());
    c.observed = std::max(c.observed, rel);
  }
  c.ok = c.observed <= c.limit;
  return c;
}

Certificate certify_lipschitz_gradient(const Objective& f, std::size_t n, std::uint64_t seed) {
  if (!f.meta().L) throw InputError("objective declares no L");
  Rng rng(seed);
  Certificate c{"gradient-lipschitz", 0.0, *f.meta().L, true};
  Vec gx, gy;
  for (std::size_t k = 0; k < n; ++k) {
    const Vec x = box_point(f, rng);
    Vec y;
    if (k % 2 == 0) {
      y = box_point(f, rng);
    } else {
      Vec d(x.size());
      rng.fill_normal(d);
      y = x + 1e-3 * d;
    }
    const double dist = (x - y).norm();
    if (dist == 0.0) continue;
    f.gradient_into(x, gx);
    f.gradient_into(y, gy);
    c.observed = std::max(c.observed, (gx - gy).norm() / dist);
  }
  c.ok = c.observed <= c.limit;
  return c;
}

Certificate certify_pl(const Objective& f, std::size_t n, std::uint64_t seed) {
  if (!f.meta().mu_pl || !f.meta().f_star) throw InputError("objective declares no PL constant");
  Rng rng(seed);
  const double mu = *f.meta().mu_pl;
  const double fs = *f.meta().f_star;
  Certificate c{"pl-inequality", -kInf, 1e-10, true};
  Vec g;
  for (std::size_t k = 0; k < n; ++k) {
    const Vec x = box_point(f, rng);
    f.gradient_into(x, g);
    // violation amount; must stay below 1e-10
    c.observed = std::max(c.observed, 2.0 * mu * (f.value(x) - fs) - g.squaredNorm());
  }
  c.ok = c.observed <= c.limit;
  return c;
}

Certificate certify_star(const Objective& f, std::size_t n, std::uint64_t seed) {
  const auto& m = f.meta();
  if (!m.mu_star || !m.f_star || !m.x_star) throw InputError("objective declares no star constant");
  Rng rng(seed);
  Certificate c{"star-inequality", -kInf, 1e-10, true};
  Vec g;
  for (std::size_t k = 0; k < n; ++k) {
    const Vec x = box_point(f, rng);
    f.gradient_into(x, g);
    const Vec d = x - *m.x_star;
    const double lhs = g.dot(d);
    const double rhs = f.value(x) - *m.f_star + 0.5 * *m.mu_star * d.squaredNorm();
    c.observed = std::max(c.observed, (rhs - lhs) / std::max(1.0, std::abs(rhs)));
  }
  c.ok = c.observed <= c.limit;
  return c;
}

Certificate certify_weak_convexity(const Objective& f, std::size_t n, std::uint64_t seed) {
  if (!f.meta().rho) throw InputError("objective declares no rho");
  Rng rng(seed);
  const double rho = *f.meta().rho;
  auto F = [&](const Vec& v) { return f.value(v) + 0.5 * rho * v.squaredNorm(); };
  Certificate c{"midpoint-convexity", -kInf, 1e-10, true};
  for (std::size_t k = 0; k < n; ++k) {
    const Vec x = box_point(f, rng);
    const Vec y = box_point(f, rng);
    const Vec mid = 0.5 * (x + y);
    c.observed = std::max(c.observed, F(mid) - 0.5 * (F(x) + F(y)));
  }
  c.ok = c.observed <= c.limit;
  return c;
}

}  // namespace pasta
