#include "wglab/fields.hpp"

#include <cmath>
#include <limits>

#include "wglab/poincare.hpp"

namespace wglab {

Profile2 profile_constant(double c) {
  return [c](const Vec2&) {
    Jet2 j;
    j.v = c;
    return j;
  };
}

Profile2 profile_coordinate(int axis) {
  return [axis](const Vec2& x) {
    Jet2 j;
    j.v = x[axis];
    j.g[axis] = 1.0;
    return j;
  };
}

Profile2 profile_radial_bump(double rho) {
  return [rho](const Vec2& x) {
    const RadialJet2 r = radial_profile(x, rho, [](double u) { return bump(u); });
    return Jet2{r.v, r.grad, r.hess};
  };
}

Profile2 profile_radial_flat_top(double r_plateau, double r_support) {
  return [r_plateau, r_support](const Vec2& x) {
    const RadialJet2 r = radial_profile(
        x, 1.0, [=](double u) { return flat_top(u, r_plateau, r_support); });
    return Jet2{r.v, r.grad, r.hess};
  };
}

Profile2 profile_sine_box(double a, double b) {
  return [a, b](const Vec2& x) {
    const double wa = kPi / (2 * a), wb = kPi / (2 * b);
    const double su = std::sin(wa * (x.x() + a)), cu = std::cos(wa * (x.x() + a));
    const double sv = std::sin(wb * (x.y() + b)), cv = std::cos(wb * (x.y() + b));
    Jet2 j;
    j.v = su * sv;
    j.g = Vec2(wa * cu * sv, wb * su * cv);
    j.h << -wa * wa * su * sv, wa * wb * cu * cv, wa * wb * cu * cv,
        -wb * wb * su * sv;
    return j;
  };
}

Profile2 profile_product(Profile2 a, Profile2 b) {
  return [a = std::move(a), b = std::move(b)](const Vec2& x) {
    const Jet2 ja = a(x), jb = b(x);
    Jet2 j;
    j.v = ja.v * jb.v;
    j.g = ja.v * jb.g + jb.v * ja.g;
    j.h = ja.v * jb.h + jb.v * ja.h + ja.g * jb.g.transpose() +
          jb.g * ja.g.transpose();
    return j;
  };
}

Profile2 profile_scaled(double c, Profile2 p) {
  return [c, p = std::move(p)](const Vec2& x) {
    Jet2 j = p(x);
    j.v *= c;
    j.g *= c;
    j.h *= c;
    return j;
  };
}

Jet1 X1Trig::operator()(double x1) const {
  const double w = 2.0 * kPi * m;
  const double c = std::cos(w * x1), s = std::sin(w * x1);
  Jet1 j;
  j.v = c0 + cc * c + cs * s;
  j.d1 = w * (-cc * s + cs * c);
  j.d2 = w * w * (-cc * c - cs * s);
  return j;
}

Component component_zero() {
  Component c;
  c.value = [](double, const Vec2&) { return 0.0; };
  c.grad = [](double, const Vec2&) { return Vec3::Zero().eval(); };
  c.hess = [](double, const Vec2&) { return Mat3::Zero().eval(); };
  return c;
}

Component component_separable(X1Trig f, Profile2 p) {
  Component c;
  c.value = [f, p](double x1, const Vec2& x) { return f(x1).v * p(x).v; };
  c.grad = [f, p](double x1, const Vec2& x) {
    const Jet1 jf = f(x1);
    const Jet2 jp = p(x);
    return Vec3(jf.d1 * jp.v, jf.v * jp.g[0], jf.v * jp.g[1]);
  };
  c.hess = [f, p](double x1, const Vec2& x) {
    const Jet1 jf = f(x1);
    const Jet2 jp = p(x);
    Mat3 h;
    h(0, 0) = jf.d2 * jp.v;
    h(0, 1) = h(1, 0) = jf.d1 * jp.g[0];
    h(0, 2) = h(2, 0) = jf.d1 * jp.g[1];
    h.block<2, 2>(1, 1) = jf.v * jp.h;
    return h;
  };
  return c;
}

Component component_sum(Component a, Component b) {
  Component c;
  c.value = [va = a.value, vb = b.value](double x1, const Vec2& x) {
    return va(x1, x) + vb(x1, x);
  };
  c.grad = [ga = a.grad, gb = b.grad](double x1, const Vec2& x) {
    return (ga(x1, x) + gb(x1, x)).eval();
  };
  if (a.hess && b.hess) {
    c.hess = [ha = a.hess, hb = b.hess](double x1, const Vec2& x) {
      return (ha(x1, x) + hb(x1, x)).eval();
    };
  }
  return c;
}

MagneticPotential::MagneticPotential(Component a1, Component a2, Component a3,
                                     double support_radius, std::string name,
                                     double w3inf_bound)
    : comp_{std::move(a1), std::move(a2), std::move(a3)},
      support_radius_(support_radius),
      w3inf_(w3inf_bound),
      name_(std::move(name)) {}

Vec3 MagneticPotential::value(double x1, const Vec2& xp) const {
  return Vec3(comp_[0].value(x1, xp), comp_[1].value(x1, xp),
              comp_[2].value(x1, xp));
}

double MagneticPotential::component(int j, double x1, const Vec2& xp) const {
  if (j < 1 || j > 3) throw WglabError("potential component index out of range");
  return comp_[j - 1].value(x1, xp);
}

Vec3 MagneticPotential::component_grad(int j, double x1, const Vec2& xp) const {
  if (j < 1 || j > 3) throw WglabError("potential component index out of range");
  return comp_[j - 1].grad(x1, xp);
}

bool MagneticPotential::has_hessian() const {
  return static_cast<bool>(comp_[0].hess);
}

Mat3 MagneticPotential::component_hess(int j, double x1, const Vec2& xp) const {
  if (!has_hessian()) throw WglabError("potential has no Hessian evaluator");
  return comp_[j - 1].hess(x1, xp);
}

GaugeFunction::GaugeFunction(Component psi, double support_radius,
                             std::string name)
    : psi_(std::move(psi)),
      support_radius_(support_radius),
      name_(std::move(name)) {
  if (!psi_.hess) throw WglabError("gauge function requires a Hessian");
}

double GaugeFunction::value(double x1, const Vec2& xp) const {
  return psi_.value(x1, xp);
}
Vec3 GaugeFunction::grad(double x1, const Vec2& xp) const {
  return psi_.grad(x1, xp);
}
Mat3 GaugeFunction::hess(double x1, const Vec2& xp) const {
  return psi_.hess(x1, xp);
}

double GaugeFunction::boundary_sup(const CrossSection& cs,
                                   int n1_samples) const {
  double sup = 0.0;
  for (int i1 = 0; i1 < n1_samples; ++i1) {
    const double x1 = static_cast<double>(i1) / n1_samples;
    for (const auto& t : cs.trace_nodes())
      sup = std::max(sup, std::fabs(value(x1, t.pos)));
  }
  return sup;
}

MagneticPotential gauge_transform(const MagneticPotential& A,
                                  const GaugeFunction& psi) {
  std::array<Component, 3> out;
  for (int j = 0; j < 3; ++j) {
    Component c;
    c.value = [A, psi, j](double x1, const Vec2& x) {
      return A.component(j + 1, x1, x) + psi.grad(x1, x)[j];
    };
    c.grad = [A, psi, j](double x1, const Vec2& x) {
      return (A.component_grad(j + 1, x1, x) + psi.hess(x1, x).row(j).transpose())
          .eval();
    };
    out[j] = std::move(c);
  }
  const double rad = std::max(A.support_radius(), psi.support_radius());
  return MagneticPotential(std::move(out[0]), std::move(out[1]),
                           std::move(out[2]), rad,
                           A.name() + "+grad(" + psi.name() + ")",
                           A.w3inf_bound());
}

std::function<double(double, const Vec2&)> curl_component(
    const MagneticPotential& A, int i, int j) {
  if (i == j) throw WglabError("curl_component: indices must differ");
  if (i < 1 || i > 3 || j < 1 || j > 3)
    throw WglabError("curl_component: indices in 1..3");
  return [A, i, j](double x1, const Vec2& xp) {
    return A.component_grad(i, x1, xp)[j - 1] -
           A.component_grad(j, x1, xp)[i - 1];
  };
}

PotentialPair::PotentialPair(MagneticPotential a1, MagneticPotential a2,
                             const CrossSection& cs)
    : a1_(std::move(a1)), a2_(std::move(a2)) {
  support_radius_ = std::max(a1_.support_radius(), a2_.support_radius());
  // Boundary flatness of the difference and its first derivatives.
  double defect = 0.0;
  for (int i1 = 0; i1 < 16; ++i1) {
    const double x1 = i1 / 16.0;
    for (const auto& t : cs.trace_nodes()) {
      for (int j = 1; j <= 3; ++j) {
        defect = std::max(defect, std::fabs(a2_.component(j, x1, t.pos) -
                                            a1_.component(j, x1, t.pos)));
        const Vec3 dg =
            a2_.component_grad(j, x1, t.pos) - a1_.component_grad(j, x1, t.pos);
        defect = std::max(defect, dg.cwiseAbs().maxCoeff());
      }
    }
  }
  if (defect > 1e-12)
    throw WglabError("potential pair: difference not flat on the boundary");
  margin1_ = admissibility_margin(a1_, cs);
  margin2_ = admissibility_margin(a2_, cs);
  if (margin1_ <= 0 || margin2_ <= 0)
    throw WglabError("potential pair: member outside the admissible class");
}

Vec2 PotentialPair::transverse_difference(double x1, const Vec2& xp) const {
  if (xp.norm() >= support_radius_) return Vec2::Zero();
  return Vec2(a2_.component(2, x1, xp) - a1_.component(2, x1, xp),
              a2_.component(3, x1, xp) - a1_.component(3, x1, xp));
}

Vec2 PotentialPair::transverse_difference_partial(int l, double x1,
                                                  const Vec2& xp) const {
  if (xp.norm() >= support_radius_) return Vec2::Zero();
  return Vec2(a2_.component_grad(2, x1, xp)[l - 1] -
                  a1_.component_grad(2, x1, xp)[l - 1],
              a2_.component_grad(3, x1, xp)[l - 1] -
                  a1_.component_grad(3, x1, xp)[l - 1]);
}

std::function<double(double, const Vec2&)> PotentialPair::aligned_field()
    const {
  return [this](double x1, const Vec2& xp) {
    if (xp.norm() >= support_radius_) return 0.0;
    const Vec2 d2 = transverse_difference_partial(2, x1, xp);
    const Vec2 d3 = transverse_difference_partial(3, x1, xp);
    return d3[0] - d2[1];  // d(a2)/dx3 - d(a3)/dx2
  };
}

std::function<Vec2(double, const Vec2&)> extend_by_zero(
    const PotentialPair& pair) {
  return [&pair](double x1, const Vec2& xp) {
    return pair.transverse_difference(x1, xp);
  };
}

namespace presets {

MagneticPotential zero() { return MagneticPotential(); }

MagneticPotential swirl(double amp, double rho, double plateau_frac,
                        double x1_mod, const std::string& name) {
  Profile2 cut = plateau_frac > 0.0
                     ? profile_radial_flat_top(plateau_frac * rho, rho)
                     : profile_radial_bump(rho);
  X1Trig f{1.0, x1_mod, 0.0, 1};
  Component a2 = component_separable(
      f, profile_product(profile_scaled(-amp, profile_coordinate(1)), cut));
  Component a3 = component_separable(
      f, profile_product(profile_scaled(+amp, profile_coordinate(0)), cut));
  const double w3 = std::fabs(amp) * std::pow(8.0 / rho, 3);
  return MagneticPotential(component_zero(), std::move(a2), std::move(a3), rho,
                           name, w3);
}

MagneticPotential axial(double amp, double rho) {
  X1Trig f{0.0, 0.0, amp, 1};
  Component a1 = component_separable(f, profile_radial_bump(rho));
  const double w3 = std::fabs(amp) * std::pow(8.0 / rho, 3);
  return MagneticPotential(std::move(a1), component_zero(), component_zero(),
                           rho, "axial", w3);
}

MagneticPotential combine(const MagneticPotential& A,
                          const MagneticPotential& B, double scale,
                          const std::string& name) {
  std::array<Component, 3> out;
  for (int j = 1; j <= 3; ++j) {
    Component c;
    c.value = [A, B, scale, j](double x1, const Vec2& x) {
      return A.component(j, x1, x) + scale * B.component(j, x1, x);
    };
    c.grad = [A, B, scale, j](double x1, const Vec2& x) {
      return (A.component_grad(j, x1, x) + scale * B.component_grad(j, x1, x))
          .eval();
    };
    if (A.has_hessian() && B.has_hessian()) {
      c.hess = [A, B, scale, j](double x1, const Vec2& x) {
        return (A.component_hess(j, x1, x) + scale * B.component_hess(j, x1, x))
            .eval();
      };
    }
    out[j - 1] = std::move(c);
  }
  return MagneticPotential(std::move(out[0]), std::move(out[1]),
                           std::move(out[2]),
                           std::max(A.support_radius(), B.support_radius()),
                           name, A.w3inf_bound() + scale * B.w3inf_bound());
}

GaugeFunction gauge_bump(double amp, double rho, int m) {
  X1Trig f{0.6 * amp, 0.4 * amp, 0.0, m};
  return GaugeFunction(component_separable(f, profile_radial_bump(rho)), rho,
                       "gauge_bump");
}

GaugeFunction gauge_box_sine(double amp, double a, double b, int m) {
  X1Trig f{0.6 * amp, 0.4 * amp, 0.0, m};
  return GaugeFunction(component_separable(f, profile_sine_box(a, b)),
                       std::numeric_limits<double>::infinity(),
                       "gauge_box_sine");
}

GaugeFunction gauge_linear(double amp) {
  X1Trig f{amp, 0.0, 0.0, 1};
  return GaugeFunction(component_separable(f, profile_coordinate(0)),
                       std::numeric_limits<double>::infinity(),
                       "gauge_linear");
}

namespace {
double get(const std::map<std::string, double>& p, const std::string& key,
           double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}
}  // namespace

MagneticPotential make_potential(const std::string& name,
                                 const std::map<std::string, double>& params) {
  if (name == "zero") return zero();
  if (name == "swirl")
    return swirl(get(params, "amp", 0.5), get(params, "rho", 0.35),
                 get(params, "plateau", 0.0), get(params, "x1_mod", 0.0));
  if (name == "axial")
    return axial(get(params, "amp", 0.2), get(params, "rho", 0.35));
  if (name == "swirl_axial") {
    MagneticPotential s =
        swirl(get(params, "amp", 0.25), get(params, "rho", 0.35), 0.0,
              get(params, "x1_mod", 0.3));
    return combine(s, axial(get(params, "axial_amp", 0.15),
                            get(params, "rho", 0.35)),
                   1.0, "swirl_axial");
  }
  throw WglabError("unknown potential preset: " + name);
}

GaugeFunction make_gauge(const std::string& name,
                         const std::map<std::string, double>& params) {
  if (name == "gauge_bump")
    return gauge_bump(get(params, "amp", 0.3), get(params, "rho", 0.4),
                      static_cast<int>(get(params, "m", 1)));
  if (name == "gauge_box_sine")
    return gauge_box_sine(get(params, "amp", 0.3), get(params, "a", 0.5),
                          get(params, "b", 0.5),
                          static_cast<int>(get(params, "m", 1)));
  if (name == "gauge_linear") return gauge_linear(get(params, "amp", 0.3));
  throw WglabError("unknown gauge preset: " + name);
}

}  // namespace presets

double periodicity_defect(const MagneticPotential& A, int samples) {
  double defect = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double x1 = 2.0 * s / samples - 0.5;
    const Vec2 xp(0.17 * std::cos(2.4 * s), 0.17 * std::sin(1.1 * s));
    defect = std::max(defect,
                      (A.value(x1 + 1.0, xp) - A.value(x1, xp)).norm());
  }
  return defect;
}

double support_defect(const MagneticPotential& A, double outside_radius,
                      int samples) {
  double defect = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double ang = 2.0 * kPi * s / samples;
    const double r = outside_radius * (1.0 + 0.5 * (s % 7) / 7.0);
    const Vec2 xp(r * std::cos(ang), r * std::sin(ang));
    defect = std::max(defect, A.value(0.3 * s, xp).norm());
  }
  return defect;
}

}  // namespace wglab
