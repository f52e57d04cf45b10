// Closed-form magnetic potentials: separable components (trigonometric in x1,
// compactly supported smooth profiles in x'), gauge functions, certified
// potential pairs, and the antisymmetrized field components.

#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>

#include "wglab/bump.hpp"
#include "wglab/geometry.hpp"

namespace wglab {

/// 2-D scalar profile with value, gradient and Hessian.
struct Jet2 {
  double v = 0.0;
  Vec2 g = Vec2::Zero();
  Mat2 h = Mat2::Zero();
};

using Profile2 = std::function<Jet2(const Vec2&)>;

Profile2 profile_constant(double c);
Profile2 profile_coordinate(int axis);  // axis 0 -> x2, 1 -> x3
Profile2 profile_radial_bump(double rho);
Profile2 profile_radial_flat_top(double r_plateau, double r_support);
/// sin(pi(x2+a)/2a) * sin(pi(x3+b)/2b): vanishes on the rectangle edges.
Profile2 profile_sine_box(double a, double b);
Profile2 profile_product(Profile2 a, Profile2 b);
Profile2 profile_scaled(double c, Profile2 p);

/// 1-periodic factor c0 + cc*cos(2 pi m x1) + cs*sin(2 pi m x1).
struct X1Trig {
  double c0 = 0.0, cc = 0.0, cs = 0.0;
  int m = 1;
  Jet1 operator()(double x1) const;
};

/// One scalar component a(x1,x') with analytic partials; the Hessian
/// evaluator may be absent (gauge-transformed potentials).
struct Component {
  std::function<double(double, const Vec2&)> value;
  std::function<Vec3(double, const Vec2&)> grad;
  std::function<Mat3(double, const Vec2&)> hess;
};

Component component_zero();
Component component_separable(X1Trig f, Profile2 p);
Component component_sum(Component a, Component b);

class MagneticPotential {
 public:
  MagneticPotential() : MagneticPotential(component_zero(), component_zero(),
                                          component_zero(), 0.0, "zero") {}
  MagneticPotential(Component a1, Component a2, Component a3,
                    double support_radius, std::string name,
                    double w3inf_bound = 0.0);

  Vec3 value(double x1, const Vec2& xp) const;
  double component(int j, double x1, const Vec2& xp) const;      // j in 1..3
  /// (d/dx1, d/dx2, d/dx3) of component j.
  Vec3 component_grad(int j, double x1, const Vec2& xp) const;
  bool has_hessian() const;
  Mat3 component_hess(int j, double x1, const Vec2& xp) const;

  double support_radius() const { return support_radius_; }
  double w3inf_bound() const { return w3inf_; }
  const std::string& name() const { return name_; }
  bool is_zero() const { return support_radius_ == 0.0; }

 private:
  std::array<Component, 3> comp_;
  double support_radius_;
  double w3inf_;
  std::string name_;
};

/// Scalar gauge generator with analytic gradient and Hessian.
class GaugeFunction {
 public:
  GaugeFunction(Component psi, double support_radius, std::string name);
  double value(double x1, const Vec2& xp) const;
  Vec3 grad(double x1, const Vec2& xp) const;
  Mat3 hess(double x1, const Vec2& xp) const;
  double support_radius() const { return support_radius_; }
  const std::string& name() const { return name_; }
  /// Max |psi| over the lateral boundary sample points.
  double boundary_sup(const CrossSection& cs, int n1_samples = 32) const;

 private:
  Component psi_;
  double support_radius_;
  std::string name_;
};

/// A + grad(psi); the result has no Hessian evaluator.
MagneticPotential gauge_transform(const MagneticPotential& A,
                                  const GaugeFunction& psi);

/// Antisymmetrized derivative d a_i/d x_j - d a_j/d x_i as an evaluator.
std::function<double(double, const Vec2&)> curl_component(
    const MagneticPotential& A, int i, int j);

/// Pair (A1, A2) whose difference vanishes with its first derivatives on the
/// lateral boundary; certified against a cross-section at construction.
class PotentialPair {
 public:
  PotentialPair(MagneticPotential a1, MagneticPotential a2,
                const CrossSection& cs);

  const MagneticPotential& first() const { return a1_; }
  const MagneticPotential& second() const { return a2_; }

  /// Transverse difference (a2,a3) of A2-A1, extended by zero outside the
  /// declared support.
  Vec2 transverse_difference(double x1, const Vec2& xp) const;
  /// Partial d/dx_l (l in 1..3) of the transverse difference.
  Vec2 transverse_difference_partial(int l, double x1, const Vec2& xp) const;
  double support_radius() const { return support_radius_; }
  double margin_first() const { return margin1_; }
  double margin_second() const { return margin2_; }

  /// beta_23 of the difference: the recovered quantity.
  std::function<double(double, const Vec2&)> aligned_field() const;

 private:
  MagneticPotential a1_, a2_;
  double support_radius_;
  double margin1_ = 0.0, margin2_ = 0.0;
};

/// Extension-by-zero evaluator of the pair's transverse difference on R^3.
std::function<Vec2(double, const Vec2&)> extend_by_zero(
    const PotentialPair& pair);

namespace presets {

MagneticPotential zero();
/// a2 = -amp*x3*C(|x'|)*f(x1), a3 = +amp*x2*C(|x'|)*f(x1) with
/// f = 1 + x1_mod*cos(2 pi x1); C is a flat-top (plateau_frac>0) or bump.
MagneticPotential swirl(double amp, double rho, double plateau_frac,
                        double x1_mod, const std::string& name = "swirl");
/// a1 = amp*sin(2 pi x1)*bump(|x'|/rho).
MagneticPotential axial(double amp, double rho);
/// Componentwise A + scale*B.
MagneticPotential combine(const MagneticPotential& A,
                          const MagneticPotential& B, double scale,
                          const std::string& name);
GaugeFunction gauge_bump(double amp, double rho, int m = 1);
/// Smooth gauge vanishing on the rectangle boundary (not compactly
/// supported); preferred for refinement studies.
GaugeFunction gauge_box_sine(double amp, double a, double b, int m = 1);
GaugeFunction gauge_linear(double amp);  // nonzero on the boundary

/// Config-facing registry; throws on unknown names.
MagneticPotential make_potential(const std::string& name,
                                 const std::map<std::string, double>& params);
GaugeFunction make_gauge(const std::string& name,
                         const std::map<std::string, double>& params);

}  // namespace presets

/// Invariant helpers used by tests and the verify command.
double periodicity_defect(const MagneticPotential& A, int samples = 200);
double support_defect(const MagneticPotential& A, double outside_radius,
                      int samples = 200);

}  // namespace wglab
