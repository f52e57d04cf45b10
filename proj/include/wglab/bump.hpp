// Smooth compactly supported profiles with closed-form first and second
// derivatives: the standard bump, a flat-top cutoff, and the translated
// window family whose integer shifts sum to one.

#pragma once

#include <cmath>

#include "wglab/common.hpp"

namespace wglab {

/// Value together with first and second derivative of a 1-D profile.
struct Jet1 {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Standard bump chi(u) = exp(1 - 1/(1-u^2)) on |u|<1, zero outside.
inline Jet1 bump(double u) {
  Jet1 j;
  const double u2 = u * u;
  if (u2 >= 1.0) return j;
  const double g = 1.0 - u2;
  const double w1 = -2.0 * u / (g * g);
  const double w2 = -2.0 / (g * g) - 8.0 * u2 / (g * g * g);
  j.v = std::exp(1.0 - 1.0 / g);
  j.d1 = w1 * j.v;
  j.d2 = (w2 + w1 * w1) * j.v;
  return j;
}

namespace detail {
// exp(-1/t) for t > 0 with derivatives; zero jet for t <= 0.
inline Jet1 decay(double t) {
  Jet1 j;
  if (t <= 0.0) return j;
  if (t < 1e-3) return j;  // below double underflow of exp(-1000)
  j.v = std::exp(-1.0 / t);
  j.d1 = j.v / (t * t);
  j.d2 = j.v * (1.0 / (t * t * t * t) - 2.0 / (t * t * t));
  return j;
}
}  // namespace detail

/// C^inf step: 0 for t<=0, 1 for t>=1, strictly monotone in between.
inline Jet1 smooth_step(double t) {
  Jet1 j;
  if (t <= 0.0) return j;
  if (t >= 1.0) {
    j.v = 1.0;
    return j;
  }
  const Jet1 p = detail::decay(t);
  const Jet1 q = detail::decay(1.0 - t);
  // q is decay(1-t): chain rule flips odd derivatives.
  const double qv = q.v, q1 = -q.d1;
  const double q2 = q.d2;
  const double D = p.v + qv;
  if (D == 0.0) return j;
  const double D1 = p.d1 + q1;
  j.v = p.v / D;
  j.d1 = (p.d1 * qv - p.v * q1) / (D * D);
  j.d2 = (p.d2 * qv - p.v * q2) / (D * D) - 2.0 * j.d1 * D1 / D;
  return j;
}

/// Flat-top cutoff in the radius: 1 for r <= r0, 0 for r >= r1.
inline Jet1 flat_top(double r, double r0, double r1) {
  const double s = 1.0 / (r1 - r0);
  Jet1 j = smooth_step((r1 - r) * s);
  j.d1 *= -s;
  j.d2 *= s * s;
  return j;
}

/// Partition window P(u) = step(u+1) - step(u), supported on (-1,1).
/// Integer translates satisfy sum_k P(u-k) = 1 identically.
inline Jet1 partition_window(double u) {
  const Jet1 a = smooth_step(u + 1.0);
  const Jet1 b = smooth_step(u);
  return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2};
}

/// sqrt of the partition window with guarded derivatives near the support edge.
inline Jet1 partition_window_sqrt(double u) {
  Jet1 j;
  const Jet1 p = partition_window(u);
  if (p.v < 1e-100) return j;
  j.v = std::sqrt(p.v);
  j.d1 = p.d1 / (2.0 * j.v);
  j.d2 = p.d2 / (2.0 * j.v) - p.d1 * p.d1 / (4.0 * p.v * j.v);
  return j;
}

/// Radial lift of a 1-D jet: F(x') = f(|x'|/rho).
struct RadialJet2 {
  double v = 0.0;
  Vec2 grad = Vec2::Zero();
  Mat2 hess = Mat2::Zero();
};

template <typename Profile1D>
RadialJet2 radial_profile(const Vec2& x, double rho, Profile1D&& f) {
  RadialJet2 out;
  const double r = x.norm();
  const Jet1 j = f(r / rho);
  out.v = j.v;
  if (r < 1e-12 * rho) {
    out.hess = (j.d2 / (rho * rho)) * Mat2::Identity();
    return out;
  }
  const Vec2 rh = x / r;
  out.grad = (j.d1 / rho) * rh;
  const Mat2 proj = rh * rh.transpose();
  out.hess = (j.d2 / (rho * rho)) * proj +
             (j.d1 / (rho * r)) * (Mat2::Identity() - proj);
  return out;
}

}  // namespace wglab
