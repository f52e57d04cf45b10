// 1-D quadrature: adaptive Simpson with absolute tolerance, fixed
// Gauss-Legendre panels for batched integrands, periodic trapezoid.

#pragma once

#include <array>
#include <cmath>
#include <functional>

#include "wglab/common.hpp"

namespace wglab {

namespace detail {
inline double qmag(double x) { return std::fabs(x); }
inline double qmag(const cd& x) { return std::abs(x); }

template <typename T, typename F>
T simpson_rec(F&& f, double a, double b, T fa, T fm, T fb, T whole, double tol,
              int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const T flm = f(lm), frm = f(rm);
  const T left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const T right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const T delta = left + right - whole;
  if (depth <= 0 || qmag(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

/// Adaptive Simpson on [a,b], absolute tolerance `tol`.
template <typename T = double, typename F>
T adaptive_simpson(F&& f, double a, double b, double tol = 1e-10,
                   int max_depth = 48) {
  if (a == b) return T{};
  const T fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const T whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  // Seed with one mandatory split so a deceptively small initial estimate
  // (integrand vanishing at the three probe points) does not terminate early.
  const double m = 0.5 * (a + b);
  const T f1 = f(0.5 * (a + m)), f2 = f(0.5 * (m + b));
  const T left = (m - a) / 6.0 * (fa + 4.0 * f1 + fm);
  const T right = (b - m) / 6.0 * (fm + 4.0 * f2 + fb);
  (void)whole;
  return detail::simpson_rec(f, a, m, fa, f1, fm, left, 0.5 * tol,
                             max_depth) +
         detail::simpson_rec(f, m, b, fm, f2, fb, right, 0.5 * tol, max_depth);
}

/// 8-point Gauss-Legendre nodes/weights on [-1,1].
struct GaussLegendre8 {
  static constexpr std::array<double, 8> nodes = {
      -0.96028985649753623, -0.79666647741362674, -0.52553240991632899,
      -0.18343464249564980, 0.18343464249564980,  0.52553240991632899,
      0.79666647741362674,  0.96028985649753623};
  static constexpr std::array<double, 8> weights = {
      0.10122853629037626, 0.22238103445337447, 0.31370664587788729,
      0.36268378337836198, 0.36268378337836198, 0.31370664587788729,
      0.22238103445337447, 0.10122853629037626};
};

/// Integrate f over [a,b] with `panels` fixed GL8 panels.
template <typename T = double, typename F>
T gauss_panels(F&& f, double a, double b, int panels) {
  T acc{};
  const double w = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * w;
    for (int q = 0; q < 8; ++q) {
      acc += (0.5 * w * GaussLegendre8::weights[q]) *
             f(c + 0.5 * w * GaussLegendre8::nodes[q]);
    }
  }
  return acc;
}

/// Trapezoid rule for 1-periodic integrands sampled at n uniform nodes.
template <typename T = double, typename F>
T periodic_trapezoid(F&& f, int n) {
  T acc{};
  for (int i = 0; i < n; ++i) acc += f(static_cast<double>(i) / n);
  return acc / static_cast<double>(n);
}

}  // namespace wglab
