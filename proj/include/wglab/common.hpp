// Shared aliases and small numeric helpers used across the library.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace wglab {

using cd = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cd kI{0.0, 1.0};

/// Thrown when an operation's preconditions or numeric contracts are violated.
class WglabError : public std::runtime_error {
 public:
  explicit WglabError(const std::string& what) : std::runtime_error(what) {}
};

inline double sqr(double x) { return x * x; }

/// Least-squares slope of y against x (both already in the scale of interest).
inline double fit_slope(const VectorXd& x, const VectorXd& y) {
  const double mx = x.mean(), my = y.mean();
  double num = 0.0, den = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += sqr(x[i] - mx);
  }
  if (den == 0.0) throw WglabError("fit_slope: degenerate abscissae");
  return num / den;
}

}  // namespace wglab
