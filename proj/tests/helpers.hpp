// Shared fixtures for the unit tests: discrete eigenmodes of the free
// fibered operator and small grids.

#pragma once

#include <cmath>

#include "wglab/geometry.hpp"
#include "wglab/solve.hpp"

namespace wgtest {

using namespace wglab;

struct EigenMode {
  VectorXcd vec;
  double lambda_h = 0.0;     // discrete eigenvalue of -Delta_h
  double lambda_cont = 0.0;  // continuum eigenvalue
};

/// Quasi-periodic Dirichlet eigenmode e^{i(theta+2 pi m)x1} sin sin on a
/// rectangle grid, with its exact discrete eigenvalue.
inline EigenMode make_mode(const WaveguideGrid& g, double theta, int m, int p,
                           int q) {
  const CrossSection& cs = g.section();
  const double a = cs.half_width_2(), b = cs.half_width_3();
  const double kappa = theta + 2.0 * kPi * m;
  const double h1 = g.h1(), h = cs.spacing();
  EigenMode mode;
  mode.vec.resize(g.n_dof());
  const int n3p = cs.n3() + 1;
  for (int i1 = 0; i1 < g.n1(); ++i1) {
    const double x1 = g.x1(i1);
    for (int pp = 0; pp < cs.n_interior(); ++pp) {
      const int gq = cs.interior_nodes()[pp];
      const Vec2 xp = cs.pos(gq / n3p, gq % n3p);
      mode.vec[g.dof(i1, pp)] =
          std::exp(cd(0, kappa * x1)) *
          std::sin(p * kPi * (xp.x() + a) / (2 * a)) *
          std::sin(q * kPi * (xp.y() + b) / (2 * b));
    }
  }
  mode.lambda_h = 4.0 / (h1 * h1) * wglab::sqr(std::sin(0.5 * kappa * h1)) +
                  4.0 / (h * h) * wglab::sqr(std::sin(0.5 * p * kPi * h / (2 * a))) +
                  4.0 / (h * h) * wglab::sqr(std::sin(0.5 * q * kPi * h / (2 * b)));
  mode.lambda_cont = kappa * kappa + wglab::sqr(p * kPi / (2 * a)) +
                     wglab::sqr(q * kPi / (2 * b));
  return mode;
}

/// Closed form of the scalar Crank-Nicolson recurrence
///   c_{k+1} = r c_k + s,  c_0 = 0,
/// for the source problem on an eigenmode: r = (1 - ic l)/(1 + ic l),
/// s = -i dt/(1 + ic l) with c = dt/2.
inline cd cn_duhamel_coefficient(double lambda, double dt, int k) {
  const cd icl(0.0, 0.5 * dt * lambda);
  const cd r = (1.0 - icl) / (1.0 + icl);
  const cd s = cd(0.0, -dt) / (1.0 + icl);
  return s * (1.0 - std::pow(r, k)) / (1.0 - r);
}

/// Cayley phase factor per step for the homogeneous evolution.
inline cd cn_cayley_factor(double lambda, double dt) {
  const cd icl(0.0, 0.5 * dt * lambda);
  return (1.0 - icl) / (1.0 + icl);
}

}  // namespace wgtest
