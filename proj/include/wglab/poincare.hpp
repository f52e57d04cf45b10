// Smallest Dirichlet Laplacian eigenvalue of the cross-section via shifted
// inverse power iteration, the Poincare constant 1/lambda_1, and the
// admissibility margin of a magnetic potential.

#pragma once

#include <Eigen/SparseCore>

#include "wglab/geometry.hpp"

namespace wglab {

class MagneticPotential;

/// 5-point Dirichlet Laplacian (positive definite, -Delta) on interior nodes.
Eigen::SparseMatrix<double> section_laplacian(const CrossSection& cs);

struct EigenResult {
  double lambda = 0.0;   // smallest eigenvalue of -Delta_h
  int iterations = 0;
  double residual = 0.0; // |lambda_k - lambda_{k-1}| / lambda_k at exit
};

/// Smallest eigenvalue by inverse power iteration with optional shift.
/// Converged when the relative eigenvalue change drops below `tol`.
EigenResult smallest_dirichlet_eigenvalue(const CrossSection& cs,
                                          double shift = 0.0,
                                          double tol = 1e-10,
                                          int max_iters = 10000);

/// Poincare constant C(Omega') = 1/lambda_1 of the discrete cross-section.
double poincare_constant(const CrossSection& cs);

/// (sqrt(2)-1)/sqrt(C) minus the sampled sup-norm of |A|; positive iff the
/// potential is admissible at sampling resolution. The sup is taken on a
/// grid 4x finer than the PDE grid, so the margin is an upper bound.
double admissibility_margin(const MagneticPotential& A, const CrossSection& cs);

/// Sampled sup over the cell of the Euclidean norm |A(x)| (4x finer grid).
double sampled_sup_norm(const MagneticPotential& A, const CrossSection& cs);

}  // namespace wglab
