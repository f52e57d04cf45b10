// Lateral boundary traces: the magnetic Neumann trace (d_nu + i A.nu)u on
// the space-time boundary grid, the L2(Sigma) pairing, and the
// H2(0,T;H2)-type grid norm of Dirichlet lifts used as the trace-space
// surrogate.

#pragma once

#include <vector>

#include "wglab/solve.hpp"

namespace wglab {

/// Complex samples on (0,T) x (0,1) x boundary trace nodes.
struct LateralTrace {
  const WaveguideGrid* grid = nullptr;
  std::vector<VectorXcd> levels;  // nt+1 vectors of size n1 * n_trace

  int tdof(int i1, int ti) const {
    return i1 * static_cast<int>(grid->section().trace_nodes().size()) + ti;
  }
};

/// Neumann trace of one time level. `u` holds interior dofs, `g` the
/// Dirichlet boundary values of the same field (null for homogeneous).
/// Rectangle: one-sided 3-point normal derivative (second order);
/// disk: componentwise first-order differences toward the interior.
VectorXcd dn_level(const WaveguideGrid& grid, const MagneticPotential& A,
                   const VectorXcd& u, const VectorXcd* g);

/// Trace of a stored field.
LateralTrace dn_apply(const WaveguideGrid& grid, const MagneticPotential& A,
                      const FiberField& u);

/// L2(Sigma) inner product (trapezoid in t, uniform in x1, arc weights).
cd sigma_inner(const LateralTrace& a, const LateralTrace& b);
double sigma_norm(const LateralTrace& a);

/// Dirichlet data of a lift restricted to the trace nodes, as a LateralTrace.
LateralTrace boundary_trace(const WaveguideGrid& grid, const Lift& W);

/// Grid H2(0,T;H2(cell)) norm of a lift: all time derivatives up to order
/// two of all spatial derivatives up to order two, trapezoid in time.
/// No infimum over lifts is taken; this is the documented surrogate for the
/// trace-space norm of the boundary datum carried by the lift.
double trace_norm_surrogate(const WaveguideGrid& grid, double theta,
                            const Lift& W);

}  // namespace wglab
