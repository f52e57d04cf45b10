// Discrete fibered magnetic Schrodinger operator on the period cell:
// second-order stencil with quasi-periodic phase wrap in x1, eliminated
// Dirichlet rows, symmetrized magnetic convection (Hermitian by
// construction), and the Crank-Nicolson step solvers built on top of it.

#pragma once

#include <Eigen/SparseCore>
#include <memory>

#include "wglab/fields.hpp"
#include "wglab/geometry.hpp"

namespace wglab {

class FiberedOperator {
 public:
  FiberedOperator(const WaveguideGrid& grid, const MagneticPotential& A,
                  double theta);

  const WaveguideGrid& grid() const { return grid_; }
  const MagneticPotential& potential() const { return *A_; }
  double theta() const { return theta_; }

  /// Interior-to-interior part (Hermitian).
  const Eigen::SparseMatrix<cd>& matrix() const { return H_; }
  /// Coupling of interior rows to Dirichlet boundary values.
  const Eigen::SparseMatrix<cd>& boundary_matrix() const { return B_; }

  VectorXcd apply(const VectorXcd& u) const { return H_ * u; }
  VectorXcd apply_full(const VectorXcd& u, const VectorXcd& g) const {
    return H_ * u + B_ * g;
  }

  /// Max |<Hu,v> - <u,Hv>| over a few random pairs (self-adjointness probe).
  double self_adjointness_defect(unsigned seed = 1, int trials = 10) const;

 private:
  WaveguideGrid grid_;
  const MagneticPotential* A_;
  double theta_;
  Eigen::SparseMatrix<cd> H_, B_;
};

enum class SolverBackend { Auto, DirectLU, IterDiag, IterILUT };

/// One Crank-Nicolson step in either time direction:
///   forward:  (I - ic H) u_{k+1} = (I + ic H) u_k - i dt f_{k+1/2}
///   backward: (I + ic H) u_k = (I - ic H) u_{k+1} + i dt f_{k+1/2}
/// with c = dt/2. The Cayley map is unitary, so homogeneous stepping
/// preserves the discrete norm up to solver accuracy.
class CrankNicolson {
 public:
  CrankNicolson(const FiberedOperator& op, double dt,
                SolverBackend backend = SolverBackend::Auto,
                double tol = 1e-12);
  ~CrankNicolson();

  VectorXcd forward(const VectorXcd& u, const VectorXcd* f_half) const;
  VectorXcd backward(const VectorXcd& u_next, const VectorXcd* f_half) const;

  const FiberedOperator& op() const { return op_; }
  double dt() const { return dt_; }

  /// CN residual of a consecutive level pair against the half-step source.
  double residual(const VectorXcd& u0, const VectorXcd& u1,
                  const VectorXcd* f_half, bool homogeneous_bc = true,
                  const VectorXcd* g0 = nullptr,
                  const VectorXcd* g1 = nullptr) const;

 private:
  struct Backend;
  VectorXcd solve_plus(const VectorXcd& rhs) const;
  VectorXcd solve_minus(const VectorXcd& rhs) const;

  const FiberedOperator& op_;
  double dt_;
  cd ic_;  // i*dt/2
  std::unique_ptr<Backend> be_;
};

}  // namespace wglab
