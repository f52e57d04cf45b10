#include "wglab/operator.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <cmath>
#include <random>
#include <vector>

namespace wglab {

FiberedOperator::FiberedOperator(const WaveguideGrid& grid,
                                 const MagneticPotential& A, double theta)
    : grid_(grid), A_(&A), theta_(theta) {
  const CrossSection& cs = grid_.section();
  const int n1 = grid_.n1();
  const int ni = cs.n_interior();
  const double h1 = grid_.h1();
  const double h = cs.spacing();
  const cd wrap_up = std::exp(cd(0.0, +theta));  // crossing the x1 = 1 face
  const cd wrap_dn = std::exp(cd(0.0, -theta));  // crossing the x1 = 0 face
  const int n3p = cs.n3() + 1;

  std::vector<Eigen::Triplet<cd>> th, tb;
  th.reserve(static_cast<size_t>(7) * n1 * ni);

  for (int i1 = 0; i1 < n1; ++i1) {
    const double x1 = grid_.x1(i1);
    for (int p = 0; p < ni; ++p) {
      const int g = cs.interior_nodes()[p];
      const int i2 = g / n3p, i3 = g % n3p;
      const Vec2 xp = cs.pos(i2, i3);
      const int row = grid_.dof(i1, p);
      const Vec3 a = A_->value(x1, xp);

      th.emplace_back(row, row,
                      cd(-2.0 / (h1 * h1) - 4.0 / (h * h) - a.squaredNorm()));

      // x1 neighbors wrap with the fiber phase. The magnetic convection is
      // assembled in the symmetrized form i(A.grad + div(A .)), which keeps
      // the matrix Hermitian without any analytic div(A) term.
      for (int s : {+1, -1}) {
        int j1 = i1 + s;
        cd phase = 1.0;
        if (j1 >= n1) {
          j1 = 0;
          phase = wrap_up;
        } else if (j1 < 0) {
          j1 = n1 - 1;
          phase = wrap_dn;
        }
        const double a1_nb = A_->component(1, x1 + s * h1, xp);
        const cd coef = cd(1.0 / (h1 * h1)) +
                        cd(0.0, s * (a.x() + a1_nb) / (2.0 * h1));
        th.emplace_back(row, grid_.dof(j1, p), phase * coef);
      }

      const int nb[4][3] = {{i2 + 1, i3, 2},
                            {i2 - 1, i3, 2},
                            {i2, i3 + 1, 3},
                            {i2, i3 - 1, 3}};
      for (const auto& e : nb) {
        const int j2 = e[0], j3 = e[1], axis = e[2];
        if (!cs.in_grid(j2, j3)) continue;
        const Vec2 xq = cs.pos(j2, j3);
        const int dir = (axis == 2 ? (j2 - i2) : (j3 - i3));
        const double a_nb = A_->component(axis, x1, xq);
        const double a_c = (axis == 2) ? a.y() : a.z();
        const cd coef =
            cd(1.0 / (h * h)) + cd(0.0, dir * (a_c + a_nb) / (2.0 * h));
        const int gq = cs.gidx(j2, j3);
        if (cs.interior_index(gq) >= 0) {
          th.emplace_back(row, grid_.dof(i1, cs.interior_index(gq)), coef);
        } else if (cs.boundary_index(gq) >= 0) {
          tb.emplace_back(row, grid_.bdof(i1, cs.boundary_index(gq)), coef);
        }
      }
    }
  }

  H_.resize(grid_.n_dof(), grid_.n_dof());
  H_.setFromTriplets(th.begin(), th.end());
  B_.resize(grid_.n_dof(), grid_.n_bdof());
  B_.setFromTriplets(tb.begin(), tb.end());
}

double FiberedOperator::self_adjointness_defect(unsigned seed,
                                                int trials) const {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    VectorXcd u(grid_.n_dof()), v(grid_.n_dof());
    for (int i = 0; i < u.size(); ++i) {
      u[i] = cd(gauss(rng), gauss(rng));
      v[i] = cd(gauss(rng), gauss(rng));
    }
    const cd lhs = grid_.inner(H_ * u, v);
    const cd rhs = grid_.inner(u, H_ * v);
    worst = std::max(worst,
                     std::abs(lhs - rhs) / (grid_.norm(u) * grid_.norm(v)));
  }
  return worst;
}

struct CrankNicolson::Backend {
  SolverBackend kind = SolverBackend::DirectLU;
  double tol = 1e-12;
  Eigen::SparseMatrix<cd> Mplus, Mminus;
  Eigen::SparseLU<Eigen::SparseMatrix<cd>> lu_plus, lu_minus;
  bool plus_ready = false, minus_ready = false;
  Eigen::BiCGSTAB<Eigen::SparseMatrix<cd>, Eigen::IncompleteLUT<cd>> it_plus,
      it_minus;
  Eigen::BiCGSTAB<Eigen::SparseMatrix<cd>> itd_plus, itd_minus;
};

CrankNicolson::CrankNicolson(const FiberedOperator& op, double dt,
                             SolverBackend backend, double tol)
    : op_(op), dt_(dt), ic_(cd(0.0, 0.5 * dt)), be_(new Backend) {
  be_->tol = tol;
  if (backend == SolverBackend::Auto) {
    backend = op.grid().n_dof() <= 70000 ? SolverBackend::DirectLU
                                         : SolverBackend::IterILUT;
  }
  be_->kind = backend;
  Eigen::SparseMatrix<cd> id(op.grid().n_dof(), op.grid().n_dof());
  id.setIdentity();
  be_->Mplus = id - ic_ * op.matrix();
  be_->Mminus = id + ic_ * op.matrix();
  switch (backend) {
    case SolverBackend::IterILUT:
      be_->it_plus.setTolerance(tol);
      be_->it_minus.setTolerance(tol);
      be_->it_plus.setMaxIterations(4000);
      be_->it_minus.setMaxIterations(4000);
      be_->it_plus.compute(be_->Mplus);
      be_->it_minus.compute(be_->Mminus);
      break;
    case SolverBackend::IterDiag:
      be_->itd_plus.setTolerance(tol);
      be_->itd_minus.setTolerance(tol);
      be_->itd_plus.setMaxIterations(8000);
      be_->itd_minus.setMaxIterations(8000);
      be_->itd_plus.compute(be_->Mplus);
      be_->itd_minus.compute(be_->Mminus);
      break;
    default:
      break;  // LU factorized lazily per direction
  }
}

CrankNicolson::~CrankNicolson() = default;

namespace {
template <typename Solver>
VectorXcd iterate(Solver& s, const Eigen::SparseMatrix<cd>& M,
                  const VectorXcd& rhs, double contract) {
  const VectorXcd x = s.solve(rhs);
  const double res = (M * x - rhs).norm() / rhs.norm();
  if (!(res <= contract))
    throw WglabError("CN step: iterative solve stalled, residual " +
                     std::to_string(res) + " after " +
                     std::to_string(s.iterations()) + " iterations");
  return x;
}
}  // namespace

VectorXcd CrankNicolson::solve_plus(const VectorXcd& rhs) const {
  switch (be_->kind) {
    case SolverBackend::IterILUT:
      return iterate(be_->it_plus, be_->Mplus, rhs, 1e-10);
    case SolverBackend::IterDiag:
      return iterate(be_->itd_plus, be_->Mplus, rhs, 1e-10);
    default: {
      if (!be_->plus_ready) {
        be_->lu_plus.compute(be_->Mplus);
        if (be_->lu_plus.info() != Eigen::Success)
          throw WglabError("CN step: LU factorization failed");
        be_->plus_ready = true;
      }
      return be_->lu_plus.solve(rhs);
    }
  }
}

VectorXcd CrankNicolson::solve_minus(const VectorXcd& rhs) const {
  switch (be_->kind) {
    case SolverBackend::IterILUT:
      return iterate(be_->it_minus, be_->Mminus, rhs, 1e-10);
    case SolverBackend::IterDiag:
      return iterate(be_->itd_minus, be_->Mminus, rhs, 1e-10);
    default: {
      if (!be_->minus_ready) {
        be_->lu_minus.compute(be_->Mminus);
        if (be_->lu_minus.info() != Eigen::Success)
          throw WglabError("CN step: LU factorization failed");
        be_->minus_ready = true;
      }
      return be_->lu_minus.solve(rhs);
    }
  }
}

VectorXcd CrankNicolson::forward(const VectorXcd& u,
                                 const VectorXcd* f_half) const {
  VectorXcd rhs = u + ic_ * (op_.matrix() * u);
  if (f_half) rhs -= cd(0.0, dt_) * (*f_half);
  return solve_plus(rhs);
}

VectorXcd CrankNicolson::backward(const VectorXcd& u_next,
                                  const VectorXcd* f_half) const {
  VectorXcd rhs = u_next - ic_ * (op_.matrix() * u_next);
  if (f_half) rhs += cd(0.0, dt_) * (*f_half);
  return solve_minus(rhs);
}

double CrankNicolson::residual(const VectorXcd& u0, const VectorXcd& u1,
                               const VectorXcd* f_half, bool homogeneous_bc,
                               const VectorXcd* g0,
                               const VectorXcd* g1) const {
  VectorXcd mid = 0.5 * (u0 + u1);
  VectorXcd r = cd(0.0, 1.0 / dt_) * (u1 - u0) + op_.matrix() * mid;
  if (!homogeneous_bc && g0 && g1)
    r += op_.boundary_matrix() * (0.5 * (*g0 + *g1)).eval();
  if (f_half) r -= *f_half;
  return op_.grid().norm(r);
}

}  // namespace wglab
