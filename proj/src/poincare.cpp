#include "wglab/poincare.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <vector>

#include "wglab/fields.hpp"

namespace wglab {

Eigen::SparseMatrix<double> section_laplacian(const CrossSection& cs) {
  const int n = cs.n_interior();
  const double ih2 = 1.0 / (cs.spacing() * cs.spacing());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(5 * n);
  const int n3p = cs.n3() + 1;
  for (int row = 0; row < n; ++row) {
    const int g = cs.interior_nodes()[row];
    const int i2 = g / n3p, i3 = g % n3p;
    trip.emplace_back(row, row, 4.0 * ih2);
    const int nbs[4][2] = {{i2 - 1, i3}, {i2 + 1, i3}, {i2, i3 - 1}, {i2, i3 + 1}};
    for (const auto& nb : nbs) {
      if (!cs.in_grid(nb[0], nb[1])) continue;
      const int col = cs.interior_index(cs.gidx(nb[0], nb[1]));
      if (col >= 0) trip.emplace_back(row, col, -ih2);
    }
  }
  Eigen::SparseMatrix<double> L(n, n);
  L.setFromTriplets(trip.begin(), trip.end());
  return L;
}

EigenResult smallest_dirichlet_eigenvalue(const CrossSection& cs, double shift,
                                          double tol, int max_iters) {
  const Eigen::SparseMatrix<double> L = section_laplacian(cs);
  const int n = cs.n_interior();
  Eigen::SparseMatrix<double> Ls = L;
  if (shift != 0.0) {
    Eigen::SparseMatrix<double> id(n, n);
    id.setIdentity();
    Ls = L - shift * id;
  }
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> llt(Ls);
  if (llt.info() != Eigen::Success)
    throw WglabError("eigensolve: factorization of the shifted Laplacian failed");

  // Deterministic start vector with nonzero overlap with the ground mode.
  VectorXd x(n);
  for (int i = 0; i < n; ++i) {
    const Vec2 p = cs.pos_g(cs.interior_nodes()[i]);
    x[i] = 1.0 + 0.01 * p.x() + 0.007 * p.y();
  }
  x.normalize();

  double lambda = x.dot(L * x);
  EigenResult res;
  for (int it = 1; it <= max_iters; ++it) {
    x = llt.solve(x);
    x.normalize();
    const double next = x.dot(L * x);
    res.iterations = it;
    res.residual = std::fabs(next - lambda) / std::fabs(next);
    lambda = next;
    if (res.residual < tol) {
      res.lambda = lambda;
      return res;
    }
  }
  throw WglabError("eigensolve: no convergence after " +
                   std::to_string(max_iters) +
                   " iterations, residual " + std::to_string(res.residual));
}

double poincare_constant(const CrossSection& cs) {
  return 1.0 / smallest_dirichlet_eigenvalue(cs).lambda;
}

double sampled_sup_norm(const MagneticPotential& A, const CrossSection& cs) {
  const int refine = 4;
  const int m2 = refine * cs.n2(), m3 = refine * cs.n3();
  const double h = cs.spacing() / refine;
  const int m1 = 4 * 16;
  double sup = 0.0;
  for (int i1 = 0; i1 < m1; ++i1) {
    const double x1 = static_cast<double>(i1) / m1;
    for (int i2 = 0; i2 <= m2; ++i2)
      for (int i3 = 0; i3 <= m3; ++i3) {
        const Vec2 xp(-cs.half_width_2() + i2 * h, -cs.half_width_3() + i3 * h);
        if (cs.shape() == SectionShape::Disk &&
            xp.norm() > cs.enclosing_radius())
          continue;
        sup = std::max(sup, A.value(x1, xp).norm());
      }
  }
  return sup;
}

double admissibility_margin(const MagneticPotential& A,
                            const CrossSection& cs) {
  const double bound = (std::sqrt(2.0) - 1.0) / std::sqrt(poincare_constant(cs));
  return bound - sampled_sup_norm(A, cs);
}

}  // namespace wglab
