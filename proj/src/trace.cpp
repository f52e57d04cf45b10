#include "wglab/trace.hpp"

#include <array>
#include <cmath>

namespace wglab {

namespace {

// Full-grid value lookup for one time level.
struct LevelView {
  const WaveguideGrid& grid;
  const VectorXcd& u;
  const VectorXcd* g;

  cd operator()(int i1, int gq) const {
    const CrossSection& cs = grid.section();
    const int p = cs.interior_index(gq);
    if (p >= 0) return u[grid.dof(i1, p)];
    if (!g) return 0.0;
    const int q = cs.boundary_index(gq);
    return q >= 0 ? (*g)[grid.bdof(i1, q)] : cd(0.0);
  }
};

}  // namespace

VectorXcd dn_level(const WaveguideGrid& grid, const MagneticPotential& A,
                   const VectorXcd& u, const VectorXcd* g) {
  const CrossSection& cs = grid.section();
  const auto& tn = cs.trace_nodes();
  const double h = cs.spacing();
  VectorXcd out(grid.n1() * static_cast<int>(tn.size()));
  const LevelView view{grid, u, g};
  for (int i1 = 0; i1 < grid.n1(); ++i1) {
    const double x1 = grid.x1(i1);
    for (size_t ti = 0; ti < tn.size(); ++ti) {
      const TraceNode& t = tn[ti];
      const cd gb = g ? (*g)[grid.bdof(i1, t.bgrid)] : cd(0.0);
      cd dnu;
      if (cs.shape() == SectionShape::Rectangle) {
        dnu = (3.0 * gb - 4.0 * view(i1, t.s1) + view(i1, t.s2)) / (2.0 * h);
      } else {
        dnu = 0.0;
        if (t.s1 >= 0) {
          const double sgn = t.normal.x() > 0 ? 1.0 : -1.0;
          dnu += t.normal.x() * sgn * (gb - view(i1, t.s1)) / h;
        }
        if (t.s2 >= 0) {
          const double sgn = t.normal.y() > 0 ? 1.0 : -1.0;
          dnu += t.normal.y() * sgn * (gb - view(i1, t.s2)) / h;
        }
      }
      const Vec3 a = A.value(x1, t.pos);
      const double anu = a.y() * t.normal.x() + a.z() * t.normal.y();
      out[i1 * static_cast<int>(tn.size()) + static_cast<int>(ti)] =
          dnu + kI * anu * gb;
    }
  }
  return out;
}

LateralTrace dn_apply(const WaveguideGrid& grid, const MagneticPotential& A,
                      const FiberField& u) {
  LateralTrace tr;
  tr.grid = &grid;
  tr.levels.reserve(u.levels.size());
  for (size_t k = 0; k < u.levels.size(); ++k) {
    const VectorXcd* g = u.has_boundary() ? &u.boundary[k] : nullptr;
    tr.levels.push_back(dn_level(grid, A, u.levels[k], g));
  }
  return tr;
}

cd sigma_inner(const LateralTrace& a, const LateralTrace& b) {
  const WaveguideGrid& grid = *a.grid;
  const auto& tn = grid.section().trace_nodes();
  const int nt = static_cast<int>(tn.size());
  cd acc = 0.0;
  for (int k = 0; k <= grid.nt(); ++k) {
    const double wt = time_weight(grid, k);
    cd lev = 0.0;
    for (int i1 = 0; i1 < grid.n1(); ++i1)
      for (int ti = 0; ti < nt; ++ti)
        lev += tn[ti].weight * a.levels[k][i1 * nt + ti] *
               std::conj(b.levels[k][i1 * nt + ti]);
    acc += wt * grid.h1() * lev;
  }
  return acc;
}

double sigma_norm(const LateralTrace& a) {
  return std::sqrt(std::real(sigma_inner(a, a)));
}

LateralTrace boundary_trace(const WaveguideGrid& grid, const Lift& W) {
  const auto& tn = grid.section().trace_nodes();
  const int ntr = static_cast<int>(tn.size());
  LateralTrace tr;
  tr.grid = &grid;
  for (int k = 0; k <= grid.nt(); ++k) {
    const VectorXcd g = W.boundary(k);
    VectorXcd lev(grid.n1() * ntr);
    for (int i1 = 0; i1 < grid.n1(); ++i1)
      for (int ti = 0; ti < ntr; ++ti)
        lev[i1 * ntr + ti] = g[grid.bdof(i1, tn[ti].bgrid)];
    tr.levels.push_back(std::move(lev));
  }
  return tr;
}

namespace {

// The ten spatial derivative stencils up to order two, centered at interior
// nodes, with the x1 wrap phase and the Dirichlet ring from the lift data.
std::array<VectorXcd, 10> spatial_stack(const WaveguideGrid& grid,
                                        double theta, const VectorXcd& u,
                                        const VectorXcd& g) {
  const CrossSection& cs = grid.section();
  const int n1 = grid.n1();
  const int ni = cs.n_interior();
  const int n3p = cs.n3() + 1;
  const double ih1 = 1.0 / grid.h1(), ih = 1.0 / cs.spacing();
  const cd up_phase = std::exp(cd(0.0, theta));
  const cd dn_phase = std::exp(cd(0.0, -theta));
  const LevelView view{grid, u, &g};

  auto wrapped = [&](int i1, int gq) -> cd {
    if (i1 >= n1) return up_phase * view(0, gq);
    if (i1 < 0) return dn_phase * view(n1 - 1, gq);
    return view(i1, gq);
  };

  std::array<VectorXcd, 10> st;
  for (auto& v : st) v.resize(grid.n_dof());
  for (int i1 = 0; i1 < n1; ++i1)
    for (int p = 0; p < ni; ++p) {
      const int gq = cs.interior_nodes()[p];
      const int i2 = gq / n3p, i3 = gq % n3p;
      const int row = grid.dof(i1, p);
      auto at = [&](int d1, int d2, int d3) {
        const int j2 = i2 + d2, j3 = i3 + d3;
        if (!cs.in_grid(j2, j3)) return cd(0.0);
        return wrapped(i1 + d1, cs.gidx(j2, j3));
      };
      const cd c = at(0, 0, 0);
      st[0][row] = c;
      st[1][row] = 0.5 * ih1 * (at(1, 0, 0) - at(-1, 0, 0));
      st[2][row] = 0.5 * ih * (at(0, 1, 0) - at(0, -1, 0));
      st[3][row] = 0.5 * ih * (at(0, 0, 1) - at(0, 0, -1));
      st[4][row] = ih1 * ih1 * (at(1, 0, 0) - 2.0 * c + at(-1, 0, 0));
      st[5][row] = ih * ih * (at(0, 1, 0) - 2.0 * c + at(0, -1, 0));
      st[6][row] = ih * ih * (at(0, 0, 1) - 2.0 * c + at(0, 0, -1));
      st[7][row] = 0.25 * ih1 * ih *
                   (at(1, 1, 0) - at(1, -1, 0) - at(-1, 1, 0) + at(-1, -1, 0));
      st[8][row] = 0.25 * ih1 * ih *
                   (at(1, 0, 1) - at(1, 0, -1) - at(-1, 0, 1) + at(-1, 0, -1));
      st[9][row] = 0.25 * ih * ih *
                   (at(0, 1, 1) - at(0, 1, -1) - at(0, -1, 1) + at(0, -1, -1));
    }
  return st;
}

}  // namespace

double trace_norm_surrogate(const WaveguideGrid& grid, double theta,
                            const Lift& W) {
  const int nt = grid.nt();
  if (nt < 2)
    throw WglabError("trace norm surrogate needs at least two time steps");
  const double idt = 1.0 / grid.dt();

  // Ring of the last three spatial stacks; time derivatives are centered
  // inside and one-sided at both ends.
  std::array<std::array<VectorXcd, 10>, 3> ring;
  std::array<VectorXcd, 10> first;  // kept for the k = 0 one-sided formulas

  double acc = 0.0;
  auto add = [&](double wt, const std::array<VectorXcd, 10>& d0,
                 const std::array<VectorXcd, 10>& d1,
                 const std::array<VectorXcd, 10>& d2) {
    // d0/d1/d2: time-derivative orders 0,1,2 of the ten spatial stencils.
    for (int b = 0; b < 10; ++b)
      acc += wt * grid.cell_measure() *
             (d0[b].squaredNorm() + d1[b].squaredNorm() + d2[b].squaredNorm());
  };

  for (int k = 0; k <= nt; ++k) {
    ring[k % 3] = spatial_stack(grid, theta, W.interior(k), W.boundary(k));
    if (k == 0) first = ring[0];
    if (k < 2) continue;
    const auto& a = ring[(k - 2) % 3];
    const auto& b = ring[(k - 1) % 3];
    const auto& c = ring[k % 3];
    std::array<VectorXcd, 10> d1, d2;
    for (int i = 0; i < 10; ++i) {
      d1[i] = 0.5 * idt * (c[i] - a[i]);
      d2[i] = idt * idt * (c[i] - 2.0 * b[i] + a[i]);
    }
    add(time_weight(grid, k - 1), b, d1, d2);
    if (k == 2) {  // one-sided values at the initial level
      std::array<VectorXcd, 10> e1, e2;
      for (int i = 0; i < 10; ++i) {
        e1[i] = 0.5 * idt * (-3.0 * first[i] + 4.0 * b[i] - c[i]);
        e2[i] = idt * idt * (first[i] - 2.0 * b[i] + c[i]);
      }
      add(time_weight(grid, 0), first, e1, e2);
    }
    if (k == nt) {  // one-sided values at the terminal level
      std::array<VectorXcd, 10> e1, e2;
      for (int i = 0; i < 10; ++i) {
        e1[i] = 0.5 * idt * (3.0 * c[i] - 4.0 * b[i] + a[i]);
        e2[i] = idt * idt * (c[i] - 2.0 * b[i] + a[i]);
      }
      add(time_weight(grid, nt), c, e1, e2);
    }
  }
  return std::sqrt(acc);
}

}  // namespace wglab
