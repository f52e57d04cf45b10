#include "wglab/solve.hpp"

#include <cmath>

namespace wglab {

cd FiberField::wrap_value(int k, int p_interior) const {
  return std::exp(cd(0.0, theta)) * levels[k][p_interior];
}

double FiberField::l2_q() const {
  double s = 0.0;
  for (int k = 0; k <= grid->nt(); ++k)
    s += time_weight(*grid, k) * grid->cell_measure() *
         levels[k].squaredNorm();
  return std::sqrt(s);
}

SourceTerm SourceTerm::zero(const WaveguideGrid& g) {
  const int n = g.n_dof();
  auto z = [n](double) { return VectorXcd::Zero(n).eval(); };
  return {z, z};
}

SourceTerm SourceTerm::analytic(std::function<VectorXcd(double)> v,
                                std::function<VectorXcd(double)> dv) {
  return {std::move(v), std::move(dv)};
}

VectorXcd FieldLift::boundary(int k) const {
  if (field->has_boundary()) return field->boundary[k];
  const WaveguideGrid& g = *field->grid;
  return VectorXcd::Zero(g.n_bdof());
}

VectorXcd run_homogeneous(const CrankNicolson& cn, const SourceTerm& f,
                          Orientation orient,
                          const std::vector<LevelFn>& observers) {
  const WaveguideGrid& g = cn.op().grid();
  const int nt = g.nt();
  VectorXcd u = VectorXcd::Zero(g.n_dof());
  auto emit = [&](int k, const VectorXcd& v) {
    for (const auto& ob : observers) ob(k, g.t(k), v, nullptr);
  };
  if (orient == Orientation::Forward) {
    emit(0, u);
    for (int k = 0; k < nt; ++k) {
      const VectorXcd fh = f.value(g.t(k) + 0.5 * g.dt());
      u = cn.forward(u, &fh);
      emit(k + 1, u);
    }
  } else {
    emit(nt, u);
    for (int k = nt; k > 0; --k) {
      const VectorXcd fh = f.value(g.t(k) - 0.5 * g.dt());
      u = cn.backward(u, &fh);
      emit(k - 1, u);
    }
  }
  return u;
}

FiberField solve_source(const CrankNicolson& cn, const SourceTerm& f,
                        Orientation orient) {
  const WaveguideGrid& g = cn.op().grid();
  FiberField out;
  out.theta = cn.op().theta();
  out.orientation = orient;
  out.grid = &g;
  out.levels.assign(g.nt() + 1, VectorXcd());
  std::vector<LevelFn> obs{[&out](int k, double, const VectorXcd& u,
                                  const VectorXcd*) { out.levels[k] = u; }};
  run_homogeneous(cn, f, orient, obs);
  return out;
}

FiberField cauchy_evolve(const CrankNicolson& cn, const VectorXcd& u0,
                         const std::vector<LevelFn>& observers, bool store) {
  const WaveguideGrid& g = cn.op().grid();
  FiberField out;
  out.theta = cn.op().theta();
  out.grid = &g;
  if (store) out.levels.assign(g.nt() + 1, VectorXcd());
  VectorXcd u = u0;
  auto emit = [&](int k, const VectorXcd& v) {
    if (store) out.levels[k] = v;
    for (const auto& ob : observers) ob(k, g.t(k), v, nullptr);
  };
  emit(0, u);
  for (int k = 0; k < g.nt(); ++k) {
    u = cn.forward(u, nullptr);
    emit(k + 1, u);
  }
  if (!store) out.levels.push_back(u);
  return out;
}

FiberField solve_dirichlet(const CrankNicolson& cn, const Lift& W,
                           Orientation orient,
                           const std::vector<LevelFn>& observers, bool store) {
  const WaveguideGrid& g = cn.op().grid();
  const FiberedOperator& op = cn.op();
  const int nt = g.nt();
  const double dt = g.dt();

  FiberField out;
  out.theta = op.theta();
  out.orientation = orient;
  out.grid = &g;
  if (store) {
    out.levels.assign(nt + 1, VectorXcd());
    out.boundary.assign(nt + 1, VectorXcd());
  }

  // w solves the homogeneous-boundary problem with the discrete residual of
  // the lift as source; u = W - w then satisfies the stepped equation with
  // the lift's boundary values exactly.
  VectorXcd w = VectorXcd::Zero(g.n_dof());
  auto emit = [&](int k, const VectorXcd& wk, const VectorXcd& Wk,
                  const VectorXcd& gk) {
    const VectorXcd u = Wk - wk;
    if (store) {
      out.levels[k] = u;
      out.boundary[k] = gk;
    }
    for (const auto& ob : observers) ob(k, g.t(k), u, &gk);
  };

  if (orient == Orientation::Forward) {
    VectorXcd Wk = W.interior(0), gk = W.boundary(0);
    if (Wk.norm() != 0.0)
      throw WglabError("solve_dirichlet: forward lift must vanish at t = 0");
    emit(0, w, Wk, gk);
    for (int k = 0; k < nt; ++k) {
      const VectorXcd Wn = W.interior(k + 1), gn = W.boundary(k + 1);
      VectorXcd fh = cd(0.0, 1.0 / dt) * (Wn - Wk) +
                     op.apply_full((0.5 * (Wk + Wn)).eval(),
                                   (0.5 * (gk + gn)).eval());
      w = cn.forward(w, &fh);
      Wk = Wn;
      gk = gn;
      emit(k + 1, w, Wk, gk);
    }
  } else {
    VectorXcd Wk = W.interior(nt), gk = W.boundary(nt);
    if (Wk.norm() != 0.0)
      throw WglabError("solve_dirichlet: backward lift must vanish at t = T");
    emit(nt, w, Wk, gk);
    for (int k = nt; k > 0; --k) {
      const VectorXcd Wn = W.interior(k - 1), gn = W.boundary(k - 1);
      VectorXcd fh = cd(0.0, 1.0 / dt) * (Wk - Wn) +
                     op.apply_full((0.5 * (Wk + Wn)).eval(),
                                   (0.5 * (gk + gn)).eval());
      w = cn.backward(w, &fh);
      Wk = Wn;
      gk = gn;
      emit(k - 1, w, Wk, gk);
    }
  }
  return out;
}

double grad_sq_cell(const WaveguideGrid& grid, double theta,
                    const VectorXcd& u, const VectorXcd* g) {
  const CrossSection& cs = grid.section();
  const int n1 = grid.n1();
  const int n3p = cs.n3() + 1;
  const double ih1 = 1.0 / grid.h1();
  const double ih = 1.0 / cs.spacing();
  const cd wrap = std::exp(cd(0.0, theta));
  double acc = 0.0;
  auto bval = [&](int i1, int gq) -> cd {
    if (!g) return 0.0;
    const int q = cs.boundary_index(gq);
    return q >= 0 ? (*g)[grid.bdof(i1, q)] : cd(0.0);
  };
  for (int i1 = 0; i1 < n1; ++i1)
    for (int p = 0; p < cs.n_interior(); ++p) {
      const int gq = cs.interior_nodes()[p];
      const int i2 = gq / n3p, i3 = gq % n3p;
      const cd up = u[grid.dof(i1, p)];
      // x1 edge with phase wrap.
      const cd unext = (i1 + 1 < n1) ? u[grid.dof(i1 + 1, p)]
                                     : wrap * u[grid.dof(0, p)];
      acc += std::norm((unext - up) * ih1);
      // +x2/+x3 edges; -direction edges only when they leave the interior.
      const int nb[4][3] = {{i2 + 1, i3, +1},
                            {i2, i3 + 1, +1},
                            {i2 - 1, i3, -1},
                            {i2, i3 - 1, -1}};
      for (const auto& e : nb) {
        if (!cs.in_grid(e[0], e[1])) continue;
        const int gn = cs.gidx(e[0], e[1]);
        const int pi = cs.interior_index(gn);
        if (e[2] > 0) {
          const cd un = pi >= 0 ? u[grid.dof(i1, pi)] : bval(i1, gn);
          acc += std::norm((un - up) * ih);
        } else if (pi < 0) {
          acc += std::norm((up - bval(i1, gn)) * ih);
        }
      }
    }
  return acc * grid.cell_measure();
}

}  // namespace wglab
