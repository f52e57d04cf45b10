// Fibered operator assembly and Crank-Nicolson evolution: discrete symbol,
// self-adjointness, gauge conjugation, Duhamel agreement, unitarity and the
// lifting construction.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "wglab/operator.hpp"
#include "wglab/solve.hpp"

using namespace wglab;
using namespace wgtest;

namespace {

WaveguideGrid grid_n(int n, int n1 = 8, int nt = 64, double T = 1.0) {
  return WaveguideGrid(CrossSection::rectangle(0.5, 0.5, n), n1, T, nt);
}

VectorXcd sample_compact(const WaveguideGrid& g, double theta,
                         double phase_scale = 1.0) {
  // Quasi-periodic smooth field vanishing on the lateral boundary.
  const CrossSection& cs = g.section();
  const double a = cs.half_width_2(), b = cs.half_width_3();
  VectorXcd u(g.n_dof());
  const int n3p = cs.n3() + 1;
  for (int i1 = 0; i1 < g.n1(); ++i1) {
    const double x1 = g.x1(i1);
    for (int p = 0; p < cs.n_interior(); ++p) {
      const int gq = cs.interior_nodes()[p];
      const Vec2 xp = cs.pos(gq / n3p, gq % n3p);
      const double s2 = std::sin(kPi * (xp.x() + a) / (2 * a));
      const double s3 = std::sin(kPi * (xp.y() + b) / (2 * b));
      u[g.dof(i1, p)] = std::exp(cd(0, theta * x1 * phase_scale)) *
                        (1.0 + 0.4 * std::cos(2 * kPi * x1)) *
                        (s2 * s2 * s3 * s3 + 0.3 * s2 * s3);
    }
  }
  return u;
}

}  // namespace

TEST_CASE("free operator reproduces the discrete symbol") {
  const WaveguideGrid g = grid_n(16);
  const MagneticPotential A0 = presets::zero();
  const FiberedOperator op(g, A0, 0.0);
  const EigenMode mode = make_mode(g, 0.0, 1, 1, 1);
  const VectorXcd Hu = op.apply(mode.vec);
  const VectorXcd expect = -mode.lambda_h * mode.vec;
  CHECK((Hu - expect).norm() <= 1e-12 * expect.norm());
}

TEST_CASE("assembled operator is self-adjoint for magnetic potentials") {
  const WaveguideGrid g = grid_n(12, 6, 16);
  const MagneticPotential A = presets::make_potential("swirl_axial", {});
  const FiberedOperator op(g, A, 1.3);
  CHECK(op.self_adjointness_defect(42, 10) <= 1e-12);
}

TEST_CASE("gauge conjugation at the operator level, order >= 1.9") {
  const MagneticPotential A = presets::swirl(0.3, 0.4, 0.0, 0.3);
  const GaugeFunction psi = presets::gauge_box_sine(0.35, 0.5, 0.5, 1);
  const MagneticPotential Ag = gauge_transform(A, psi);
  const double theta = 0.7;

  auto defect = [&](int n) {
    const WaveguideGrid g = grid_n(n, n / 2, 8);
    const CrossSection& cs = g.section();
    const FiberedOperator opA(g, A, theta), opG(g, Ag, theta);
    const VectorXcd u = sample_compact(g, theta);
    // e^{-i psi} H_A (e^{i psi} u) vs H_{A+grad psi} u.
    VectorXcd up(u.size()), lhs(u.size());
    const int n3p = cs.n3() + 1;
    for (int i1 = 0; i1 < g.n1(); ++i1)
      for (int p = 0; p < cs.n_interior(); ++p) {
        const int gq = cs.interior_nodes()[p];
        const Vec2 xp = cs.pos(gq / n3p, gq % n3p);
        up[g.dof(i1, p)] =
            std::exp(cd(0, psi.value(g.x1(i1), xp))) * u[g.dof(i1, p)];
      }
    const VectorXcd HAup = opA.apply(up);
    for (int i1 = 0; i1 < g.n1(); ++i1)
      for (int p = 0; p < cs.n_interior(); ++p) {
        const int gq = cs.interior_nodes()[p];
        const Vec2 xp = cs.pos(gq / n3p, gq % n3p);
        lhs[g.dof(i1, p)] =
            std::exp(cd(0, -psi.value(g.x1(i1), xp))) * HAup[g.dof(i1, p)];
      }
    const VectorXcd rhs = opG.apply(u);
    return g.norm((lhs - rhs).eval()) / g.norm(rhs);
  };
  const double e16 = defect(16), e32 = defect(32);
  CHECK(std::log2(e16 / e32) >= 1.9);
}

TEST_CASE("zero source gives the zero field") {
  const WaveguideGrid g = grid_n(8, 4, 8);
  const MagneticPotential A = presets::swirl(0.3, 0.35, 0.0, 0.2);
  const FiberedOperator op(g, A, 0.4);
  const CrankNicolson cn(op, g.dt());
  const FiberField w = solve_source(cn, SourceTerm::zero(g), Orientation::Forward);
  for (const auto& lev : w.levels) CHECK(lev.norm() == 0.0);
}

TEST_CASE("source solve matches the scalar recurrence oracle") {
  const WaveguideGrid g = grid_n(16, 8, 128);
  const MagneticPotential A0 = presets::zero();
  const double theta = 0.9;
  const FiberedOperator op(g, A0, theta);
  const CrankNicolson cn(op, g.dt());
  const EigenMode mode = make_mode(g, theta, 0, 1, 1);

  SourceTerm f = SourceTerm::analytic(
      [&](double) { return mode.vec; },
      [&](double) { return VectorXcd::Zero(g.n_dof()).eval(); });
  const FiberField w = solve_source(cn, f, Orientation::Forward);

  double worst = 0.0;
  for (int k = 0; k <= g.nt(); ++k) {
    const cd c = cn_duhamel_coefficient(mode.lambda_h, g.dt(), k);
    worst = std::max(worst, (w.levels[k] - c * mode.vec).norm() /
                                mode.vec.norm());
  }
  CHECK(worst <= 1e-8);

  // Discrete L1-in-time bound and its coarse max-form at T = 1.
  const double max_f = g.norm(mode.vec);
  CHECK(w.l2_q() <= g.horizon() * max_f * (1 + 1e-12));
}

TEST_CASE("convergence to the continuum Duhamel solution, order >= 1.9") {
  const double theta = 0.9;
  auto err = [&](int n, int nt) {
    const WaveguideGrid g = grid_n(n, n, nt, 0.5);
    const FiberedOperator op(g, presets::zero(), theta);
    const CrankNicolson cn(op, g.dt());
    const EigenMode mode = make_mode(g, theta, 0, 1, 1);
    SourceTerm f = SourceTerm::analytic(
        [&](double) { return mode.vec; },
        [&](double) { return VectorXcd::Zero(g.n_dof()).eval(); });
    const FiberField w = solve_source(cn, f, Orientation::Forward);
    double worst = 0.0;
    const double lc = mode.lambda_cont;
    for (int k = 0; k <= g.nt(); ++k) {
      const cd c = (std::exp(cd(0, -lc * g.t(k))) - 1.0) / lc;
      worst = std::max(worst,
                       (w.levels[k] - c * mode.vec).norm() / mode.vec.norm());
    }
    return worst;
  };
  const double e1 = err(8, 16), e2 = err(16, 32);
  CHECK(std::log2(e1 / e2) >= 1.9);
}

TEST_CASE("homogeneous evolution is norm-preserving and follows the Cayley phase") {
  const WaveguideGrid g = grid_n(16, 8, 256);
  const double theta = 2.2;
  const FiberedOperator op(g, presets::zero(), theta);
  const CrankNicolson cn(op, g.dt());
  const EigenMode mode = make_mode(g, theta, 1, 2, 1);

  double drift = 0.0;
  const double n0 = g.norm(mode.vec);
  std::vector<LevelFn> obs{[&](int, double, const VectorXcd& u,
                               const VectorXcd*) {
    drift = std::max(drift, std::fabs(g.norm(u) - n0) / n0);
  }};
  const FiberField u = cauchy_evolve(cn, mode.vec, obs);
  CHECK(drift <= 1e-11);

  const cd r = cn_cayley_factor(mode.lambda_h, g.dt());
  double worst = 0.0;
  cd rk = 1.0;
  for (int k = 0; k <= g.nt(); ++k) {
    worst = std::max(worst,
                     (u.levels[k] - rk * mode.vec).norm() / mode.vec.norm());
    rk *= r;
  }
  CHECK(worst <= 1e-11);
}

TEST_CASE("gauge pair evolution: fields related by the gauge phase, order >= 1.9") {
  const MagneticPotential A = presets::swirl(0.3, 0.4, 0.0, 0.3);
  const GaugeFunction psi = presets::gauge_box_sine(0.3, 0.5, 0.5, 1);
  const MagneticPotential Ag = gauge_transform(A, psi);
  const double theta = 0.5;

  auto defect = [&](int n, int nt) {
    const WaveguideGrid g = grid_n(n, n / 2, nt, 0.25);
    const CrossSection& cs = g.section();
    const FiberedOperator opA(g, A, theta), opG(g, Ag, theta);
    const CrankNicolson cnA(opA, g.dt()), cnG(opG, g.dt());
    const VectorXcd u0 = sample_compact(g, theta);
    VectorXcd u0g(u0.size());
    const int n3p = cs.n3() + 1;
    auto phase = [&](int i1, int p) {
      const int gq = cs.interior_nodes()[p];
      const Vec2 xp = cs.pos(gq / n3p, gq % n3p);
      return std::exp(cd(0, -psi.value(g.x1(i1), xp)));
    };
    for (int i1 = 0; i1 < g.n1(); ++i1)
      for (int p = 0; p < cs.n_interior(); ++p)
        u0g[g.dof(i1, p)] = phase(i1, p) * u0[g.dof(i1, p)];
    const FiberField uA = cauchy_evolve(cnA, u0);
    const FiberField uG = cauchy_evolve(cnG, u0g);
    VectorXcd expect(u0.size());
    for (int i1 = 0; i1 < g.n1(); ++i1)
      for (int p = 0; p < cs.n_interior(); ++p)
        expect[g.dof(i1, p)] =
            phase(i1, p) * uA.levels[g.nt()][g.dof(i1, p)];
    return g.norm((uG.levels[g.nt()] - expect).eval()) / g.norm(expect);
  };
  const double e1 = defect(12, 24), e2 = defect(24, 48);
  CHECK(std::log2(e1 / e2) >= 1.9);
}

TEST_CASE("wrap phase is structural") {
  const WaveguideGrid g = grid_n(8, 4, 8);
  const double theta = 1.1;
  const FiberedOperator op(g, presets::zero(), theta);
  const CrankNicolson cn(op, g.dt());
  const EigenMode mode = make_mode(g, theta, 0, 1, 1);
  const FiberField u = cauchy_evolve(cn, mode.vec);
  for (int p = 0; p < g.section().n_interior(); ++p) {
    const cd ghost = u.wrap_value(3, p);
    CHECK(ghost == std::exp(cd(0, theta)) * u.levels[3][g.dof(0, p)]);
  }
}

TEST_CASE("dirichlet solve: contract checks") {
  const WaveguideGrid g = grid_n(12, 6, 32, 0.5);
  const MagneticPotential A = presets::swirl(0.3, 0.35, 0.0, 0.2);
  const double theta = 0.8;
  const FiberedOperator op(g, A, theta);
  const CrankNicolson cn(op, g.dt());

  struct RampLift final : Lift {
    const WaveguideGrid* g;
    VectorXcd base;
    double T;
    bool with_interior_extra;
    RampLift(const WaveguideGrid& gr, VectorXcd b, bool extra)
        : g(&gr), base(std::move(b)), T(gr.horizon()),
          with_interior_extra(extra) {}
    VectorXcd interior(int k) const override {
      const double ramp = sqr(std::sin(kPi * g->t(k) / (2 * T)));
      VectorXcd v = ramp * base;
      if (with_interior_extra && k > 0)
        v += 0.3 * ramp * ramp * base;  // same (zero) trace, different lift
      return v;
    }
    VectorXcd boundary(int k) const override {
      (void)k;
      return VectorXcd::Zero(g->n_bdof());
    }
  };

  // Zero lift -> zero field.
  {
    RampLift W(g, VectorXcd::Zero(g.n_dof()), false);
    const FiberField u = solve_dirichlet(cn, W, Orientation::Forward);
    for (const auto& lev : u.levels) CHECK(lev.norm() <= 1e-14);
  }

  const VectorXcd bumpy = sample_compact(g, theta);

  // Zero-trace lifts: the solution of the homogeneous problem is zero, and
  // it must not depend on which lift produced the (zero) data.
  RampLift W1(g, bumpy, false), W2(g, bumpy, true);
  const FiberField u1 = solve_dirichlet(cn, W1, Orientation::Forward);
  const FiberField u2 = solve_dirichlet(cn, W2, Orientation::Forward);
  double worst = 0.0, mismatch = 0.0;
  for (int k = 0; k <= g.nt(); ++k) {
    worst = std::max(worst, g.norm(u1.levels[k]));
    mismatch = std::max(mismatch, g.norm((u1.levels[k] - u2.levels[k]).eval()));
  }
  CHECK(worst <= 1e-10);
  CHECK(mismatch <= 1e-10);

  // Residual certificate of the emitted field (with its boundary data).
  double res = 0.0;
  for (int k = 0; k < g.nt(); ++k) {
    res = std::max(res, cn.residual(u1.levels[k], u1.levels[k + 1], nullptr,
                                    false, &u1.boundary[k],
                                    &u1.boundary[k + 1]));
  }
  CHECK(res <= 1e-9);

  // A forward lift that does not vanish at t = 0 is rejected.
  struct BadLift final : Lift {
    const WaveguideGrid* g;
    explicit BadLift(const WaveguideGrid& gr) : g(&gr) {}
    VectorXcd interior(int) const override {
      return VectorXcd::Ones(g->n_dof());
    }
    VectorXcd boundary(int) const override {
      return VectorXcd::Zero(g->n_bdof());
    }
  };
  BadLift bad(g);
  CHECK_THROWS_AS(solve_dirichlet(cn, bad, Orientation::Forward), WglabError);
}
