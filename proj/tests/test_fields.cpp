// Potential presets, curl components, gauge transforms and certified pairs.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wglab/fields.hpp"
#include "wglab/geometry.hpp"

using namespace wglab;

TEST_CASE("periodicity and support invariants") {
  MagneticPotential A = presets::swirl(0.5, 0.35, 0.0, 0.3);
  CHECK(periodicity_defect(A) <= 1e-12);
  CHECK(support_defect(A, A.support_radius()) == 0.0);
  MagneticPotential B = presets::axial(0.2, 0.3);
  CHECK(periodicity_defect(B) <= 1e-12);
  CHECK(support_defect(B, B.support_radius()) == 0.0);
}

TEST_CASE("constant-field swirl has aligned component -1 on the plateau") {
  // a2 = -x3/2 * C, a3 = +x2/2 * C with a flat-top cutoff.
  MagneticPotential A = presets::swirl(0.5, 0.4, 0.5, 0.0);
  auto b23 = curl_component(A, 2, 3);
  CHECK(b23(0.0, Vec2(0.0, 0.0)) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(b23(0.7, Vec2(0.1, -0.05)) == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(b23(0.2, Vec2(0.12, 0.12)) == doctest::Approx(-1.0).epsilon(1e-13));
  // Outside the support the field vanishes.
  CHECK(b23(0.0, Vec2(0.45, 0.0)) == 0.0);
}

TEST_CASE("curl antisymmetry at random points") {
  MagneticPotential A = presets::swirl(0.4, 0.35, 0.0, 0.25);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int t = 0; t < 100; ++t) {
    const double x1 = u(rng) + 0.5;
    const Vec2 xp(0.6 * u(rng), 0.6 * u(rng));
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j) {
        if (i == j) continue;
        const double bij = curl_component(A, i, j)(x1, xp);
        const double bji = curl_component(A, j, i)(x1, xp);
        CHECK(std::fabs(bij + bji) <= 1e-14 * (1.0 + std::fabs(bij)));
      }
  }
  CHECK_THROWS_AS(curl_component(A, 2, 2), WglabError);
}

TEST_CASE("pure gradient potentials carry no field") {
  GaugeFunction psi = presets::gauge_bump(0.4, 0.4, 1);
  MagneticPotential grad_psi = gauge_transform(presets::zero(), psi);
  auto b23 = curl_component(grad_psi, 2, 3);
  for (int t = 0; t < 25; ++t) {
    const double x1 = 0.04 * t;
    const Vec2 xp(0.3 * std::cos(1.7 * t), 0.3 * std::sin(0.9 * t));
    CHECK(std::fabs(b23(x1, xp)) <= 1e-13);
  }
}

TEST_CASE("gauge transform leaves the field invariant") {
  MagneticPotential A = presets::swirl(0.5, 0.35, 0.0, 0.3);
  GaugeFunction psi = presets::gauge_bump(0.3, 0.4, 1);
  MagneticPotential Ag = gauge_transform(A, psi);

  auto b = curl_component(A, 2, 3);
  auto bg = curl_component(Ag, 2, 3);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.38, 0.38);
  for (int t = 0; t < 50; ++t) {
    const double x1 = 0.02 * t;
    const Vec2 xp(u(rng), u(rng));
    CHECK(bg(x1, xp) == doctest::Approx(b(x1, xp)).epsilon(1e-10));
  }

  // Finite-difference cross-check that curl(grad psi) vanishes; the
  // tolerance reflects FD truncation against bump third derivatives.
  const double h = 1e-4;
  for (int t = 0; t < 10; ++t) {
    const Vec2 xp(u(rng), u(rng));
    const double x1 = 0.1 * t;
    auto a2 = [&](const Vec2& q) { return psi.grad(x1, q)[1]; };
    auto a3 = [&](const Vec2& q) { return psi.grad(x1, q)[2]; };
    const double d3a2 =
        (a2(xp + Vec2(0, h)) - a2(xp - Vec2(0, h))) / (2 * h);
    const double d2a3 =
        (a3(xp + Vec2(h, 0)) - a3(xp - Vec2(h, 0))) / (2 * h);
    CHECK(std::fabs(d3a2 - d2a3) <= 1e-4);
  }
}

TEST_CASE("certified pair and extension by zero") {
  CrossSection cs = CrossSection::rectangle(0.5, 0.5, 16);
  MagneticPotential A1 = presets::swirl(0.25, 0.35, 0.0, 0.3);
  MagneticPotential B = presets::swirl(1.0, 0.3, 0.0, 0.3, "pert");
  MagneticPotential A2 = presets::combine(A1, B, 0.1, "A2");
  PotentialPair pair(A1, A2, cs);
  CHECK(pair.margin_first() > 0);
  CHECK(pair.margin_second() > 0);

  auto ext = extend_by_zero(pair);
  CHECK(ext(0.2, Vec2(2.0, 1.0)) == Vec2::Zero());
  const Vec2 inside = ext(0.2, Vec2(0.1, 0.05));
  CHECK(inside.norm() > 0);
  CHECK(inside[0] == doctest::Approx(A2.component(2, 0.2, Vec2(0.1, 0.05)) -
                                     A1.component(2, 0.2, Vec2(0.1, 0.05)))
                         .epsilon(1e-15));

  // Centered differences across the lateral boundary: no jump.
  const double h = 1e-4;
  for (int t = 0; t < 20; ++t) {
    const double ang = 2 * kPi * t / 20.0;
    const Vec2 p0(0.5, -0.5 + t / 19.0);  // points on the x2 = +a edge
    const Vec2 dir(std::cos(ang), std::sin(ang));
    const Vec2 jump =
        (ext(0.3, p0 + h * dir) - ext(0.3, p0 - h * dir)) / (2 * h);
    CHECK(jump.norm() * h <= 1e-6);  // scaled difference stays smooth
  }

  // A pair whose difference reaches the boundary is rejected.
  MagneticPotential wide = presets::swirl(0.05, 0.9, 0.0, 0.0, "wide");
  CHECK_THROWS_AS(PotentialPair(A1, presets::combine(A1, wide, 1.0, "bad"), cs),
                  WglabError);
}

TEST_CASE("difference H1 seminorm stays bounded under refinement") {
  MagneticPotential A1 = presets::swirl(0.25, 0.35, 0.0, 0.3);
  MagneticPotential A2 =
      presets::combine(A1, presets::swirl(1.0, 0.3, 0.0, 0.3, "p"), 0.1, "A2");
  auto seminorm = [&](int n) {
    CrossSection cs = CrossSection::rectangle(0.5, 0.5, n);
    PotentialPair pair(A1, A2, cs);
    const double h = cs.spacing();
    double acc = 0.0;
    for (int i2 = 0; i2 < n; ++i2)
      for (int i3 = 0; i3 < n; ++i3) {
        const Vec2 p = cs.pos(i2, i3);
        const Vec2 v = pair.transverse_difference(0.37, p);
        const Vec2 v2 = pair.transverse_difference(0.37, p + Vec2(h, 0));
        const Vec2 v3 = pair.transverse_difference(0.37, p + Vec2(0, h));
        acc += ((v2 - v) / h).squaredNorm() + ((v3 - v) / h).squaredNorm();
      }
    return std::sqrt(acc * h * h);
  };
  const double s16 = seminorm(16), s32 = seminorm(32), s64 = seminorm(64);
  CHECK(std::fabs(s64 - s32) < std::fabs(s32 - s16));
  CHECK(std::fabs(s64 - s32) / s64 < 0.05);
}
