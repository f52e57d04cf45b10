// Geometric-optics probes: transport amplitudes along cross-section rays,
// the concrete localized probe windows (bump-in-ray-frame times modulation),
// their boundary data and lifts on the cell grid, directional Sobolev norms,
// and remainder solves.

#pragma once

#include <array>
#include <cmath>
#include <functional>

#include "wglab/quadrature.hpp"
#include "wglab/trace.hpp"

namespace wglab {

/// Probe parameters; validate() checks every geometric invariant and throws
/// naming the violated one.
struct ProbeSpec {
  Vec2 omega = Vec2(1.0, 0.0);  // unit ray direction in the cross-section
  double sigma = 0.0;           // probe frequency
  double theta = 0.0;           // fiber
  double xi = 0.0;              // dual frequency along e_perp (xi' = xi*e_perp)
  int k = 0;                    // longitudinal Fourier mode
  int j = 2;                    // derivative index (2 or 3)
  double window_center = 0.0;   // z0' = window_center * e_perp
  double enclosing_radius = 0.0;  // R with the closed section inside B(0,R)
  double horizon = 0.0;           // T

  // Window geometry. The defaults are the pairing probe: ray bump on
  // (0,1/8), cross window of radius 1/8, ring offset 3/4 (negative-side
  // ball of radius 1/4 inside the annulus). Decay experiments may widen
  // the window anywhere inside the annulus; such windows are excluded
  // from the pairing path.
  double ray_width = 0.125;
  double cross_radius = 0.125;
  double ring_offset = 0.75;

  bool pairing_geometry() const {
    return ray_width == 0.125 && cross_radius == 0.125 && ring_offset == 0.75;
  }

  Vec2 e_perp() const { return Vec2(-omega.y(), omega.x()); }
  Vec2 xi_vec() const { return xi * e_perp(); }
  /// r_{z0'} = sqrt((R+ring_offset)^2 - |z0'|^2); the squared form keeps
  /// |z1'| = R + ring_offset exactly, making the containment checkable.
  double ray_offset() const;
  Vec2 ray_base() const;  // z1' = z0' - ray_offset * omega
  double sigma_floor() const { return 2.0 * (enclosing_radius + 1.0) / horizon; }
  void validate() const;
};

/// Transverse vector field (a2,a3) with compact support, as used by ray
/// integrals: either one potential's transverse part or a pair difference.
struct TransverseField {
  std::function<Vec2(double, const Vec2&)> eval;
  double support_radius = 0.0;
};

TransverseField transverse_part(const MagneticPotential& A);
TransverseField transverse_difference_field(const PotentialPair& pair);

/// Unit-modulus transport amplitude
///   b(t,x) = exp(-i * int_0^t omega . F(x1, x' - s omega) ds),
/// with support-clipped adaptive ray quadrature.
class TransportAmplitude {
 public:
  TransportAmplitude(TransverseField F, const Vec2& omega, double tol = 1e-10);

  cd operator()(double t, double x1, const Vec2& xp) const;
  /// int_{s0}^{s1} omega . F(x1, xp - s omega) ds.
  double ray_integral(double s0, double s1, double x1, const Vec2& xp) const;
  /// Full-line integral through y': int_R omega . F(x1, y' + s omega) ds.
  double line_integral(double x1, const Vec2& yp) const;

 private:
  TransverseField f_;
  Vec2 omega_, eperp_;
  double tol_;
};

enum class WindowSide { Base, DataSide, AdjointSide };

/// Localized probe window in the ray frame: the normalized bump along the
/// ray, the sqrt of a partition window across it, the dual-frequency
/// modulation, and the half-ray-integral phase of the pair difference
/// (quasi-periodic in y1 with the fiber phase).
///   Base:        phi = phi_theta * phi_0
///   DataSide:    e^{-2ik pi y1} phi                    (drives the solves)
///   AdjointSide: d_j(conj(phi) e^{2i theta y1})        (pairing weight)
class ProbeWindow {
 public:
  ProbeWindow(const ProbeSpec& spec, const PotentialPair& pair,
              double quad_tol = 1e-10);

  const ProbeSpec& spec() const { return spec_; }
  cd eval(WindowSide side, double y1, const Vec2& yp) const;

  /// Bounding intervals of the window support in ray coordinates
  /// (u = y'.omega, v = y'.e_perp).
  double u_min() const { return -r_off_; }
  double u_max() const { return -r_off_ + spec_.ray_width; }
  double v_min() const { return spec_.window_center - spec_.cross_radius; }
  double v_max() const { return spec_.window_center + spec_.cross_radius; }

  double h_square_integral() const { return h_sq_int_; }
  /// Max of x'.omega over the sampled window support (must be negative).
  double support_max_along_ray() const;

  /// The bump along the ray, rescaled to (0,1/8) with int h^2 = 1.
  Jet1 ray_bump(double t) const;
  /// sqrt of the partition window across the ray (radius 1/8 around z0').
  Jet1 cross_window_sqrt(double v) const;

 private:
  ProbeSpec spec_;
  const PotentialPair* pair_;
  TransportAmplitude diff_amp_;  // half-phase from the pair difference
  double r_off_ = 0.0;
  double h_norm_ = 1.0;   // bump scale factor
  double h_sq_int_ = 0.0; // quadrature check of int h^2
  double quad_tol_;

  double line_phase(double y1, const Vec2& yp) const;  // int_R omega.A' ds
  double rho_line_integral(double y1, const Vec2& yp) const;  // P(rho_j)
};

/// GO main part sampled on the cell grid as a Dirichlet lift:
///   U(t,x) = window(x1, x' - 2 sigma t omega) b(2 sigma t, x) E_sigma(t,x').
class GoLift final : public Lift {
 public:
  GoLift(const WaveguideGrid& grid, const ProbeWindow& window, WindowSide side,
         TransportAmplitude amplitude);

  VectorXcd interior(int k) const override;
  VectorXcd boundary(int k) const override;
  const ProbeSpec& probe_spec() const;

  /// Samples restricted to the lateral trace nodes, all levels.
  LateralTrace trace() const;

 private:
  cd sample(double t, double x1, const Vec2& xp) const;
  bool window_box(double t, double& u0, double& u1, double& v0,
                  double& v1) const;

  const WaveguideGrid* grid_;
  const ProbeWindow* win_;
  WindowSide side_;
  TransportAmplitude amp_;
};

/// Squared H2-type sums over a ray-frame sampling box, bucketed by
/// derivative order, for a field and its directional derivative along
/// omega. Second derivatives enter through the Hessian Frobenius norm.
struct BoxH2Breakdown {
  std::array<double, 3> base{};  // |f|^2, |grad f|^2, |Hess f|_F^2
  std::array<double, 3> dir{};   // same for d/du f
  double norm() const {
    return std::sqrt(base[0] + base[1] + base[2]) +
           std::sqrt(dir[0] + dir[1] + dir[2]);
  }
};

BoxH2Breakdown box_h2_breakdown(
    const std::function<cd(double, const Vec2&)>& field, const Vec2& omega,
    double theta, double ua, double ub, double va, double vb, int n1, int nu,
    int nv);

/// H2-type grid norm with the extra directional derivative:
///   N(phi) = |phi|_{H2((0,1)xR^2)} + |omega . grad' phi|_{H2},
/// sampled on a fine ray-frame box around the window support.
double directional_sobolev_norm(const ProbeWindow& w, WindowSide side,
                                int n1 = 24, int nu = 160, int nv = 160);

struct RemainderNorms {
  double psi_l2 = 0.0;       // L2(Q) of the remainder
  double grad_psi_l2 = 0.0;  // L2(Q) of its spatial gradient
};

/// Remainder field psi = u - (GO main part): solves the source problem with
/// the discrete residual of the lift; psi(0)=0 for the data side (forward),
/// psi(T)=0 for the adjoint side (backward). Rejects under-resolved phases
/// (sigma * h' > 0.5).
RemainderNorms go_remainder_norms(const CrankNicolson& cn, const GoLift& lift,
                                  Orientation orient);

}  // namespace wglab
