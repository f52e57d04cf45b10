#include "wglab/probes.hpp"

#include <cmath>
#include <vector>

namespace wglab {

double ProbeSpec::ray_offset() const {
  const double rr = sqr(enclosing_radius + ring_offset) - sqr(window_center);
  if (rr <= 0.0) throw WglabError("probe: window center outside the band");
  return std::sqrt(rr);
}

Vec2 ProbeSpec::ray_base() const {
  return window_center * e_perp() - ray_offset() * omega;
}

void ProbeSpec::validate() const {
  if (std::fabs(omega.norm() - 1.0) > 1e-14)
    throw WglabError("probe: direction not on the unit circle");
  if (std::fabs(xi_vec().dot(omega)) > 1e-14)
    throw WglabError("probe: dual frequency not orthogonal to the direction");
  if (horizon <= 0.0 || enclosing_radius <= 0.0)
    throw WglabError("probe: nonpositive horizon or enclosing radius");
  if (!(sigma > sigma_floor()))
    throw WglabError("probe: sigma below 2(R+1)/T");
  if (!(sigma > (2.0 * enclosing_radius + 1.0) / horizon))
    throw WglabError("probe: sigma below the support clearance bound");
  if (!(std::fabs(window_center) < enclosing_radius + 0.5))
    throw WglabError("probe: window center outside B(0, R+1/2)");
  if (j != 2 && j != 3)
    throw WglabError("probe: derivative index must be 2 or 3");
  const double r = ray_offset();
  const Vec2 z1 = ray_base();
  if (pairing_geometry()) {
    // Support ball B(z1', 1/4) inside the negative half of the annulus.
    const double rho_s = 0.25;
    if (!(z1.norm() - rho_s >= enclosing_radius) ||
        !(z1.norm() + rho_s <= enclosing_radius + 1.0 + 1e-14))
      throw WglabError("probe: support ball leaves the annulus");
    if (!(z1.dot(omega) + rho_s <= 0.0) || !(r > rho_s))
      throw WglabError("probe: support ball crosses to the positive ray side");
  } else {
    // General window: the support box in ray coordinates must stay inside
    // the annulus. For u1 < 0 the closest point to the origin is (u1, v*)
    // with v* the in-range value nearest zero.
    const double u0 = z1.dot(omega), u1 = u0 + ray_width;
    const double vc = window_center;
    if (!(u1 < 0.0)) throw WglabError("probe: window reaches the section");
    const double v_near =
        (std::fabs(vc) <= cross_radius) ? 0.0
                                        : std::fabs(vc) - cross_radius;
    const double rmin = std::hypot(u1, v_near);
    const double rmax =
        std::hypot(std::max(std::fabs(u0), std::fabs(u1)),
                   std::fabs(vc) + cross_radius);
    if (!(rmin >= enclosing_radius) ||
        !(rmax <= enclosing_radius + 1.0 + 1e-14))
      throw WglabError("probe: support ball leaves the annulus");
  }
}

TransverseField transverse_part(const MagneticPotential& A) {
  TransverseField f;
  f.support_radius = A.support_radius();
  f.eval = [A](double x1, const Vec2& xp) {
    return Vec2(A.component(2, x1, xp), A.component(3, x1, xp));
  };
  return f;
}

TransverseField transverse_difference_field(const PotentialPair& pair) {
  TransverseField f;
  f.support_radius = pair.support_radius();
  f.eval = [&pair](double x1, const Vec2& xp) {
    return pair.transverse_difference(x1, xp);
  };
  return f;
}

TransportAmplitude::TransportAmplitude(TransverseField F, const Vec2& omega,
                                       double tol)
    : f_(std::move(F)), omega_(omega), eperp_(-omega.y(), omega.x()),
      tol_(tol) {}

double TransportAmplitude::ray_integral(double s0, double s1, double x1,
                                        const Vec2& xp) const {
  if (s1 < s0) return -ray_integral(s1, s0, x1, xp);
  if (f_.support_radius <= 0.0) return 0.0;
  const double v = xp.dot(eperp_);
  if (std::fabs(v) >= f_.support_radius) return 0.0;
  const double u = xp.dot(omega_);
  const double w = std::sqrt(sqr(f_.support_radius) - v * v);
  const double a = std::max(s0, u - w), b = std::min(s1, u + w);
  if (a >= b) return 0.0;
  return adaptive_simpson<double>(
      [&](double s) { return omega_.dot(f_.eval(x1, xp - s * omega_)); }, a, b,
      tol_);
}

double TransportAmplitude::line_integral(double x1, const Vec2& yp) const {
  if (f_.support_radius <= 0.0) return 0.0;
  const double v = yp.dot(eperp_);
  if (std::fabs(v) >= f_.support_radius) return 0.0;
  const double u = yp.dot(omega_);
  const double w = std::sqrt(sqr(f_.support_radius) - v * v);
  return adaptive_simpson<double>(
      [&](double s) { return omega_.dot(f_.eval(x1, yp + s * omega_)); },
      -u - w, -u + w, tol_);
}

cd TransportAmplitude::operator()(double t, double x1, const Vec2& xp) const {
  return std::exp(cd(0.0, -ray_integral(0.0, t, x1, xp)));
}

ProbeWindow::ProbeWindow(const ProbeSpec& spec, const PotentialPair& pair,
                         double quad_tol)
    : spec_(spec), pair_(&pair),
      diff_amp_(transverse_difference_field(pair), spec.omega, quad_tol),
      quad_tol_(quad_tol) {
  spec_.validate();
  r_off_ = spec_.ray_offset();
  // Normalize the ray bump to int h^2 = 1 on its support (0, ray_width).
  const double chi_sq =
      adaptive_simpson<double>([](double u) { return sqr(bump(u).v); }, -1.0,
                               1.0, 1e-13);
  h_norm_ = std::sqrt(2.0 / (spec_.ray_width * chi_sq));
  h_sq_int_ = adaptive_simpson<double>(
      [this](double t) { return sqr(ray_bump(t).v); }, -0.1 * spec_.ray_width,
      1.1 * spec_.ray_width, 1e-13);
}

Jet1 ProbeWindow::ray_bump(double t) const {
  const double s = 2.0 / spec_.ray_width;
  Jet1 j = bump(s * t - 1.0);
  j.v *= h_norm_;
  j.d1 *= s * h_norm_;
  j.d2 *= s * s * h_norm_;
  return j;
}

Jet1 ProbeWindow::cross_window_sqrt(double v) const {
  const double s = 1.0 / spec_.cross_radius;
  Jet1 j = partition_window_sqrt(s * (v - spec_.window_center));
  j.d1 *= s;
  j.d2 *= s * s;
  return j;
}

double ProbeWindow::line_phase(double y1, const Vec2& yp) const {
  return diff_amp_.line_integral(y1, yp);
}

double ProbeWindow::rho_line_integral(double y1, const Vec2& yp) const {
  const double rs = pair_->support_radius();
  const double v = yp.dot(spec_.e_perp());
  if (std::fabs(v) >= rs) return 0.0;
  const double u = yp.dot(spec_.omega);
  const double w = std::sqrt(sqr(rs) - v * v);
  const int j = spec_.j;
  return adaptive_simpson<double>(
      [&](double s) {
        return spec_.omega.dot(pair_->transverse_difference_partial(
            j, y1, yp + s * spec_.omega));
      },
      -u - w, -u + w, quad_tol_);
}

cd ProbeWindow::eval(WindowSide side, double y1, const Vec2& yp) const {
  const double u = yp.dot(spec_.omega);
  const double v = yp.dot(spec_.e_perp());
  if (u + r_off_ <= 0.0 || u + r_off_ >= spec_.ray_width ||
      std::fabs(v - spec_.window_center) >= spec_.cross_radius)
    return 0.0;
  const Jet1 h = ray_bump(u + r_off_);
  const Jet1 w = cross_window_sqrt(v);
  const double phase_i = line_phase(y1, yp);
  switch (side) {
    case WindowSide::Base:
      return std::exp(cd(0.0, spec_.theta * y1 + 0.5 * phase_i -
                               0.5 * v * spec_.xi)) *
             (h.v * w.v);
    case WindowSide::DataSide:
      return std::exp(cd(0.0, (spec_.theta - 2.0 * kPi * spec_.k) * y1 +
                               0.5 * phase_i - 0.5 * v * spec_.xi)) *
             (h.v * w.v);
    case WindowSide::AdjointSide: {
      const int jj = spec_.j - 2;  // 0 -> x2, 1 -> x3
      const double om_j = spec_.omega[jj];
      const double ep_j = spec_.e_perp()[jj];
      const double xi_j = spec_.xi_vec()[jj];
      const cd bracket =
          cd(om_j * h.d1 * w.v + ep_j * h.v * w.d1) +
          cd(0.0, 0.5 * (xi_j - rho_line_integral(y1, yp))) * (h.v * w.v);
      return std::exp(cd(0.0, spec_.theta * y1 - 0.5 * phase_i +
                               0.5 * v * spec_.xi)) *
             bracket;
    }
  }
  return 0.0;
}

double ProbeWindow::support_max_along_ray() const {
  double worst = -1e30;
  for (int iu = 0; iu <= 40; ++iu)
    for (int iv = 0; iv <= 40; ++iv) {
      const double u = u_min() + (u_max() - u_min()) * iu / 40.0;
      const double v = v_min() + (v_max() - v_min()) * iv / 40.0;
      const Vec2 yp = u * spec_.omega + v * spec_.e_perp();
      if (std::abs(eval(WindowSide::Base, 0.0, yp)) > 0.0)
        worst = std::max(worst, u);
    }
  return worst;
}

GoLift::GoLift(const WaveguideGrid& grid, const ProbeWindow& window,
               WindowSide side, TransportAmplitude amplitude)
    : grid_(&grid), win_(&window), side_(side), amp_(std::move(amplitude)) {}

bool GoLift::window_box(double t, double& u0, double& u1, double& v0,
                        double& v1) const {
  const double tau = 2.0 * win_->spec().sigma * t;
  u0 = win_->u_min() + tau;
  u1 = win_->u_max() + tau;
  v0 = win_->v_min();
  v1 = win_->v_max();
  const double r_enc = grid_->section().enclosing_radius();
  return !(u1 < -r_enc || u0 > r_enc || v1 < -r_enc || v0 > r_enc);
}

cd GoLift::sample(double t, double x1, const Vec2& xp) const {
  const double sigma = win_->spec().sigma;
  const double tau = 2.0 * sigma * t;
  const Vec2 yp = xp - tau * win_->spec().omega;
  const cd w = win_->eval(side_, x1, yp);
  if (w == cd(0.0)) return 0.0;
  const cd b = amp_(tau, x1, xp);
  const cd e = std::exp(
      cd(0.0, sigma * (xp.dot(win_->spec().omega) - sigma * t)));
  return w * b * e;
}

VectorXcd GoLift::interior(int k) const {
  const CrossSection& cs = grid_->section();
  VectorXcd out = VectorXcd::Zero(grid_->n_dof());
  double u0, u1, v0, v1;
  const double t = grid_->t(k);
  if (!window_box(t, u0, u1, v0, v1)) return out;
  const Vec2 om = win_->spec().omega, ep = win_->spec().e_perp();
  const int n3p = cs.n3() + 1;
  for (int p = 0; p < cs.n_interior(); ++p) {
    const int gq = cs.interior_nodes()[p];
    const Vec2 xp = cs.pos(gq / n3p, gq % n3p);
    const double u = xp.dot(om), v = xp.dot(ep);
    if (u <= u0 || u >= u1 || v <= v0 || v >= v1) continue;
    for (int i1 = 0; i1 < grid_->n1(); ++i1)
      out[grid_->dof(i1, p)] = sample(t, grid_->x1(i1), xp);
  }
  return out;
}

VectorXcd GoLift::boundary(int k) const {
  const CrossSection& cs = grid_->section();
  VectorXcd out = VectorXcd::Zero(grid_->n_bdof());
  double u0, u1, v0, v1;
  const double t = grid_->t(k);
  if (!window_box(t, u0, u1, v0, v1)) return out;
  const Vec2 om = win_->spec().omega, ep = win_->spec().e_perp();
  for (int q = 0; q < cs.n_boundary(); ++q) {
    const Vec2 xp = cs.pos_g(cs.boundary_nodes()[q]);
    const double u = xp.dot(om), v = xp.dot(ep);
    if (u <= u0 || u >= u1 || v <= v0 || v >= v1) continue;
    for (int i1 = 0; i1 < grid_->n1(); ++i1)
      out[grid_->bdof(i1, q)] = sample(t, grid_->x1(i1), xp);
  }
  return out;
}

const ProbeSpec& GoLift::probe_spec() const { return win_->spec(); }

LateralTrace GoLift::trace() const { return boundary_trace(*grid_, *this); }

BoxH2Breakdown box_h2_breakdown(
    const std::function<cd(double, const Vec2&)>& field, const Vec2& omega,
    double theta, double ua, double ub, double va, double vb, int n1, int nu,
    int nv) {
  const double du = (ub - ua) / nu, dv = (vb - va) / nv, d1 = 1.0 / n1;
  const Vec2 ep(-omega.y(), omega.x());
  const cd wrap = std::exp(cd(0.0, theta));

  std::vector<Eigen::MatrixXcd> val(n1);
  for (int i1 = 0; i1 < n1; ++i1) {
    val[i1].resize(nu + 1, nv + 1);
    for (int iu = 0; iu <= nu; ++iu)
      for (int iv = 0; iv <= nv; ++iv) {
        const Vec2 yp = (ua + iu * du) * omega + (va + iv * dv) * ep;
        val[i1](iu, iv) = field(i1 * d1, yp);
      }
  }
  auto at = [&](int i1, int iu, int iv) -> cd {
    if (iu < 0 || iu > nu || iv < 0 || iv > nv) return 0.0;
    if (i1 >= n1) return wrap * val[i1 - n1](iu, iv);
    if (i1 < 0) return val[i1 + n1](iu, iv) / wrap;
    return val[i1](iu, iv);
  };

  const double cell = d1 * du * dv;
  auto h2_accumulate = [&](auto&& f, std::array<double, 3>& acc) {
    for (int i1 = 0; i1 < n1; ++i1)
      for (int iu = 1; iu < nu; ++iu)
        for (int iv = 1; iv < nv; ++iv) {
          const cd c = f(i1, iu, iv);
          const cd f1 = 0.5 * (f(i1 + 1, iu, iv) - f(i1 - 1, iu, iv)) / d1;
          const cd fu = 0.5 * (f(i1, iu + 1, iv) - f(i1, iu - 1, iv)) / du;
          const cd fv = 0.5 * (f(i1, iu, iv + 1) - f(i1, iu, iv - 1)) / dv;
          const cd f11 =
              (f(i1 + 1, iu, iv) - 2.0 * c + f(i1 - 1, iu, iv)) / (d1 * d1);
          const cd fuu =
              (f(i1, iu + 1, iv) - 2.0 * c + f(i1, iu - 1, iv)) / (du * du);
          const cd fvv =
              (f(i1, iu, iv + 1) - 2.0 * c + f(i1, iu, iv - 1)) / (dv * dv);
          const cd f1u = 0.25 *
                         (f(i1 + 1, iu + 1, iv) - f(i1 + 1, iu - 1, iv) -
                          f(i1 - 1, iu + 1, iv) + f(i1 - 1, iu - 1, iv)) /
                         (d1 * du);
          const cd f1v = 0.25 *
                         (f(i1 + 1, iu, iv + 1) - f(i1 + 1, iu, iv - 1) -
                          f(i1 - 1, iu, iv + 1) + f(i1 - 1, iu, iv - 1)) /
                         (d1 * dv);
          const cd fuv = 0.25 *
                         (f(i1, iu + 1, iv + 1) - f(i1, iu + 1, iv - 1) -
                          f(i1, iu - 1, iv + 1) + f(i1, iu - 1, iv - 1)) /
                         (du * dv);
          acc[0] += cell * std::norm(c);
          acc[1] += cell * (std::norm(f1) + std::norm(fu) + std::norm(fv));
          acc[2] += cell * (std::norm(f11) + std::norm(fuu) + std::norm(fvv) +
                            2.0 * (std::norm(f1u) + std::norm(f1v) +
                                   std::norm(fuv)));
        }
  };
  BoxH2Breakdown out;
  h2_accumulate(at, out.base);
  auto ddu = [&](int i1, int iu, int iv) {
    return 0.5 * (at(i1, iu + 1, iv) - at(i1, iu - 1, iv)) / du;
  };
  h2_accumulate(ddu, out.dir);
  return out;
}

double directional_sobolev_norm(const ProbeWindow& w, WindowSide side, int n1,
                                int nu, int nv) {
  const double pad = 0.02;
  return box_h2_breakdown(
             [&w, side](double y1, const Vec2& yp) {
               return w.eval(side, y1, yp);
             },
             w.spec().omega, w.spec().theta, w.u_min() - pad, w.u_max() + pad,
             w.v_min() - pad, w.v_max() + pad, n1, nu, nv)
      .norm();
}

RemainderNorms go_remainder_norms(const CrankNicolson& cn, const GoLift& lift,
                                  Orientation orient) {
  const WaveguideGrid& g = cn.op().grid();
  if (lift.probe_spec().sigma * g.section().spacing() > 0.5)
    throw WglabError("go remainder: phase under-resolved (sigma*h > 0.5)");
  RemainderNorms out;
  double psi_sq = 0.0, grad_sq = 0.0;
  const double theta = cn.op().theta();
  // The remainder is -w where w carries the discrete residual of the lift;
  // a direct loop avoids resampling the lift twice per level.
  const int nt = g.nt();
  const double dt = g.dt();
  VectorXcd w = VectorXcd::Zero(g.n_dof());
  auto accumulate = [&](int k, const VectorXcd& wk) {
    psi_sq += time_weight(g, k) * g.cell_measure() * wk.squaredNorm();
    grad_sq += time_weight(g, k) * grad_sq_cell(g, theta, wk);
  };
  if (orient == Orientation::Forward) {
    VectorXcd Wk = lift.interior(0), gk = lift.boundary(0);
    accumulate(0, w);
    for (int k = 0; k < nt; ++k) {
      const VectorXcd Wn = lift.interior(k + 1), gn = lift.boundary(k + 1);
      VectorXcd fh = cd(0.0, 1.0 / dt) * (Wn - Wk) +
                     cn.op().apply_full((0.5 * (Wk + Wn)).eval(),
                                        (0.5 * (gk + gn)).eval());
      w = cn.forward(w, &fh);
      Wk = Wn;
      gk = gn;
      accumulate(k + 1, w);
    }
  } else {
    VectorXcd Wk = lift.interior(nt), gk = lift.boundary(nt);
    accumulate(nt, w);
    for (int k = nt; k > 0; --k) {
      const VectorXcd Wn = lift.interior(k - 1), gn = lift.boundary(k - 1);
      VectorXcd fh = cd(0.0, 1.0 / dt) * (Wk - Wn) +
                     cn.op().apply_full((0.5 * (Wk + Wn)).eval(),
                                        (0.5 * (gk + gn)).eval());
      w = cn.backward(w, &fh);
      Wk = Wn;
      gk = gn;
      accumulate(k - 1, w);
    }
  }
  out.psi_l2 = std::sqrt(psi_sq);
  out.grad_psi_l2 = std::sqrt(grad_sq);
  return out;
}

}  // namespace wglab
