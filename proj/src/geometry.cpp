#include "wglab/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace wglab {

CrossSection CrossSection::rectangle(double half_width_2, double half_width_3,
                                     int n2) {
  if (half_width_2 <= 0 || half_width_3 <= 0 || n2 < 4 || n2 % 2 != 0)
    throw WglabError("rectangle: need positive half-widths and even n2 >= 4");
  CrossSection cs;
  cs.shape_ = SectionShape::Rectangle;
  cs.a_ = half_width_2;
  cs.b_ = half_width_3;
  cs.h_ = 2.0 * half_width_2 / n2;
  cs.n2_ = n2;
  const double n3f = 2.0 * half_width_3 / cs.h_;
  cs.n3_ = static_cast<int>(std::lround(n3f));
  if (std::fabs(n3f - cs.n3_) > 1e-9 || cs.n3_ % 2 != 0)
    throw WglabError("rectangle: 2*half_width_3 must be an even multiple of h");
  cs.r_enc_ = std::hypot(half_width_2, half_width_3);
  cs.build_interior_and_boundary();
  cs.build_trace_rectangle();
  cs.validate();
  return cs;
}

CrossSection CrossSection::disk(double radius, int n) {
  if (radius <= 0 || n < 8 || n % 2 != 0)
    throw WglabError("disk: need positive radius and even n >= 8");
  CrossSection cs;
  cs.shape_ = SectionShape::Disk;
  cs.radius_ = radius;
  cs.a_ = cs.b_ = radius;
  cs.h_ = 2.0 * radius / n;
  cs.n2_ = cs.n3_ = n;
  cs.r_enc_ = radius;
  cs.build_interior_and_boundary();
  cs.build_trace_disk();
  cs.validate();
  return cs;
}

void CrossSection::build_interior_and_boundary() {
  const int nn = node_count();
  interior_index_.assign(nn, -1);
  boundary_index_.assign(nn, -1);
  auto is_int = [&](int i2, int i3) {
    if (!in_grid(i2, i3)) return false;
    if (shape_ == SectionShape::Rectangle)
      return i2 > 0 && i2 < n2_ && i3 > 0 && i3 < n3_;
    return pos(i2, i3).norm() < radius_ - 1e-12 * radius_;
  };
  for (int i2 = 0; i2 <= n2_; ++i2)
    for (int i3 = 0; i3 <= n3_; ++i3)
      if (is_int(i2, i3)) {
        interior_index_[gidx(i2, i3)] = static_cast<int>(interior_.size());
        interior_.push_back(gidx(i2, i3));
      }
  // Boundary nodes: rectangle edge nodes; disk non-interior nodes with an
  // interior 4-neighbor.
  for (int i2 = 0; i2 <= n2_; ++i2)
    for (int i3 = 0; i3 <= n3_; ++i3) {
      const int g = gidx(i2, i3);
      if (interior_index_[g] >= 0) continue;
      bool bdry = false;
      if (shape_ == SectionShape::Rectangle) {
        bdry = true;  // every non-interior grid node lies on the edge
      } else {
        bdry = is_int(i2 - 1, i3) || is_int(i2 + 1, i3) || is_int(i2, i3 - 1) ||
               is_int(i2, i3 + 1);
      }
      if (bdry) {
        boundary_index_[g] = static_cast<int>(boundary_.size());
        boundary_.push_back(g);
      }
    }
}

void CrossSection::build_trace_rectangle() {
  // Four edges, corners shared between adjacent edges; trapezoid weights
  // make the quadrature exact for the rectangle perimeter.
  auto add = [&](int i2, int i3, Vec2 nu, double w, int step2, int step3) {
    TraceNode t;
    t.bgrid = boundary_index_[gidx(i2, i3)];
    t.pos = pos(i2, i3);
    t.normal = nu;
    t.weight = w;
    t.s1 = gidx(i2 + step2, i3 + step3);
    t.s2 = gidx(i2 + 2 * step2, i3 + 2 * step3);
    trace_.push_back(t);
  };
  auto edge_w = [&](int i, int n) { return (i == 0 || i == n) ? 0.5 * h_ : h_; };
  for (int i3 = 0; i3 <= n3_; ++i3) {  // x2 = -a and x2 = +a
    add(0, i3, Vec2(-1, 0), edge_w(i3, n3_), +1, 0);
    add(n2_, i3, Vec2(+1, 0), edge_w(i3, n3_), -1, 0);
  }
  for (int i2 = 0; i2 <= n2_; ++i2) {  // x3 = -b and x3 = +b
    add(i2, 0, Vec2(0, -1), edge_w(i2, n2_), 0, +1);
    add(i2, n3_, Vec2(0, +1), edge_w(i2, n2_), 0, -1);
  }
}

void CrossSection::build_trace_disk() {
  // One trace node per boundary grid node; radial normal, polygonal
  // arc-length weights from the angular ordering (first-order accurate).
  struct Tmp {
    double angle;
    int g;
  };
  std::vector<Tmp> ring;
  ring.reserve(boundary_.size());
  for (int g : boundary_) {
    const Vec2 p = pos_g(g);
    ring.push_back({std::atan2(p.y(), p.x()), g});
  }
  std::sort(ring.begin(), ring.end(),
            [](const Tmp& a, const Tmp& b) { return a.angle < b.angle; });
  const int m = static_cast<int>(ring.size());
  auto angdiff = [](double a, double b) {
    double d = a - b;
    while (d < 0) d += 2.0 * kPi;
    while (d >= 2.0 * kPi) d -= 2.0 * kPi;
    return d;
  };
  for (int i = 0; i < m; ++i) {
    const Vec2 p = pos_g(ring[i].g);
    const double a_prev = ring[(i + m - 1) % m].angle;
    const double a_next = ring[(i + 1) % m].angle;
    TraceNode t;
    t.bgrid = boundary_index_[ring[i].g];
    t.pos = p;
    t.normal = p.normalized();
    // Arc of the circle subtended between the half-angles to the neighbors;
    // the weights partition the full circumference exactly.
    t.weight = 0.5 * radius_ *
               (angdiff(a_next, ring[i].angle) + angdiff(ring[i].angle, a_prev));
    const int i2 = ring[i].g / (n3_ + 1), i3 = ring[i].g % (n3_ + 1);
    const int d2 = (t.normal.x() > 0) ? -1 : +1;
    const int d3 = (t.normal.y() > 0) ? -1 : +1;
    t.s1 = in_grid(i2 + d2, i3) ? gidx(i2 + d2, i3) : -1;
    t.s2 = in_grid(i2, i3 + d3) ? gidx(i2, i3 + d3) : -1;
    trace_.push_back(t);
  }
}

double CrossSection::boundary_length() const {
  double s = 0.0;
  for (const auto& t : trace_) s += t.weight;
  return s;
}

void CrossSection::validate() const {
  const int g0 = gidx(n2_ / 2, n3_ / 2);
  if (pos_g(g0).norm() > 1e-12 || interior_index_[g0] < 0)
    throw WglabError("cross-section: origin is not an interior node");
  double rmax = 0.0;
  for (int g = 0; g < node_count(); ++g)
    if (interior_index_[g] >= 0) rmax = std::max(rmax, pos_g(g).norm());
  if (r_enc_ < rmax - 1e-12)
    throw WglabError("cross-section: enclosing radius below max node radius");
  for (const auto& t : trace_)
    if (std::fabs(t.normal.norm() - 1.0) > 1e-12)
      throw WglabError("cross-section: non-unit boundary normal");
}

WaveguideGrid::WaveguideGrid(CrossSection cs, int n1, double horizon, int nt)
    : cs_(std::move(cs)), n1_(n1), nt_(nt), T_(horizon) {
  if (n1 < 2 || nt < 1 || horizon <= 0)
    throw WglabError("waveguide grid: need n1 >= 2, nt >= 1, T > 0");
  h1_ = 1.0 / n1;
  dt_ = T_ / nt_;
  if (std::fabs(dt_ * nt_ - T_) > 1e-12)
    throw WglabError("waveguide grid: dt*nt != T");
}

}  // namespace wglab
