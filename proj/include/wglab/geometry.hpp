// Cross-section and period-cell geometry: masked finite-difference grids for
// a rectangle or disk, boundary trace nodes with outward normals and
// arc-length weights, and the space-time grid of one period cell.

#pragma once

#include <vector>

#include "wglab/common.hpp"

namespace wglab {

enum class SectionShape { Rectangle, Disk };

/// One node of the lateral boundary carrying the data needed for a
/// Neumann-trace evaluation: position, outward unit normal, quadrature
/// weight and the grid nodes of the one-sided stencil.
struct TraceNode {
  int bgrid = -1;        // index into boundary_nodes() (value storage)
  Vec2 pos = Vec2::Zero();
  Vec2 normal = Vec2::Zero();
  double weight = 0.0;   // arc-length quadrature weight
  // Rectangle: two stencil nodes along -normal (second order).
  // Disk: inward neighbors along x2/x3 (first order), -1 if unavailable.
  int s1 = -1;
  int s2 = -1;
};

class CrossSection {
 public:
  /// Rectangle (-a,a) x (-b,b); n2 grid intervals along x2 (must be even,
  /// and 2b must be an even multiple of the spacing h = 2a/n2).
  static CrossSection rectangle(double half_width_2, double half_width_3,
                                int n2);
  /// Disk of given radius, n grid intervals across the diameter (even).
  static CrossSection disk(double radius, int n);

  SectionShape shape() const { return shape_; }
  double spacing() const { return h_; }
  double enclosing_radius() const { return r_enc_; }
  double half_width_2() const { return a_; }
  double half_width_3() const { return b_; }

  int n2() const { return n2_; }
  int n3() const { return n3_; }
  int node_count() const { return (n2_ + 1) * (n3_ + 1); }
  int gidx(int i2, int i3) const { return i2 * (n3_ + 1) + i3; }
  Vec2 pos(int i2, int i3) const {
    return Vec2(-a_ + i2 * h_, -b_ + i3 * h_);
  }
  Vec2 pos_g(int g) const { return pos(g / (n3_ + 1), g % (n3_ + 1)); }

  bool in_grid(int i2, int i3) const {
    return i2 >= 0 && i2 <= n2_ && i3 >= 0 && i3 <= n3_;
  }

  /// -1 for non-interior grid nodes, else the interior dof index.
  int interior_index(int g) const { return interior_index_[g]; }
  int n_interior() const { return static_cast<int>(interior_.size()); }
  const std::vector<int>& interior_nodes() const { return interior_; }

  /// -1 for nodes that are not Dirichlet boundary nodes, else the index
  /// into the boundary value array.
  int boundary_index(int g) const { return boundary_index_[g]; }
  int n_boundary() const { return static_cast<int>(boundary_.size()); }
  const std::vector<int>& boundary_nodes() const { return boundary_; }

  const std::vector<TraceNode>& trace_nodes() const { return trace_; }
  double boundary_length() const;

 private:
  CrossSection() = default;
  void build_interior_and_boundary();
  void build_trace_rectangle();
  void build_trace_disk();
  void validate() const;

  SectionShape shape_ = SectionShape::Rectangle;
  double a_ = 0.0, b_ = 0.0;   // half-widths of the bounding box
  double radius_ = 0.0;        // disk only
  double h_ = 0.0;
  double r_enc_ = 0.0;
  int n2_ = 0, n3_ = 0;
  std::vector<int> interior_index_;
  std::vector<int> interior_;
  std::vector<int> boundary_index_;
  std::vector<int> boundary_;
  std::vector<TraceNode> trace_;
};

/// Uniform grid of the period cell (0,T) x (0,1) x Omega'.
/// The x1 direction wraps with the fiber phase, so only nodes
/// x1 = i/n1, i = 0..n1-1 are stored.
class WaveguideGrid {
 public:
  WaveguideGrid(CrossSection cs, int n1, double horizon, int nt);

  const CrossSection& section() const { return cs_; }
  int n1() const { return n1_; }
  double h1() const { return h1_; }
  double x1(int i1) const { return i1 * h1_; }
  int nt() const { return nt_; }
  double horizon() const { return T_; }
  double dt() const { return dt_; }
  double t(int k) const { return k * dt_; }

  int n_dof() const { return n1_ * cs_.n_interior(); }
  int dof(int i1, int p) const { return i1 * cs_.n_interior() + p; }
  int n_bdof() const { return n1_ * cs_.n_boundary(); }
  int bdof(int i1, int q) const { return i1 * cs_.n_boundary() + q; }

  /// Cell measure per interior node (uniform; masked for the disk).
  double cell_measure() const { return h1_ * cs_.spacing() * cs_.spacing(); }

  /// Discrete L2(cell) inner product of interior dof vectors.
  cd inner(const VectorXcd& u, const VectorXcd& v) const {
    return cell_measure() * v.dot(u);  // dot conjugates v
  }
  double norm(const VectorXcd& u) const {
    return std::sqrt(cell_measure()) * u.norm();
  }

 private:
  CrossSection cs_;
  int n1_ = 0;
  double h1_ = 0.0;
  int nt_ = 0;
  double T_ = 0.0;
  double dt_ = 0.0;
};

}  // namespace wglab
