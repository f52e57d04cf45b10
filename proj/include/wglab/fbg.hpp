// Partial Floquet-Bloch-Gelfand transform along the periodic axis and its
// inverse on a uniform quasi-momentum grid.

#pragma once

#include <vector>

#include "wglab/geometry.hpp"

namespace wglab {

/// Complex samples of a function supported in finitely many unit cells
/// k = k_min .. k_min+cells-1 of the x1 axis; one dof vector per cell.
struct CellFunction {
  int k_min = 0;
  std::vector<VectorXcd> cells;

  int k_max() const { return k_min + static_cast<int>(cells.size()) - 1; }
  int span() const { return static_cast<int>(cells.size()); }
};

/// One fiber: quasi-momentum and the dof vector on a single cell.
struct FiberDatum {
  double theta = 0.0;
  VectorXcd values;
};

/// f_theta(x1,y) = sum_k e^{-ik theta} f(x1+k, y); finite sum over the
/// declared cells.
FiberDatum fbg_forward(const CellFunction& f, double theta);

/// Recover cell k from fibers on the uniform grid theta_j = 2 pi j / n:
/// f(x1+k, y) = (1/n) sum_j e^{ik theta_j} f_theta_j. Throws when the grid
/// has fewer nodes than the declared cell span.
VectorXcd fbg_inverse(const std::vector<FiberDatum>& fibers, int cell_k,
                      int cell_span);

/// Sum of squared L2(cell) norms over the cells (grid measure included).
double cell_l2_sq(const WaveguideGrid& grid, const CellFunction& f);

/// (1/n_theta) * sum over fibers of the squared L2(cell) norm; equals
/// cell_l2_sq when the theta grid resolves the cell span.
double fiber_l2_sq(const WaveguideGrid& grid,
                   const std::vector<FiberDatum>& fibers);

}  // namespace wglab
