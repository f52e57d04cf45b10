#include "wglab/fbg.hpp"

#include <cmath>

namespace wglab {

FiberDatum fbg_forward(const CellFunction& f, double theta) {
  if (f.cells.empty()) throw WglabError("fbg_forward: empty cell function");
  FiberDatum out;
  out.theta = theta;
  out.values = VectorXcd::Zero(f.cells.front().size());
  for (int j = 0; j < f.span(); ++j) {
    const int k = f.k_min + j;
    out.values += std::exp(cd(0.0, -k * theta)) * f.cells[j];
  }
  return out;
}

VectorXcd fbg_inverse(const std::vector<FiberDatum>& fibers, int cell_k,
                      int cell_span) {
  const int n = static_cast<int>(fibers.size());
  if (n < cell_span)
    throw WglabError("fbg_inverse: theta grid too coarse for the cell span");
  VectorXcd out = VectorXcd::Zero(fibers.front().values.size());
  for (int j = 0; j < n; ++j) {
    const double theta = 2.0 * kPi * j / n;
    if (std::fabs(fibers[j].theta - theta) > 1e-12)
      throw WglabError("fbg_inverse: fibers not on the uniform theta grid");
    out += std::exp(cd(0.0, cell_k * theta)) * fibers[j].values;
  }
  return out / static_cast<double>(n);
}

double cell_l2_sq(const WaveguideGrid& grid, const CellFunction& f) {
  double s = 0.0;
  for (const auto& c : f.cells) s += grid.cell_measure() * c.squaredNorm();
  return s;
}

double fiber_l2_sq(const WaveguideGrid& grid,
                   const std::vector<FiberDatum>& fibers) {
  double s = 0.0;
  for (const auto& fb : fibers)
    s += grid.cell_measure() * fb.values.squaredNorm();
  return s / static_cast<double>(fibers.size());
}

}  // namespace wglab
