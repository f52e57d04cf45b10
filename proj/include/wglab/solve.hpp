// Fibered initial-boundary-value solves on the period cell: source-driven
// and data-driven (lifted) Crank-Nicolson evolutions in both time
// directions, with streaming observers so long runs never store the full
// space-time field.

#pragma once

#include <functional>
#include <vector>

#include "wglab/operator.hpp"

namespace wglab {

enum class Orientation { Forward, Backward };  // initial at 0 / terminal at T

/// Full space-time field on the cell grid; levels are interior dof vectors,
/// boundary holds the imposed Dirichlet values when nonzero data was used.
struct FiberField {
  double theta = 0.0;
  Orientation orientation = Orientation::Forward;
  const WaveguideGrid* grid = nullptr;
  std::vector<VectorXcd> levels;
  std::vector<VectorXcd> boundary;  // empty for homogeneous solves

  const VectorXcd& at(int k) const { return levels[k]; }
  bool has_boundary() const { return !boundary.empty(); }

  /// Value of the x1 = 1 ghost column: e^{i theta} times the x1 = 0 value.
  cd wrap_value(int k, int p_interior) const;

  /// L2 over the space-time cylinder (trapezoid in t).
  double l2_q() const;
};

struct SourceTerm {
  std::function<VectorXcd(double)> value;     // interior samples at time t
  std::function<VectorXcd(double)> dt_value;  // analytic time derivative

  static SourceTerm zero(const WaveguideGrid& g);
  static SourceTerm analytic(std::function<VectorXcd(double)> v,
                             std::function<VectorXcd(double)> dv);
};

/// Per-level callback; `g` is the Dirichlet boundary data of the emitted
/// field (nullptr for homogeneous solves).
using LevelFn = std::function<void(int k, double t, const VectorXcd& u,
                                   const VectorXcd* g)>;

/// Dirichlet lift: interior and boundary samples per time level.
struct Lift {
  virtual ~Lift() = default;
  virtual VectorXcd interior(int k) const = 0;
  virtual VectorXcd boundary(int k) const = 0;
};

/// Lift wrapping a stored field (testing aid).
struct FieldLift final : Lift {
  const FiberField* field;
  explicit FieldLift(const FiberField& f) : field(&f) {}
  VectorXcd interior(int k) const override { return field->levels[k]; }
  VectorXcd boundary(int k) const override;
};

/// (i d/dt + Delta_A) w = f with w == 0 on the lateral boundary and zero
/// initial (forward) or terminal (backward) state. Returns the final level;
/// observers see every level in time order (reversed order for backward).
VectorXcd run_homogeneous(const CrankNicolson& cn, const SourceTerm& f,
                          Orientation orient,
                          const std::vector<LevelFn>& observers = {});

/// Same but storing all levels.
FiberField solve_source(const CrankNicolson& cn, const SourceTerm& f,
                        Orientation orient);

/// Homogeneous evolution from an initial state (unitarity checks).
FiberField cauchy_evolve(const CrankNicolson& cn, const VectorXcd& u0,
                         const std::vector<LevelFn>& observers = {},
                         bool store = true);

/// Data-driven solve via the lift: u = W - w where w solves the source
/// problem with the discrete residual of W. The emitted field satisfies
/// u = W on the lateral boundary exactly and the discrete equation to
/// solver accuracy. Orientation must match the lift's vanishing end.
FiberField solve_dirichlet(const CrankNicolson& cn, const Lift& W,
                           Orientation orient,
                           const std::vector<LevelFn>& observers = {},
                           bool store = true);

/// Squared H1_0-type gradient seminorm of one level (boundary data g may be
/// null for homogeneous fields); x1 edges wrap with the fiber phase.
double grad_sq_cell(const WaveguideGrid& grid, double theta,
                    const VectorXcd& u, const VectorXcd* g = nullptr);

/// Trapezoid-in-time accumulator helpers.
inline double time_weight(const WaveguideGrid& g, int k) {
  return (k == 0 || k == g.nt()) ? 0.5 * g.dt() : g.dt();
}

}  // namespace wglab
