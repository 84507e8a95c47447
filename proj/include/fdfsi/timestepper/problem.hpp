#pragma once

#include "fdfsi/assembly/fluid_operator.hpp"
#include "fdfsi/assembly/global_system.hpp"
#include "fdfsi/assembly/solid_operator.hpp"
#include "fdfsi/mesh/fluid_grid.hpp"
#include "fdfsi/mesh/solid_mesh.hpp"
#include "fdfsi/timestepper/saddle_solver.hpp"

namespace fdfsi::timestepper {

struct SolverSettings {
  assembly::ConvectionForm convection = assembly::ConvectionForm::skew;
  double fp_tol = 1e-8; // relative velocity increment
  int fp_max = 25;
  double solver_tol = 1e-10; // relative linear residual

  void validate() const {
    if (!(fp_tol > 0.0))
      throw ConfigError("solver.fp_tol must be positive");
    if (fp_max < 1)
      throw ConfigError("solver.fp_max must be at least 1");
    if (!(solver_tol > 0.0))
      throw ConfigError("solver.solver_tol must be positive");
  }
};

/// Everything about a run that does not change between steps: the grid and its
/// operators, the solid's reference operators, parameters and constraints.
template <int Dim>
class Problem {
public:
  Problem(const mesh::FluidGrid<Dim> &grid, const mesh::SolidMesh<Dim> &solid,
          const assembly::PhysicalParams &params, assembly::PressureSpace space,
          const SolverSettings &settings = {})
      : fluid_(grid, space), solid_(solid), params_(params), settings_(settings) {
    params_.validate();
    settings_.validate();
    constraints_ = assembly::boundary_constraints(fluid_.grid(), fluid_.layout(), true);
    velocity_constraints_ = assembly::boundary_constraints(fluid_.grid(), fluid_.layout(), false);
  }

  const mesh::FluidGrid<Dim> &grid() const { return fluid_.grid(); }
  const assembly::FluidOperators<Dim> &fluid() const { return fluid_; }
  const assembly::SolidOperators<Dim> &solid() const { return solid_; }
  const assembly::PhysicalParams &params() const { return params_; }
  const SolverSettings &settings() const { return settings_; }
  const assembly::DofLayout &layout() const { return fluid_.layout(); }
  /// Velocity boundary constraints plus pressure pins.
  const assembly::ConstraintSet &constraints() const { return constraints_; }
  /// Velocity boundary constraints only.
  const assembly::ConstraintSet &velocity_constraints() const { return velocity_constraints_; }

  /// Factorization caches for the coupled system and the convection substep.
  /// They only affect speed, so they are mutable; a Problem must not be shared
  /// between concurrently running simulations.
  LinearSolver &coupled_solver() const { return coupled_solver_; }
  LinearSolver &convection_solver() const { return convection_solver_; }

private:
  assembly::FluidOperators<Dim> fluid_;
  assembly::SolidOperators<Dim> solid_;
  assembly::PhysicalParams params_;
  SolverSettings settings_;
  assembly::ConstraintSet constraints_, velocity_constraints_;
  mutable LinearSolver coupled_solver_, convection_solver_;
};

} // namespace fdfsi::timestepper
