#pragma once

#include "fdfsi/coupling/coupling_matrix.hpp"
#include "fdfsi/timestepper/problem.hpp"

#include <cmath>
#include <numbers>

namespace fdfsi::timestepper {

/// What the last step left behind for the diagnostics.
template <int Dim>
struct StepRecord {
  bool valid = false;
  bool explicit_scheme = false;
  double dt = 0.0;
  int iterations = 0;
  std::vector<double> increments;   // fixed-point history
  double solver_residual = 0.0;     // worst accepted relative residual
  double continuity_residual = 0.0; // |B u|
  assembly::TensorField<Dim> F_prev; // F at the start of the step
  assembly::TensorField<Dim> grad_w; // grad_X of the solid velocity
  Vector u_prev;                     // fluid velocity at the start of the step
  Vector u_half;                     // convection substep result (explicit only)
};

template <int Dim>
struct SimulationState {
  double t = 0.0;
  Index step_index = 0;
  Vector u; // component-blocked velocity coefficients
  Vector p; // Q1 coefficients, then P0 cell values
  mesh::SolidMesh<Dim> solid;
  assembly::TensorField<Dim> F; // one tensor per solid element
  NodalField w;                 // solid nodal velocity, P u on the accepted configuration
  double E_d_accum = 0.0;
  StepRecord<Dim> last;
};

/// Initial velocity from a stream function psi0 sin(a x) sin(b y):
/// u = (d psi/dy, -d psi/dx), zero in z.
struct StreamFunction {
  double psi0 = 0.05;
  double a = 2.0 * std::numbers::pi;
  double b = 2.0 * std::numbers::pi;

  template <int Dim>
  Point<Dim> velocity(const Point<Dim> &x) const {
    Point<Dim> v = Point<Dim>::Zero();
    v[0] = psi0 * b * std::sin(a * x[0]) * std::cos(b * x[1]);
    v[1] = -psi0 * a * std::cos(a * x[0]) * std::sin(b * x[1]);
    return v;
  }
};

enum class InitialKind { stream_function, zero, stretched };

struct InitialCondition {
  InitialKind kind = InitialKind::zero;
  StreamFunction stream;
  double stretch = 1.4; // x scaled by s, y by 1/s (area preserving)
};

/// Samples a pointwise field at every velocity dof. Periodic partner nodes
/// share a dof; the last node visited wins, which is harmless for periodic data.
template <int Dim, typename Field>
Vector interpolate_velocity(const mesh::FluidGrid<Dim> &grid, Field &&field) {
  const Index n = grid.num_velocity_dofs();
  Vector u = Vector::Zero(Dim * n);
  for (Index node = 0; node < grid.num_velocity_nodes(); ++node) {
    const Point<Dim> v = field(grid.velocity_node(node));
    const Index dof = grid.velocity_dof(node);
    for (int c = 0; c < Dim; ++c)
      u[c * n + dof] = v[c];
  }
  return u;
}

template <int Dim>
SimulationState<Dim> initial_state(const Problem<Dim> &problem, const mesh::SolidMesh<Dim> &solid,
                                   const InitialCondition &init) {
  SimulationState<Dim> s;
  const auto &grid = problem.grid();
  const auto &L = problem.layout();
  s.p = Vector::Zero(L.pressure_size());
  s.F = assembly::identity_field<Dim>(solid.num_elements());
  switch (init.kind) {
  case InitialKind::stream_function:
    s.u = interpolate_velocity(grid, [&](const Point<Dim> &x) { return init.stream.velocity(x); });
    s.solid = solid;
    break;
  case InitialKind::zero:
    s.u = Vector::Zero(L.velocity_size());
    s.solid = solid;
    break;
  case InitialKind::stretched: {
    if (!(init.stretch > 0.0))
      throw ConfigError("solid.stretch must be positive");
    s.u = Vector::Zero(L.velocity_size());
    s.solid = mesh::apply_stretch<Dim>(solid, init.stretch, Point<Dim>::Zero());
    Tensor<Dim> F0 = Tensor<Dim>::Identity();
    F0(0, 0) = init.stretch;
    F0(1, 1) = 1.0 / init.stretch;
    s.F.assign(static_cast<std::size_t>(solid.num_elements()), F0);
    break;
  }
  }
  const auto P = coupling::build_coupling(grid, s.solid);
  s.w = coupling::interpolate_to_solid(P, s.u, Dim);
  return s;
}

} // namespace fdfsi::timestepper
