#pragma once

#include "fdfsi/timestepper/saddle_solver.hpp"
#include "fdfsi/timestepper/state.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>

namespace fdfsi::timestepper {

/// x' = x + dt w and F' = F + dt grad_X w. Fails if any det F' <= 0.
template <int Dim>
std::pair<mesh::SolidMesh<Dim>, assembly::TensorField<Dim>>
update_solid_configuration(const assembly::SolidOperators<Dim> &ops,
                           const mesh::SolidMesh<Dim> &solid, const assembly::TensorField<Dim> &F,
                           const NodalField &w, double dt) {
  if (!(dt > 0.0))
    throw std::invalid_argument("update_solid_configuration: dt must be positive");
  if (F.size() != static_cast<std::size_t>(solid.num_elements()))
    throw std::invalid_argument("update_solid_configuration: need one tensor per element");
  const auto G = ops.gradient(w);
  assembly::TensorField<Dim> Fn(F.size());
  for (std::size_t e = 0; e < F.size(); ++e) {
    Fn[e] = F[e] + dt * G[e];
    const double J = Fn[e].determinant();
    if (!(J > 0.0))
      throw InvertedElementError(static_cast<Index>(e), J, "update_solid_configuration");
  }
  return {solid.with_current_coords(solid.current_coords() + dt * w), std::move(Fn)};
}

namespace detail {

inline double relative_increment(const Vector &next, const Vector &prev) {
  const double diff = (next - prev).norm();
  if (diff == 0.0)
    return 0.0;
  return diff / std::max(next.norm(), prev.norm());
}

inline std::string format_sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

inline std::string step_prefix(Index step) {
  return "step " + std::to_string(step) + ": ";
}

} // namespace detail

/// One step of the implicit scheme. The solid configuration, the J^{-1}
/// divergence load and the advecting velocity are lagged by one fixed-point
/// iterate; the loop stops when the relative velocity increment drops below
/// fp_tol.
template <int Dim>
SimulationState<Dim> step_implicit(const Problem<Dim> &problem, const SimulationState<Dim> &state,
                                   double dt) {
  if (!(dt > 0.0))
    throw std::invalid_argument("step_implicit: dt must be positive");
  const auto &grid = problem.grid();
  const auto &fops = problem.fluid();
  const auto &sops = problem.solid();
  const auto &params = problem.params();
  const auto &set = problem.settings();

  Vector u_it = state.u;
  mesh::SolidMesh<Dim> solid_it = state.solid;
  assembly::TensorField<Dim> F_it = state.F;
  NodalField w_it = NodalField::Zero(state.solid.num_nodes(), Dim); // F_it = F_n + dt grad_X w_it

  SimulationState<Dim> next;
  StepRecord<Dim> rec;
  rec.valid = true;
  rec.dt = dt;
  rec.F_prev = state.F;
  rec.u_prev = state.u;
  bool converged = false;
  for (int k = 1; k <= set.fp_max; ++k) {
    const auto P = coupling::build_coupling(grid, solid_it);
    const auto fluid = assembly::assemble_fluid_operator(fops, params, dt, state.u, u_it, set.convection);
    const auto solid = assembly::assemble_solid_operator(sops, state.F, params, dt, state.w, F_it, &w_it);
    const auto sys = assembly::apply_constraints(
        assembly::merge_systems(fluid, &solid, &P, problem.layout()), problem.constraints());
    const auto sol =
      solve_saddle_point(problem.coupled_solver(), sys, set.solver_tol, &fops.pressure_weights());
    rec.solver_residual = std::max(rec.solver_residual, sol.relative_residual);

    NodalField w = coupling::interpolate_to_solid(P, sol.u, Dim);
    auto [solid_next, F_next] = update_solid_configuration(sops, state.solid, state.F, w, dt);
    const double inc = detail::relative_increment(sol.u, u_it);
    rec.increments.push_back(inc);
    rec.iterations = k;
    u_it = sol.u;
    solid_it = std::move(solid_next);
    F_it = std::move(F_next);
    w_it = w;
    next.p = sol.p;
    next.w = std::move(w);
    if (inc < set.fp_tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw ConvergenceError(detail::step_prefix(state.step_index + 1) +
                               "fixed-point iteration did not converge in " +
                               std::to_string(set.fp_max) + " iterations (last increment " +
                               detail::format_sci(rec.increments.back()) + ")",
                           rec.increments);

  next.t = state.t + dt;
  next.step_index = state.step_index + 1;
  next.u = std::move(u_it);
  next.solid = std::move(solid_it);
  next.F = std::move(F_it);
  next.E_d_accum = state.E_d_accum + dt * assembly::viscous_dissipation_rate(fops, params.mu_f, next.u);
  rec.grad_w = sops.gradient(next.w);
  rec.continuity_residual = (fops.divergence() * next.u).norm();
  next.last = std::move(rec);
  return next;
}

/// One step of the two-step splitting scheme: a convection substep from u_n
/// (linearised about u_n), then the coupled diffusion solve with every solid
/// term taken on the known configuration, then the solid update.
template <int Dim>
SimulationState<Dim> step_explicit(const Problem<Dim> &problem, const SimulationState<Dim> &state,
                                   double dt) {
  if (!(dt > 0.0))
    throw std::invalid_argument("step_explicit: dt must be positive");
  const auto &grid = problem.grid();
  const auto &fops = problem.fluid();
  const auto &sops = problem.solid();
  const auto &params = problem.params();
  const auto &set = problem.settings();
  const auto &L = problem.layout();

  StepRecord<Dim> rec;
  rec.valid = true;
  rec.explicit_scheme = true;
  rec.dt = dt;
  rec.iterations = 1;
  rec.F_prev = state.F;
  rec.u_prev = state.u;

  // convection substep, velocity unknowns only
  assembly::GlobalSystem conv;
  conv.layout = L;
  conv.layout.n_q1 = 0;
  conv.layout.n_p0 = 0;
  conv.has_pressure = false;
  {
    SparseMatrix scalar = (params.rho_f / dt) * fops.mass();
    if (state.u.template lpNorm<Eigen::Infinity>() > 0.0)
      scalar += params.rho_f * fops.convection(state.u, set.convection);
    conv.matrix = assembly::block_diagonal(scalar, Dim);
    conv.rhs = Vector(L.velocity_size());
    const Index n = L.n_velocity;
    for (int c = 0; c < Dim; ++c)
      conv.rhs.segment(c * n, n) = (params.rho_f / dt) * (fops.mass() * state.u.segment(c * n, n));
  }
  const auto half =
      solve_saddle_point(problem.convection_solver(),
                         assembly::apply_constraints(conv, problem.velocity_constraints()),
                         set.solver_tol);
  rec.solver_residual = half.relative_residual;
  rec.u_half = half.u;

  const auto P = coupling::build_coupling(grid, state.solid);
  const auto fluid = assembly::assemble_fluid_operator(fops, params, dt, rec.u_half, Vector(),
                                                       set.convection);
  const auto solid = assembly::assemble_solid_operator(sops, state.F, params, dt, state.w, state.F);
  const auto sys = assembly::apply_constraints(assembly::merge_systems(fluid, &solid, &P, L),
                                               problem.constraints());
  const auto sol =
      solve_saddle_point(problem.coupled_solver(), sys, set.solver_tol, &fops.pressure_weights());
  rec.solver_residual = std::max(rec.solver_residual, sol.relative_residual);

  SimulationState<Dim> next;
  next.w = coupling::interpolate_to_solid(P, sol.u, Dim);
  auto [solid_next, F_next] = update_solid_configuration(sops, state.solid, state.F, next.w, dt);
  next.t = state.t + dt;
  next.step_index = state.step_index + 1;
  next.u = sol.u;
  next.p = sol.p;
  next.solid = std::move(solid_next);
  next.F = std::move(F_next);
  next.E_d_accum = state.E_d_accum + dt * assembly::viscous_dissipation_rate(fops, params.mu_f, next.u);
  rec.grad_w = sops.gradient(next.w);
  rec.continuity_residual = (fops.divergence() * next.u).norm();
  next.last = std::move(rec);
  return next;
}

enum class Scheme { implicit_scheme, explicit_scheme };

inline Scheme parse_scheme(const std::string &s) {
  if (s == "implicit")
    return Scheme::implicit_scheme;
  if (s == "explicit")
    return Scheme::explicit_scheme;
  throw ConfigError("unknown scheme '" + s + "' (expected implicit or explicit)");
}

inline std::string to_string(Scheme s) {
  return s == Scheme::implicit_scheme ? "implicit" : "explicit";
}

template <int Dim>
SimulationState<Dim> step(const Problem<Dim> &problem, const SimulationState<Dim> &state, double dt,
                          Scheme scheme) {
  return scheme == Scheme::implicit_scheme ? step_implicit(problem, state, dt)
                                           : step_explicit(problem, state, dt);
}

} // namespace fdfsi::timestepper
