#pragma once

#include "fdfsi/timestepper/state.hpp"

#include <cmath>
#include <optional>

namespace fdfsi::diagnostics {

/// Neo-Hookean strain energy density (c1/2)(tr(F F^T) - d) - c1 ln det F.
template <int Dim>
double strain_energy_density(const Tensor<Dim> &F, double c1) {
  const double J = F.determinant();
  if (!(J > 0.0))
    throw std::invalid_argument("strain_energy_density: det F must be positive");
  return 0.5 * c1 * (F.squaredNorm() - Dim) - c1 * std::log(J);
}

/// Sum over elements of the strain energy density times the reference measure.
template <int Dim>
double potential_energy(const assembly::TensorField<Dim> &F, const Vector &reference_measures,
                        double c1) {
  if (F.size() != static_cast<std::size_t>(reference_measures.size()))
    throw std::invalid_argument("potential_energy: need one tensor per element");
  double e = 0.0;
  for (std::size_t k = 0; k < F.size(); ++k) {
    const double J = F[k].determinant();
    if (!(J > 0.0))
      throw InvertedElementError(static_cast<Index>(k), J, "potential_energy");
    e += reference_measures[k] * strain_energy_density<Dim>(F[k], c1);
  }
  return e;
}

/// (c1 dt^2 / 2) sum |e| (|F_next^{-1} G|^2 - |G|^2): the sign-indefinite
/// remainder of the discrete energy estimate.
template <int Dim>
double residual_implicit(const assembly::TensorField<Dim> &F_next,
                         const assembly::TensorField<Dim> &grad_u,
                         const Vector &reference_measures, double c1, double dt) {
  if (F_next.size() != grad_u.size() ||
      F_next.size() != static_cast<std::size_t>(reference_measures.size()))
    throw std::invalid_argument("residual_implicit: need one tensor per element");
  double r = 0.0;
  for (std::size_t k = 0; k < F_next.size(); ++k) {
    const double J = F_next[k].determinant();
    if (!(J > 0.0) || !std::isfinite(J))
      throw InvertedElementError(static_cast<Index>(k), J, "residual_implicit");
    const Tensor<Dim> FiG = F_next[k].inverse() * grad_u[k];
    r += reference_measures[k] * (FiG.squaredNorm() - grad_u[k].squaredNorm());
  }
  return 0.5 * c1 * dt * dt * r;
}

/// c1 dt sum |e| [tr(G F_prev^{-1}) - tr(G F_next^{-1})]: divergence of the solid
/// velocity on the old configuration minus that on the new one.
template <int Dim>
double residual_explicit_divergence(const assembly::TensorField<Dim> &F_prev,
                                    const assembly::TensorField<Dim> &F_next,
                                    const assembly::TensorField<Dim> &grad_u,
                                    const Vector &reference_measures, double c1, double dt) {
  if (F_prev.size() != F_next.size() || F_next.size() != grad_u.size() ||
      F_next.size() != static_cast<std::size_t>(reference_measures.size()))
    throw std::invalid_argument("residual_explicit_divergence: need one tensor per element");
  double r = 0.0;
  for (std::size_t k = 0; k < F_next.size(); ++k)
    r += reference_measures[k] *
         ((grad_u[k] * F_prev[k].inverse()).trace() - (grad_u[k] * F_next[k].inverse()).trace());
  return c1 * dt * r;
}

struct ExplicitResiduals {
  double R_im = 0.0;
  double R_ex = 0.0;
  double R_split = 0.0;
  double total() const { return R_im + R_ex + R_split; }
};

/// Residual terms of a splitting step. R_split is -dt rho_f u_{n+1}^T C(u_n) u_half
/// with the same convection operator the substep was solved with.
template <int Dim>
ExplicitResiduals residual_explicit_terms(const timestepper::Problem<Dim> &problem,
                                          const timestepper::SimulationState<Dim> &post) {
  const auto &rec = post.last;
  if (!rec.valid || !rec.explicit_scheme || rec.u_half.size() == 0)
    throw std::invalid_argument("residual_explicit_terms: state was not produced by step_explicit");
  const auto &params = problem.params();
  const auto &meas = problem.solid().reference_measures();
  ExplicitResiduals out;
  out.R_im = residual_implicit<Dim>(post.F, rec.grad_w, meas, params.c1, rec.dt);
  out.R_ex = residual_explicit_divergence<Dim>(rec.F_prev, post.F, rec.grad_w, meas, params.c1, rec.dt);
  const bool moving = rec.u_half.template lpNorm<Eigen::Infinity>() > 0.0 &&
                      rec.u_prev.template lpNorm<Eigen::Infinity>() > 0.0;
  if (moving) {
    const SparseMatrix C = problem.fluid().convection(rec.u_prev, problem.settings().convection);
    const Index n = problem.layout().n_velocity;
    double s = 0.0;
    for (int c = 0; c < Dim; ++c)
      s += post.u.segment(c * n, n).dot(C * rec.u_half.segment(c * n, n));
    out.R_split = -rec.dt * params.rho_f * s;
  }
  return out;
}

/// Residual of the step that produced `post`, for either scheme.
template <int Dim>
double step_residual(const timestepper::Problem<Dim> &problem,
                     const timestepper::SimulationState<Dim> &post) {
  if (!post.last.valid)
    return 0.0;
  if (post.last.explicit_scheme)
    return residual_explicit_terms(problem, post).total();
  return residual_implicit<Dim>(post.F, post.last.grad_w, problem.solid().reference_measures(),
                                problem.params().c1, post.last.dt);
}

/// Relative change of solid measure between the initial and current configurations.
template <int Dim>
double mass_variation(const mesh::SolidMesh<Dim> &solid) {
  const double m0 = mesh::solid_measure(solid, mesh::Configuration::initial);
  const double m = mesh::solid_measure(solid, mesh::Configuration::current);
  return (m - m0) / m0;
}

struct EnergyReport {
  double t = 0.0;
  double E_k_fluid = 0.0;
  double E_k_solid_delta = 0.0;
  double E_d = 0.0;
  double E_p = 0.0;
  double E_total = 0.0;
  std::optional<double> E_ratio; // absent when the reference total is zero
  double R_step = 0.0;
  double mass_solid = 0.0;
  double mass_variation = 0.0;
};

template <int Dim>
EnergyReport energy_report(const timestepper::Problem<Dim> &problem,
                           const timestepper::SimulationState<Dim> &state, double E_total_t0) {
  const auto &params = problem.params();
  EnergyReport r;
  r.t = state.t;
  r.E_k_fluid = assembly::fluid_kinetic_energy(problem.fluid(), params.rho_f, state.u);
  r.E_k_solid_delta = assembly::solid_kinetic_energy(problem.solid(), params.rho_delta(), state.w);
  r.E_d = state.E_d_accum;
  r.E_p = potential_energy<Dim>(state.F, problem.solid().reference_measures(), params.c1);
  r.E_total = r.E_k_fluid + r.E_k_solid_delta + r.E_d + r.E_p;
  if (E_total_t0 != 0.0)
    r.E_ratio = r.E_total / E_total_t0;
  r.R_step = step_residual(problem, state);
  r.mass_solid = params.rho_s * mesh::solid_measure(state.solid, mesh::Configuration::current);
  r.mass_variation = mass_variation(state.solid);
  return r;
}

/// Report at the initial state, which defines the reference total.
template <int Dim>
EnergyReport initial_report(const timestepper::Problem<Dim> &problem,
                            const timestepper::SimulationState<Dim> &state) {
  EnergyReport r = energy_report(problem, state, 0.0);
  if (r.E_total != 0.0)
    r.E_ratio = 1.0;
  return r;
}

} // namespace fdfsi::diagnostics
