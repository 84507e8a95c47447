#pragma once

#include "fdfsi/diagnostics/energy.hpp"
#include "fdfsi/io/config.hpp"
#include "fdfsi/io/timeseries.hpp"
#include "fdfsi/io/vtk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace fdfsi::io {

/// A stepper failure during a run. Carries the failing step and the reports
/// collected before it.
class RunFailure : public SolverError {
public:
  RunFailure(Index step, const std::string &cause, std::vector<diagnostics::EnergyReport> partial)
      : SolverError(cause.starts_with("step ") ? cause : "step " + std::to_string(step) + ": " + cause),
        step_(step),
        partial_(std::move(partial)) {}
  Index step() const noexcept { return step_; }
  const std::vector<diagnostics::EnergyReport> &partial() const noexcept { return partial_; }

private:
  Index step_;
  std::vector<diagnostics::EnergyReport> partial_;
};

struct RunSummary {
  std::vector<diagnostics::EnergyReport> reports; // t_0 first, then one per step
  int max_fp_iterations = 0;
  double max_continuity_residual = 0.0;
  double max_solver_residual = 0.0;
  Index solid_nodes = 0;
  Index solid_elements = 0;
  Index unknowns = 0;
};

template <int Dim>
struct RunResult {
  timestepper::SimulationState<Dim> final_state;
  RunSummary summary;
};

/// Called after every step with the new report.
using ProgressCallback = std::function<void(Index step, const diagnostics::EnergyReport &)>;

namespace detail {

inline std::string field_prefix(const std::string &dir, Index step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fields_%05td", step);
  return (std::filesystem::path(dir) / buf).string();
}

inline void prepare_output(const std::string &dir) {
  if (dir.empty())
    return;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw Error("cannot create output directory '" + dir + "': " + ec.message());
}

inline std::string timeseries_path(const std::string &dir) {
  return (std::filesystem::path(dir) / "timeseries.csv").string();
}

} // namespace detail

template <int Dim>
RunResult<Dim> run_scenario_dim(const ScenarioConfig &config, const ProgressCallback &progress = {}) {
  config.validate();
  if (config.dim != Dim)
    throw ConfigError("run_scenario: configuration is for dimension " + std::to_string(config.dim));
  const auto grid = make_grid<Dim>(config);
  const auto solid = make_solid<Dim>(config);
  const timestepper::Problem<Dim> problem(grid, solid, config.physical, config.pressure, config.solver);
  detail::prepare_output(config.out_dir);

  RunResult<Dim> result;
  auto &sum = result.summary;
  sum.solid_nodes = solid.num_nodes();
  sum.solid_elements = solid.num_elements();
  sum.unknowns = problem.layout().size();

  auto state = timestepper::initial_state(problem, solid, config.init);
  const auto r0 = diagnostics::initial_report(problem, state);
  const double E0 = r0.E_total;
  sum.reports.push_back(r0);
  const Index n_p0 = problem.layout().n_p0;
  const bool dump = !config.out_dir.empty() && config.field_stride > 0;
  if (dump)
    write_fields(state, grid, n_p0, detail::field_prefix(config.out_dir, 0));

  for (Index k = 1; k <= config.n_steps; ++k) {
    try {
      state = timestepper::step(problem, state, config.dt, config.scheme);
    } catch (const ConfigError &) {
      throw;
    } catch (const Error &e) {
      if (!config.out_dir.empty())
        write_timeseries(detail::timeseries_path(config.out_dir), sum.reports);
      throw RunFailure(k, e.what(), sum.reports);
    }
    // the step index doubles as the clock: t = k dt exactly, not a running sum
    state.t = static_cast<double>(k) * config.dt;
    auto r = diagnostics::energy_report(problem, state, E0);
    sum.max_fp_iterations = std::max(sum.max_fp_iterations, state.last.iterations);
    sum.max_continuity_residual = std::max(sum.max_continuity_residual, state.last.continuity_residual);
    sum.max_solver_residual = std::max(sum.max_solver_residual, state.last.solver_residual);
    sum.reports.push_back(r);
    if (progress)
      progress(k, r);
    if (dump && k % config.field_stride == 0)
      write_fields(state, grid, n_p0, detail::field_prefix(config.out_dir, k));
  }
  if (!config.out_dir.empty())
    write_timeseries(detail::timeseries_path(config.out_dir), sum.reports);
  result.final_state = std::move(state);
  return result;
}

/// Dimension dispatch; returns the time series and run statistics.
inline RunSummary run_scenario(const ScenarioConfig &config, const ProgressCallback &progress = {}) {
  config.validate();
  if (config.dim == 2)
    return run_scenario_dim<2>(config, progress).summary;
  return run_scenario_dim<3>(config, progress).summary;
}

struct ConvergenceRow {
  double dt = 0.0;
  int steps = 0;
  double E_total_final = 0.0;
  double E_ratio_final = 0.0;
  double max_R_over_E0 = 0.0;
};

/// Number of steps of size dt that reach t_final; an error if dt does not
/// divide t_final.
inline int steps_to_reach(double t_final, double dt) {
  if (!(dt > 0.0) || !(t_final > 0.0))
    throw ConfigError("convergence study: dt and final time must be positive");
  const double q = t_final / dt;
  const double n = std::round(q);
  if (n < 1.0 || std::abs(q - n) > 1e-9 * std::max(1.0, q))
    throw ConfigError("convergence study: final time " + format_number(t_final) +
                      " is not an integer multiple of dt = " + format_number(dt));
  return static_cast<int>(n);
}

/// Runs the configuration once per dt up to t_final.
inline std::vector<ConvergenceRow> convergence_study(const ScenarioConfig &config,
                                                     const std::vector<double> &dts, double t_final) {
  if (dts.size() < 2)
    throw ConfigError("convergence study: need at least two time steps");
  std::vector<int> steps;
  for (double dt : dts)
    steps.push_back(steps_to_reach(t_final, dt));
  std::vector<ConvergenceRow> rows;
  for (std::size_t i = 0; i < dts.size(); ++i) {
    ScenarioConfig c = config;
    c.dt = dts[i];
    c.n_steps = steps[i];
    c.field_stride = 0;
    if (!config.out_dir.empty())
      c.out_dir = (std::filesystem::path(config.out_dir) / ("dt_" + format_number(dts[i]))).string();
    const auto sum = run_scenario(c);
    ConvergenceRow row;
    row.dt = dts[i];
    row.steps = steps[i];
    row.E_total_final = sum.reports.back().E_total;
    row.E_ratio_final = sum.reports.back().E_ratio.value_or(std::nan(""));
    const double E0 = sum.reports.front().E_total;
    double maxR = 0.0;
    for (const auto &r : sum.reports)
      maxR = std::max(maxR, std::abs(r.R_step));
    row.max_R_over_E0 = E0 != 0.0 ? maxR / E0 : std::nan("");
    rows.push_back(row);
  }
  return rows;
}

inline void write_convergence_table(std::ostream &os, const std::vector<ConvergenceRow> &rows) {
  os << "dt,steps,E_total_final,E_ratio_final,max_R_over_E0\n";
  for (const auto &r : rows)
    os << format_number(r.dt) << ',' << r.steps << ',' << format_number(r.E_total_final) << ','
       << format_number(r.E_ratio_final) << ',' << format_number(r.max_R_over_E0) << '\n';
}

} // namespace fdfsi::io
