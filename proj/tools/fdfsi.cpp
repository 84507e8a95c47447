// Command-line driver: `run` executes one scenario, `converge` runs a time-step
// study. Exit codes: 0 success, 2 configuration error, 3 solver failure.

#include "fdfsi/fdfsi.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int exit_config = 2;
constexpr int exit_solver = 3;

struct Overrides {
  std::string scenario = "activated_disc";
  std::string config_file;
  std::vector<std::string> settings;
  int nx = 0;
  double dt = 0.0;
  int steps = 0;
  std::string scheme, pressure, bc, out;
  int stride = -1;
};

void add_common(CLI::App *cmd, Overrides &o) {
  cmd->add_option("--scenario", o.scenario,
                  "activated_disc, stretched_disc, oscillating_ball or custom")
      ->required();
  cmd->add_option("--config", o.config_file, "key=value file applied after the preset");
  cmd->add_option("--set", o.settings, "extra key=value setting (repeatable)");
  cmd->add_option("--nx", o.nx, "cells along x (other axes follow the aspect ratio)");
  cmd->add_option("--scheme", o.scheme, "implicit or explicit");
  cmd->add_option("--pressure", o.pressure, "p1 or p1_p0");
  cmd->add_option("--bc", o.bc, "periodic, noslip or slip on every face");
  cmd->add_option("--out", o.out, "output directory");
}

fdfsi::io::ScenarioConfig build_config(const Overrides &o) {
  using namespace fdfsi::io;
  ScenarioConfig c = preset(o.scenario);
  if (!o.config_file.empty())
    apply_config_file(c, o.config_file);
  for (const auto &s : o.settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw fdfsi::ConfigError("--set expects key=value, got '" + s + "'");
    apply_setting(c, s.substr(0, eq), s.substr(eq + 1));
  }
  if (o.nx > 0)
    c.nx = o.nx;
  else if (o.nx < 0)
    throw fdfsi::ConfigError("--nx must be positive");
  if (o.dt != 0.0)
    apply_setting(c, "time.dt", fdfsi::io::format_number(o.dt));
  if (o.steps != 0)
    c.n_steps = o.steps;
  if (!o.scheme.empty())
    apply_setting(c, "time.scheme", o.scheme);
  if (!o.pressure.empty())
    apply_setting(c, "pressure", o.pressure);
  if (!o.bc.empty())
    apply_setting(c, "bc", o.bc);
  if (!o.out.empty())
    c.out_dir = o.out;
  if (o.stride >= 0)
    c.field_stride = o.stride;
  c.validate();
  return c;
}

std::vector<double> parse_list(const std::string &s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(std::stod(item));
  return out;
}

int run_command(const Overrides &o) {
  const auto cfg = build_config(o);
  std::printf("scenario %s, %dD, %s scheme, dt %g, %d steps\n", cfg.scenario.c_str(), cfg.dim,
              fdfsi::timestepper::to_string(cfg.scheme).c_str(), cfg.dt, cfg.n_steps);
  const auto sum = fdfsi::io::run_scenario(cfg, [](fdfsi::Index k, const auto &r) {
    std::printf("step %5td  t=%.4f  E_total=%.10e  E_ratio=%.10f  R=%.3e  mass=%.3e\n", k, r.t,
                r.E_total, r.E_ratio.value_or(0.0), r.R_step, r.mass_variation);
  });
  std::printf("done: %td solid nodes, %td unknowns, max fixed-point iterations %d\n",
              sum.solid_nodes, sum.unknowns, sum.max_fp_iterations);
  if (cfg.out_dir.empty())
    fdfsi::io::write_timeseries(std::cout, sum.reports);
  return 0;
}

int converge_command(const Overrides &o, const std::string &dts, double tfinal) {
  const auto cfg = build_config(o);
  const auto rows = fdfsi::io::convergence_study(cfg, parse_list(dts), tfinal);
  fdfsi::io::write_convergence_table(std::cout, rows);
  if (!cfg.out_dir.empty()) {
    std::ofstream os(std::filesystem::path(cfg.out_dir) / "convergence.csv");
    fdfsi::io::write_convergence_table(os, rows);
  }
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"One-field fictitious domain fluid-structure solver"};
  app.require_subcommand(1);

  Overrides run_o;
  auto *run = app.add_subcommand("run", "run one scenario");
  add_common(run, run_o);
  run->add_option("--dt", run_o.dt, "time step");
  run->add_option("--steps", run_o.steps, "number of steps");
  run->add_option("--stride", run_o.stride, "field dump stride (0: none)");

  Overrides conv_o;
  std::string dts = "2e-2,1e-2,5e-3";
  double tfinal = 0.24;
  auto *conv = app.add_subcommand("converge", "time-step convergence study");
  add_common(conv, conv_o);
  conv->add_option("--dts", dts, "comma-separated time steps");
  conv->add_option("--tfinal", tfinal, "final time, a multiple of every dt");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config;
  }

  try {
    if (run->parsed())
      return run_command(run_o);
    return converge_command(conv_o, dts, tfinal);
  } catch (const fdfsi::ConfigError &e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return exit_config;
  } catch (const std::invalid_argument &e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return exit_config;
  } catch (const fdfsi::Error &e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return exit_solver;
  }
}
