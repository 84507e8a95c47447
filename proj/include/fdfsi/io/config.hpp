#pragma once

#include "fdfsi/assembly/params.hpp"
#include "fdfsi/mesh/fluid_grid.hpp"
#include "fdfsi/mesh/solid_generators.hpp"
#include "fdfsi/timestepper/problem.hpp"
#include "fdfsi/timestepper/state.hpp"
#include "fdfsi/timestepper/stepper.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

namespace fdfsi::io {

/// Full description of a run. Presets fill every field; key=value text and
/// command-line flags override individual entries.
struct ScenarioConfig {
  std::string scenario = "activated_disc";
  int dim = 2;
  assembly::PhysicalParams physical;

  // fluid grid
  std::array<double, 3> lower{0.0, 0.0, 0.0};
  std::array<double, 3> upper{1.0, 1.0, 1.0};
  int nx = 16;
  std::optional<int> ny, nz; // default: nx scaled by the aspect ratio
  std::array<mesh::BoundaryKind, 6> faces{};

  // solid
  mesh::SolidShape shape = mesh::SolidShape::disc;
  std::array<double, 3> center{0.5, 0.5, 0.0};
  double radius = 0.2;
  double target_h = 0.0; // 0: 0.75 of the fluid velocity-node spacing
  timestepper::InitialCondition init;

  // time stepping
  double dt = 1e-2;
  int n_steps = 50;
  timestepper::Scheme scheme = timestepper::Scheme::implicit_scheme;
  assembly::PressureSpace pressure = assembly::PressureSpace::p1_p0;
  timestepper::SolverSettings solver;

  // output
  std::string out_dir;
  int field_stride = 0; // 0: no field dumps

  int cells(int axis) const {
    if (axis == 0)
      return nx;
    const std::optional<int> &set = axis == 1 ? ny : nz;
    if (set)
      return *set;
    const double ratio = (upper[axis] - lower[axis]) / (upper[0] - lower[0]);
    return std::max(2, static_cast<int>(std::lround(nx * ratio)));
  }

  double resolved_target_h() const {
    if (target_h > 0.0)
      return target_h;
    return 0.75 * 0.5 * (upper[0] - lower[0]) / nx;
  }

  void validate() const {
    if (dim != 2 && dim != 3)
      throw ConfigError("grid.dim must be 2 or 3");
    physical.validate();
    solver.validate();
    if (!(dt > 0.0) || !std::isfinite(dt))
      throw ConfigError("time.dt must be positive");
    if (n_steps < 1)
      throw ConfigError("time.steps must be at least 1");
    for (int k = 0; k < dim; ++k) {
      if (cells(k) < 2)
        throw ConfigError("grid: need at least 2 cells along axis " + std::to_string(k));
      if (!(upper[k] > lower[k]))
        throw ConfigError("grid: degenerate extent along axis " + std::to_string(k));
    }
    if (!(radius > 0.0))
      throw ConfigError("solid.radius must be positive");
    if (target_h < 0.0)
      throw ConfigError("solid.target_h must be nonnegative");
    if (resolved_target_h() > radius)
      throw ConfigError("solid.target_h exceeds the solid radius");
    if (field_stride < 0)
      throw ConfigError("output.stride must be nonnegative");
    const bool shape3d = shape == mesh::SolidShape::ball_octant;
    if (shape3d != (dim == 3))
      throw ConfigError("solid.shape does not match grid.dim");
  }
};

inline mesh::BoundaryKind parse_boundary_kind(const std::string &s) {
  if (s == "wall" || s == "noslip")
    return mesh::BoundaryKind::wall;
  if (s == "periodic")
    return mesh::BoundaryKind::periodic;
  if (s == "symmetry" || s == "slip")
    return mesh::BoundaryKind::symmetry;
  throw ConfigError("unknown boundary kind '" + s + "' (expected wall, periodic or symmetry)");
}

inline std::string to_string(mesh::BoundaryKind k) {
  switch (k) {
  case mesh::BoundaryKind::wall:
    return "wall";
  case mesh::BoundaryKind::periodic:
    return "periodic";
  case mesh::BoundaryKind::symmetry:
    return "symmetry";
  }
  return "?";
}

/// Sets every face of the box to one kind: periodic, noslip or slip.
inline void set_uniform_bc(ScenarioConfig &cfg, const std::string &bc) {
  mesh::BoundaryKind k;
  if (bc == "periodic")
    k = mesh::BoundaryKind::periodic;
  else if (bc == "noslip" || bc == "wall")
    k = mesh::BoundaryKind::wall;
  else if (bc == "slip" || bc == "symmetry")
    k = mesh::BoundaryKind::symmetry;
  else
    throw ConfigError("unknown bc '" + bc + "' (expected periodic, noslip or slip)");
  cfg.faces.fill(k);
}

inline ScenarioConfig preset(const std::string &name) {
  ScenarioConfig c;
  c.scenario = name;
  if (name == "activated_disc" || name == "custom") {
    c.dim = 2;
    c.physical = {1.0, 0.01, 1.5, 1.0};
    c.nx = 16;
    c.faces.fill(mesh::BoundaryKind::periodic);
    c.shape = mesh::SolidShape::disc;
    c.center = {0.5, 0.5, 0.0};
    c.radius = 0.2;
    c.init.kind = timestepper::InitialKind::stream_function;
    c.dt = 1e-2;
    c.n_steps = 50;
  } else if (name == "stretched_disc") {
    c.dim = 2;
    c.physical = {1.0, 0.01, 2.0, 2.0};
    c.nx = 22;
    c.faces.fill(mesh::BoundaryKind::wall);
    c.faces[mesh::face_index(0, 0)] = mesh::BoundaryKind::symmetry;
    c.faces[mesh::face_index(1, 0)] = mesh::BoundaryKind::symmetry;
    c.shape = mesh::SolidShape::quarter_disc;
    c.center = {0.0, 0.0, 0.0};
    c.radius = 0.4;
    c.init.kind = timestepper::InitialKind::stretched;
    c.init.stretch = 1.4;
    c.dt = 1e-2;
    c.n_steps = 100;
  } else if (name == "oscillating_ball") {
    // one octant of [0,1]^2 x [0,0.6] with the ball moved to the origin corner
    c.dim = 3;
    c.physical = {1.0, 0.01, 1.5, 1.0};
    c.upper = {0.5, 0.5, 0.3};
    c.nx = 8;
    c.faces.fill(mesh::BoundaryKind::symmetry);
    c.shape = mesh::SolidShape::ball_octant;
    c.center = {0.0, 0.0, 0.0};
    c.radius = 0.2;
    c.init.kind = timestepper::InitialKind::stream_function;
    c.dt = 1e-2;
    c.n_steps = 20;
  } else {
    throw ConfigError("unknown scenario '" + name +
                      "' (expected activated_disc, stretched_disc, oscillating_ball or custom)");
  }
  return c;
}

namespace detail {

inline std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double to_double(const std::string &key, const std::string &v) {
  double x = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size() || !std::isfinite(x))
    throw ConfigError(key + ": '" + v + "' is not a number");
  return x;
}

inline int to_int(const std::string &key, const std::string &v) {
  int x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw ConfigError(key + ": '" + v + "' is not an integer");
  return x;
}

inline std::array<double, 3> to_point(const std::string &key, const std::string &v) {
  std::array<double, 3> p{0.0, 0.0, 0.0};
  std::stringstream ss(v);
  std::string item;
  int k = 0;
  while (std::getline(ss, item, ',')) {
    if (k == 3)
      throw ConfigError(key + ": too many coordinates");
    p[k++] = to_double(key, trim(item));
  }
  if (k < 2)
    throw ConfigError(key + ": expected 2 or 3 comma-separated coordinates");
  return p;
}

inline int face_from_name(const std::string &name) {
  static const std::map<std::string, int> faces{{"xmin", 0}, {"xmax", 1}, {"ymin", 2},
                                                {"ymax", 3}, {"zmin", 4}, {"zmax", 5}};
  const auto it = faces.find(name);
  if (it == faces.end())
    throw ConfigError("unknown face '" + name + "' (expected xmin..zmax)");
  return it->second;
}

} // namespace detail

namespace detail {

inline void apply_setting_impl(ScenarioConfig &c, const std::string &key, const std::string &value) {
  const std::string v = trim(value);
  if (key == "scenario") {
    const auto keep_out = c.out_dir;
    c = preset(v);
    c.out_dir = keep_out;
  } else if (key == "physical.rho_f")
    c.physical.rho_f = to_double(key, v);
  else if (key == "physical.mu_f")
    c.physical.mu_f = to_double(key, v);
  else if (key == "physical.rho_s")
    c.physical.rho_s = to_double(key, v);
  else if (key == "physical.c1")
    c.physical.c1 = to_double(key, v);
  else if (key == "grid.dim")
    c.dim = to_int(key, v);
  else if (key == "grid.nx")
    c.nx = to_int(key, v);
  else if (key == "grid.ny")
    c.ny = to_int(key, v);
  else if (key == "grid.nz")
    c.nz = to_int(key, v);
  else if (key == "grid.lower")
    c.lower = to_point(key, v);
  else if (key == "grid.upper")
    c.upper = to_point(key, v);
  else if (key == "bc")
    set_uniform_bc(c, v);
  else if (key.rfind("bc.", 0) == 0)
    c.faces[face_from_name(key.substr(3))] = parse_boundary_kind(v);
  else if (key == "solid.shape")
    c.shape = mesh::parse_solid_shape(v);
  else if (key == "solid.center")
    c.center = to_point(key, v);
  else if (key == "solid.radius")
    c.radius = to_double(key, v);
  else if (key == "solid.target_h")
    c.target_h = to_double(key, v);
  else if (key == "solid.stretch")
    c.init.stretch = to_double(key, v);
  else if (key == "init.kind") {
    if (v == "stream_function")
      c.init.kind = timestepper::InitialKind::stream_function;
    else if (v == "zero")
      c.init.kind = timestepper::InitialKind::zero;
    else if (v == "stretched")
      c.init.kind = timestepper::InitialKind::stretched;
    else
      throw ConfigError("init.kind: unknown value '" + v + "'");
  } else if (key == "init.psi0")
    c.init.stream.psi0 = to_double(key, v);
  else if (key == "init.a")
    c.init.stream.a = to_double(key, v);
  else if (key == "init.b")
    c.init.stream.b = to_double(key, v);
  else if (key == "time.dt")
    c.dt = to_double(key, v);
  else if (key == "time.steps")
    c.n_steps = to_int(key, v);
  else if (key == "time.scheme")
    c.scheme = timestepper::parse_scheme(v);
  else if (key == "pressure")
    c.pressure = assembly::parse_pressure_space(v);
  else if (key == "solver.fp_tol")
    c.solver.fp_tol = to_double(key, v);
  else if (key == "solver.fp_max")
    c.solver.fp_max = to_int(key, v);
  else if (key == "solver.solver_tol")
    c.solver.solver_tol = to_double(key, v);
  else if (key == "solver.convection")
    c.solver.convection = assembly::parse_convection_form(v);
  else if (key == "output.dir")
    c.out_dir = v;
  else if (key == "output.stride")
    c.field_stride = to_int(key, v);
  else
    throw ConfigError("unknown configuration key '" + key + "'");
}

} // namespace detail

/// Applies one `section.key=value` setting.
inline void apply_setting(ScenarioConfig &c, const std::string &key, const std::string &value) {
  try {
    detail::apply_setting_impl(c, key, value);
  } catch (const std::invalid_argument &e) {
    throw ConfigError(key + ": " + e.what());
  }
}

/// Reads key=value lines; '#' starts a comment. A `scenario=` line resets to
/// that preset, so it should come first.
inline void apply_config(ScenarioConfig &c, std::istream &in) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    line = detail::trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    apply_setting(c, detail::trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

inline void apply_config_file(ScenarioConfig &c, const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file '" + path + "'");
  apply_config(c, in);
}

template <int Dim>
mesh::FluidGrid<Dim> make_grid(const ScenarioConfig &c) {
  mesh::Box<Dim> box;
  typename mesh::FluidGrid<Dim>::Cells cells;
  typename mesh::FluidGrid<Dim>::Tags tags;
  for (int k = 0; k < Dim; ++k) {
    box.lower[k] = c.lower[k];
    box.upper[k] = c.upper[k];
    cells[k] = c.cells(k);
  }
  for (int f = 0; f < 2 * Dim; ++f)
    tags[f] = c.faces[f];
  try {
    return mesh::build_fluid_grid<Dim>(box, cells, tags);
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
}

template <int Dim>
mesh::SolidMesh<Dim> make_solid(const ScenarioConfig &c) {
  Point<Dim> center;
  for (int k = 0; k < Dim; ++k)
    center[k] = c.center[k];
  try {
    return mesh::build_solid_mesh<Dim>(c.shape, center, c.radius, c.resolved_target_h());
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
}

} // namespace fdfsi::io
