#pragma once

#include "fdfsi/types.hpp"

#include <string>
#include <vector>

namespace fdfsi::assembly {

struct PhysicalParams {
  double rho_f = 1.0;  // fluid density
  double mu_f = 0.01;  // viscosity, shared by fluid and solid
  double rho_s = 1.5;  // solid density
  double c1 = 1.0;     // neo-Hookean modulus

  double rho_delta() const { return rho_s - rho_f; }

  void validate() const {
    if (!(rho_f > 0.0))
      throw ConfigError("physical.rho_f must be positive");
    if (!(mu_f >= 0.0))
      throw ConfigError("physical.mu_f must be nonnegative");
    if (!(c1 >= 0.0))
      throw ConfigError("physical.c1 must be nonnegative");
    if (!(rho_s >= 0.0))
      throw ConfigError("physical.rho_s must be nonnegative");
  }

  /// Non-fatal problems: the energy estimate needs rho_s >= rho_f.
  std::vector<std::string> warnings() const {
    std::vector<std::string> w;
    if (rho_delta() < 0.0)
      w.push_back("rho_s < rho_f: the discrete energy estimate does not apply");
    return w;
  }
};

enum class PressureSpace { p1, p1_p0 };
enum class ConvectionForm { skew, standard };

inline PressureSpace parse_pressure_space(const std::string &s) {
  if (s == "p1")
    return PressureSpace::p1;
  if (s == "p1_p0")
    return PressureSpace::p1_p0;
  throw ConfigError("unknown pressure space '" + s + "' (expected p1 or p1_p0)");
}

inline ConvectionForm parse_convection_form(const std::string &s) {
  if (s == "skew")
    return ConvectionForm::skew;
  if (s == "standard" || s == "picard")
    return ConvectionForm::standard;
  throw ConfigError("unknown convection form '" + s + "' (expected skew or standard)");
}

/// Unknown layout of the global system: velocity components blocked one after
/// another, then the continuous pressure vertices, then the cellwise constants.
struct DofLayout {
  int dim = 2;
  Index n_velocity = 0; // scalar velocity dofs per component
  Index n_q1 = 0;
  Index n_p0 = 0;

  Index velocity_size() const { return dim * n_velocity; }
  Index pressure_size() const { return n_q1 + n_p0; }
  Index size() const { return velocity_size() + pressure_size(); }
  Index velocity_index(int comp, Index dof) const { return comp * n_velocity + dof; }
  Index q1_index(Index k) const { return velocity_size() + k; }
  Index p0_index(Index cell) const { return velocity_size() + n_q1 + cell; }
};

} // namespace fdfsi::assembly
