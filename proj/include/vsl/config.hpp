#pragma once

#include <string>
#include <vector>

#include "vsl/controller.hpp"
#include "vsl/profile.hpp"

namespace vsl {

// Full experiment description. Values are stored in the units of the config
// format (road geometry in meters, densities in veh/km, speeds in km/h,
// times in seconds); conversion to SI happens when the simulation objects
// are built. This keeps write/load round-trips exact.
struct ScenarioConfig {
  std::string name = "scenario";
  ControllerMode mode = ControllerMode::Uncontrolled;

  // grid
  double length_m = 1000.0;
  int n_cells = 100;
  bool periodic = true;

  // fundamental diagram (paper units)
  double rho_max_veh_km = 150.0;
  double rho_cr_veh_km = 15.0;
  double v_max_km_h = 72.0;

  // time discretization
  double t_final_s = 200.0;
  double dt_s = 0.25;
  int control_interval_steps = 1;
  int output_stride_steps = 0;  // 0: closest to one snapshot per second

  // profiles (densities in veh/km)
  ProfileSpec initial_density{ProfileSpec::Kind::Constant, {10.0}};
  ProfileSpec lambda_profile{ProfileSpec::Kind::Constant, {120.0}};
  double lambda_rate_veh_km_s = 0.0;  // d(lambda)/dt, uniform in z
  ProfileSpec rho_des{ProfileSpec::Kind::Constant, {28.0}};
  ProfileSpec h_diag{ProfileSpec::Kind::Constant, {1.0}};

  // gains
  double gamma = 0.025;
  double alpha = 1.0;
  double p = 1000.0;

  // limits and nominals
  double u_min_per_m = -0.005;
  double u_max_per_m = 0.005;
  double b_min = 0.1;
  double b_max = 1.5;
  double b0 = 1.0;
  LinearizationMode linearization = LinearizationMode::FixedNominal;
  double rho0_free_veh_km = 10.0;
  double rho0_cong_veh_km = 50.0;

  // solver / scheme
  bool mean_zero = true;
  bool delta_nonneg = false;
  double qp_tol = 1e-8;
  double cfl_number = 0.9;

  bool operator==(const ScenarioConfig& other) const = default;
};

// SI-side objects assembled from a validated config.
struct Simulation {
  Grid grid;
  FundamentalDiagram fd;
  Controller controller;
  CellField rho_initial;
  double dt = 0.0;
  int steps = 0;
  int control_interval = 1;
  int stride = 1;
  double lambda_rate = 0.0;  // veh/m/s
  double cfl_number = 0.9;
};

// Unit conversions of the config boundary.
constexpr double kVehKmToVehM = 1e-3;
constexpr double kKmHToMS = 1.0 / 3.6;

// Parses the flat key=value format ('#' comments). Unknown keys and malformed
// lines throw ParseError with the line number; invariant violations throw
// ValidationError naming the invariant. Returned configs are validated.
ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& text, const std::string& origin);

// Applies one "key = value" assignment (CLI override path).
void apply_override(ScenarioConfig& cfg, const std::string& assignment);

// Serializes every key in a fixed order; load(write(c)) == c exactly.
std::string write_config(const ScenarioConfig& cfg);

// Validates invariants (profile ranges, CFL, gains) by building the
// simulation objects; throws ValidationError on the first violation.
void validate(const ScenarioConfig& cfg);
Simulation build_simulation(const ScenarioConfig& cfg);

// Bundled scenario presets (circular-road case study).
std::vector<std::string> preset_names();
ScenarioConfig preset(const std::string& name);

const char* to_string(ControllerMode mode);
const char* to_string(LinearizationMode mode);
ControllerMode parse_mode(const std::string& text);

}  // namespace vsl
