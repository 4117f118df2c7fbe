#include "vsl/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "format.hpp"
#include "vsl/plant.hpp"

namespace vsl {

using detail::format_double;

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), ::tolower);
  return s;
}

double parse_double(const std::string& v, const std::string& key) {
  size_t pos = 0;
  double out;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ParseError("key '" + key + "': expected a number, got '" + v + "'");
  }
  if (pos != v.size()) {
    throw ParseError("key '" + key + "': trailing characters in '" + v + "'");
  }
  return out;
}

int parse_int(const std::string& v, const std::string& key) {
  const double d = parse_double(v, key);
  const int i = static_cast<int>(std::llround(d));
  if (d != static_cast<double>(i)) {
    throw ParseError("key '" + key + "': expected an integer, got '" + v + "'");
  }
  return i;
}

bool parse_bool(const std::string& v, const std::string& key) {
  const std::string l = lower(v);
  if (l == "true" || l == "1") return true;
  if (l == "false" || l == "0") return false;
  throw ParseError("key '" + key + "': expected true/false, got '" + v + "'");
}

LinearizationMode parse_lin(const std::string& v) {
  const std::string l = lower(v);
  if (l == "fixed") return LinearizationMode::FixedNominal;
  if (l == "successive") return LinearizationMode::Successive;
  throw ParseError("linearization must be 'fixed' or 'successive', got '" + v + "'");
}

void assign(ScenarioConfig& c, const std::string& key, const std::string& value) {
  if (key == "name") c.name = value;
  else if (key == "mode") c.mode = parse_mode(value);
  else if (key == "length_m") c.length_m = parse_double(value, key);
  else if (key == "n_cells") c.n_cells = parse_int(value, key);
  else if (key == "periodic") c.periodic = parse_bool(value, key);
  else if (key == "rho_max_veh_km") c.rho_max_veh_km = parse_double(value, key);
  else if (key == "rho_cr_veh_km") c.rho_cr_veh_km = parse_double(value, key);
  else if (key == "v_max_km_h") c.v_max_km_h = parse_double(value, key);
  else if (key == "t_final_s") c.t_final_s = parse_double(value, key);
  else if (key == "dt_s") c.dt_s = parse_double(value, key);
  else if (key == "control_interval_steps") c.control_interval_steps = parse_int(value, key);
  else if (key == "output_stride_steps") c.output_stride_steps = parse_int(value, key);
  else if (key == "initial_density_veh_km") c.initial_density = parse_profile(value);
  else if (key == "lambda_veh_km") c.lambda_profile = parse_profile(value);
  else if (key == "lambda_rate_veh_km_s") c.lambda_rate_veh_km_s = parse_double(value, key);
  else if (key == "rho_des_veh_km") c.rho_des = parse_profile(value);
  else if (key == "h_diag") c.h_diag = parse_profile(value);
  else if (key == "gamma") c.gamma = parse_double(value, key);
  else if (key == "alpha") c.alpha = parse_double(value, key);
  else if (key == "p") c.p = parse_double(value, key);
  else if (key == "u_min_per_m") c.u_min_per_m = parse_double(value, key);
  else if (key == "u_max_per_m") c.u_max_per_m = parse_double(value, key);
  else if (key == "b_min") c.b_min = parse_double(value, key);
  else if (key == "b_max") c.b_max = parse_double(value, key);
  else if (key == "b0") c.b0 = parse_double(value, key);
  else if (key == "linearization") c.linearization = parse_lin(value);
  else if (key == "rho0_free_veh_km") c.rho0_free_veh_km = parse_double(value, key);
  else if (key == "rho0_cong_veh_km") c.rho0_cong_veh_km = parse_double(value, key);
  else if (key == "mean_zero") c.mean_zero = parse_bool(value, key);
  else if (key == "delta_nonneg") c.delta_nonneg = parse_bool(value, key);
  else if (key == "qp_tol") c.qp_tol = parse_double(value, key);
  else if (key == "cfl_number") c.cfl_number = parse_double(value, key);
  else throw ParseError("unknown key '" + key + "'");
}

void require(bool cond, const std::string& invariant) {
  if (!cond) throw ValidationError("config invariant violated: " + invariant);
}

void check_range(const CellField& f, double lo, double hi, bool lo_strict,
                 const std::string& what) {
  for (double v : f) {
    const bool ok_lo = lo_strict ? v > lo : v >= lo;
    require(ok_lo && v <= hi, what + " within " +
                                  (lo_strict ? std::string("(") : std::string("[")) +
                                  format_double(lo) + ", " + format_double(hi) + "]");
  }
}

}  // namespace

const char* to_string(ControllerMode mode) {
  switch (mode) {
    case ControllerMode::Uncontrolled: return "uncontrolled";
    case ControllerMode::ClfOnly: return "clf";
    case ControllerMode::CbfOnly: return "cbf";
    case ControllerMode::ClfCbf: return "clf-cbf";
  }
  return "?";
}

const char* to_string(LinearizationMode mode) {
  return mode == LinearizationMode::FixedNominal ? "fixed" : "successive";
}

ControllerMode parse_mode(const std::string& text) {
  const std::string l = lower(trim(text));
  if (l == "uncontrolled") return ControllerMode::Uncontrolled;
  if (l == "clf") return ControllerMode::ClfOnly;
  if (l == "cbf") return ControllerMode::CbfOnly;
  if (l == "clf-cbf" || l == "clfcbf") return ControllerMode::ClfCbf;
  throw ParseError("mode must be uncontrolled|clf|cbf|clf-cbf, got '" + text + "'");
}

ScenarioConfig parse_config(const std::string& text, const std::string& origin) {
  ScenarioConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(origin + ":" + std::to_string(lineno) +
                       ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      assign(cfg, key, value);
    } catch (const ParseError& err) {
      throw ParseError(origin + ":" + std::to_string(lineno) + ": " + err.what());
    } catch (const SpecError& err) {
      throw ParseError(origin + ":" + std::to_string(lineno) + ": " + err.what());
    }
  }
  validate(cfg);
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open config file '" + path + "'");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

void apply_override(ScenarioConfig& cfg, const std::string& assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ParseError("override must be key=value, got '" + assignment + "'");
  }
  assign(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

std::string write_config(const ScenarioConfig& c) {
  std::ostringstream out;
  out << "# scenario configuration (densities veh/km, speeds km/h, times s)\n";
  out << "name = " << c.name << "\n";
  out << "mode = " << to_string(c.mode) << "\n";
  out << "length_m = " << format_double(c.length_m) << "\n";
  out << "n_cells = " << c.n_cells << "\n";
  out << "periodic = " << (c.periodic ? "true" : "false") << "\n";
  out << "rho_max_veh_km = " << format_double(c.rho_max_veh_km) << "\n";
  out << "rho_cr_veh_km = " << format_double(c.rho_cr_veh_km) << "\n";
  out << "v_max_km_h = " << format_double(c.v_max_km_h) << "\n";
  out << "t_final_s = " << format_double(c.t_final_s) << "\n";
  out << "dt_s = " << format_double(c.dt_s) << "\n";
  out << "control_interval_steps = " << c.control_interval_steps << "\n";
  out << "output_stride_steps = " << c.output_stride_steps << "\n";
  out << "initial_density_veh_km = " << to_string(c.initial_density) << "\n";
  out << "lambda_veh_km = " << to_string(c.lambda_profile) << "\n";
  out << "lambda_rate_veh_km_s = " << format_double(c.lambda_rate_veh_km_s) << "\n";
  out << "rho_des_veh_km = " << to_string(c.rho_des) << "\n";
  out << "h_diag = " << to_string(c.h_diag) << "\n";
  out << "gamma = " << format_double(c.gamma) << "\n";
  out << "alpha = " << format_double(c.alpha) << "\n";
  out << "p = " << format_double(c.p) << "\n";
  out << "u_min_per_m = " << format_double(c.u_min_per_m) << "\n";
  out << "u_max_per_m = " << format_double(c.u_max_per_m) << "\n";
  out << "b_min = " << format_double(c.b_min) << "\n";
  out << "b_max = " << format_double(c.b_max) << "\n";
  out << "b0 = " << format_double(c.b0) << "\n";
  out << "linearization = " << to_string(c.linearization) << "\n";
  out << "rho0_free_veh_km = " << format_double(c.rho0_free_veh_km) << "\n";
  out << "rho0_cong_veh_km = " << format_double(c.rho0_cong_veh_km) << "\n";
  out << "mean_zero = " << (c.mean_zero ? "true" : "false") << "\n";
  out << "delta_nonneg = " << (c.delta_nonneg ? "true" : "false") << "\n";
  out << "qp_tol = " << format_double(c.qp_tol) << "\n";
  out << "cfl_number = " << format_double(c.cfl_number) << "\n";
  return out.str();
}

Simulation build_simulation(const ScenarioConfig& c) {
  Simulation sim;
  try {
    sim.grid = make_grid(c.length_m, c.n_cells, c.periodic);
    sim.fd = make_diagram(c.v_max_km_h * kKmHToMS, c.rho_cr_veh_km * kVehKmToVehM,
                          c.rho_max_veh_km * kVehKmToVehM);
  } catch (const DomainError& err) {
    throw ValidationError(std::string("config invariant violated: ") + err.what());
  }

  require(c.t_final_s > 0.0, "t_final_s > 0");
  require(c.dt_s > 0.0, "dt_s > 0");
  require(c.control_interval_steps >= 1, "control_interval_steps >= 1");
  require(c.output_stride_steps >= 0, "output_stride_steps >= 0");
  require(c.cfl_number > 0.0 && c.cfl_number <= 1.0, "cfl_number in (0, 1]");
  require(c.u_min_per_m < 0.0 && c.u_max_per_m > 0.0, "u_min < 0 < u_max");
  require(c.b_min > 0.0 && c.b_min <= c.b0 && c.b0 <= c.b_max,
          "0 < b_min <= b0 <= b_max");
  require(c.gamma > 0.0, "gamma > 0");
  require(c.alpha > 0.0, "alpha > 0");
  require(c.p > 0.0, "p > 0");
  require(c.qp_tol > 0.0, "qp_tol > 0");

  sim.dt = c.dt_s;
  sim.steps = static_cast<int>(std::floor(c.t_final_s / c.dt_s + 1e-9));
  sim.control_interval = c.control_interval_steps;
  sim.stride = c.output_stride_steps > 0
                   ? c.output_stride_steps
                   : std::max(1, static_cast<int>(std::llround(1.0 / c.dt_s)));
  sim.cfl_number = c.cfl_number;
  require(c.dt_s <= cfl_max_dt(c.b_max, sim.grid, sim.fd, c.cfl_number) *
                        (1.0 + 1e-12),
          "dt satisfies the CFL bound for b_max");

  sim.rho_initial = profile_eval(c.initial_density, sim.grid, kVehKmToVehM);
  check_range(sim.rho_initial, 0.0, sim.fd.rho_max, false, "initial density");

  Controller& ctl = sim.controller;
  ctl.mode = c.mode;
  ctl.clf.rho_des = profile_eval(c.rho_des, sim.grid, kVehKmToVehM);
  check_range(ctl.clf.rho_des, 0.0, sim.fd.rho_max, false, "desired profile");
  ctl.clf.gamma = c.gamma;
  ctl.clf.p = c.p;
  ctl.cbf.lambda = profile_eval(c.lambda_profile, sim.grid, kVehKmToVehM);
  check_range(ctl.cbf.lambda, 0.0, sim.fd.rho_max, true, "barrier profile");
  ctl.cbf.dlambda_dt = zeros(sim.grid);
  ctl.cbf.alpha = c.alpha;
  ctl.limits.u_min = c.u_min_per_m;
  ctl.limits.u_max = c.u_max_per_m;
  ctl.limits.b_min = c.b_min;
  ctl.limits.b_max = c.b_max;
  ctl.b0 = c.b0;
  ctl.lin_mode = c.linearization;
  ctl.rho0_free = c.rho0_free_veh_km * kVehKmToVehM;
  ctl.rho0_cong = c.rho0_cong_veh_km * kVehKmToVehM;
  require(ctl.rho0_free >= 0.0 && ctl.rho0_free <= sim.fd.rho_cr,
          "rho0_free within the free-flow regime");
  require(ctl.rho0_cong > sim.fd.rho_cr && ctl.rho0_cong < sim.fd.rho_max,
          "rho0_cong within the congested regime");
  ctl.h_diag = profile_eval(c.h_diag, sim.grid, 1.0);
  check_range(ctl.h_diag, 0.0, std::numeric_limits<double>::infinity(), true,
              "h_diag positive");
  ctl.mean_zero = c.mean_zero;
  ctl.delta_nonneg = c.delta_nonneg;
  ctl.qp_tol = c.qp_tol;

  sim.lambda_rate = c.lambda_rate_veh_km_s * kVehKmToVehM;
  return sim;
}

void validate(const ScenarioConfig& cfg) { (void)build_simulation(cfg); }

namespace {

// Case-study shapes: a free-flow base carrying one congested wave, a barrier
// with a reduced-limit arc the wave drifts into, and two desired profiles
// with the same vehicle count as the initial condition.
ScenarioConfig case_study_base() {
  ScenarioConfig c;
  c.length_m = 1000.0;
  c.n_cells = 100;
  c.rho_max_veh_km = 150.0;
  c.rho_cr_veh_km = 15.0;
  c.v_max_km_h = 72.0;
  c.t_final_s = 200.0;
  c.dt_s = 0.25;
  c.gamma = 0.025;
  c.alpha = 1.0;
  c.p = 1000.0;
  c.u_min_per_m = -0.02;
  c.u_max_per_m = 0.02;
  c.initial_density = parse_profile("bump(10, 90, 880, 200)");
  c.lambda_profile = parse_profile(
      "piecewise_linear(0,120, 290,120, 390,55, 740,55, 840,120, 1000,120)");
  c.rho_des = parse_profile("constant(28)");
  return c;
}

ProfileSpec unsafe_desired_profile() {
  // Same mean as the initial condition; exceeds the barrier on part of the
  // reduced-limit arc, near where the congestion wave ends the horizon.
  return parse_profile(
      "piecewise_linear(0,9, 105,9, 355,85, 605,9, 1000,9)");
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"uncontrolled",     "clf_profile1",     "clf_profile2",
          "cbf_only",         "clf_cbf_profile1", "clf_cbf_profile2",
          "circular_clf_cbf"};
}

ScenarioConfig preset(const std::string& name) {
  ScenarioConfig c = case_study_base();
  if (name == "uncontrolled") {
    c.mode = ControllerMode::Uncontrolled;
  } else if (name == "clf_profile1") {
    c.mode = ControllerMode::ClfOnly;
  } else if (name == "clf_profile2") {
    c.mode = ControllerMode::ClfOnly;
    c.rho_des = unsafe_desired_profile();
  } else if (name == "cbf_only") {
    c.mode = ControllerMode::CbfOnly;
    c.linearization = LinearizationMode::Successive;
  } else if (name == "clf_cbf_profile1" || name == "circular_clf_cbf") {
    c.mode = ControllerMode::ClfCbf;
    c.linearization = LinearizationMode::Successive;
  } else if (name == "clf_cbf_profile2") {
    c.mode = ControllerMode::ClfCbf;
    c.linearization = LinearizationMode::Successive;
    c.rho_des = unsafe_desired_profile();
  } else {
    throw ValidationError("unknown preset '" + name + "'");
  }
  c.name = (name == "circular_clf_cbf") ? "clf_cbf_profile1" : name;
  validate(c);
  return c;
}

}  // namespace vsl
