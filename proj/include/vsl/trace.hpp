#pragma once

#include <string>
#include <vector>

#include "vsl/controller.hpp"

namespace vsl {

// Aggregates tracked at every control step over a whole run.
struct RunStats {
  double mass_initial = 0.0;
  double mass_drift_rel_max = 0.0;
  double v_initial = 0.0;
  double v_final = 0.0;
  double min_h_over_run = 0.0;
  double max_abs_delta = 0.0;
  double delta_abs_dt_integral = 0.0;  // sum |delta_k| dt
  // Lyapunov slack accounting: sum over steps of max(0, V_{k+1} - V_k - dt delta_k).
  double lyap_excess_sum = 0.0;
  // Largest b - b0 seen on a cell with an active safety row (-inf if none).
  double max_b_excess_active = -std::numeric_limits<double>::infinity();
  long active_row_steps = 0;
  long fallback_steps = 0;
  long clf_drop_steps = 0;
  long clamp_events_total = 0;
  int worst_qp_status = 0;  // max QpStatusCode over solved steps
};

// Recorded time histories of one run. Snapshot series share one time index.
struct SimTrace {
  std::vector<double> times;
  std::vector<CellField> rho;
  std::vector<CellField> b;
  std::vector<double> clf_values;
  std::vector<double> min_h;
  std::vector<double> delta;
  std::vector<int> qp_status;
  std::vector<int> clamp_count;
  RunStats stats;
};

// Writes density.csv, speedlimit.csv (header t,z_0,...,z_{n-1}) and
// scalars.csv (header t,V,min_h,delta,qp_status,clamp_count) into dir,
// all values in SI with 17 significant digits.
void write_trace(const SimTrace& trace, const Grid& g, const std::string& dir);

// One-line run summary: final V, min-over-run min_z h, max |delta|.
std::string summary_line(const SimTrace& trace);

}  // namespace vsl
