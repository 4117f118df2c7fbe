#pragma once

#include "vsl/constraints.hpp"
#include "vsl/plant.hpp"
#include "vsl/qp.hpp"

namespace vsl {

enum class ControllerMode { Uncontrolled, ClfOnly, CbfOnly, ClfCbf };

enum class LinearizationMode {
  FixedNominal,  // one reference density per regime, from the controller setup
  Successive     // reference density = current cell density
};

// Bounds on the control input u = d(db)/dz and on the realized ratio b.
struct ControlLimits {
  double u_min = -0.005;  // 1/m
  double u_max = 0.005;   // 1/m
  double b_min = 0.1;
  double b_max = 1.5;
};

// Everything the per-step feedback law needs besides the plant state.
struct Controller {
  ControllerMode mode = ControllerMode::Uncontrolled;
  ClfSpec clf;
  CbfSpec cbf;
  ControlLimits limits;
  double b0 = 1.0;
  LinearizationMode lin_mode = LinearizationMode::FixedNominal;
  double rho0_free = 0.0;  // fixed-nominal reference, free-flow regime (veh/m)
  double rho0_cong = 0.0;  // fixed-nominal reference, congested regime (veh/m)
  std::vector<double> h_diag;
  bool mean_zero = true;
  bool delta_nonneg = false;
  double qp_tol = 1e-8;
};

// Codes written to the trace; Skipped marks steps without a QP solve.
enum class QpStatusCode { Optimal = 0, MaxIterations = 1, Infeasible = 2, Skipped = 3 };

struct StepDiagnostics {
  double clf_value = 0.0;  // V at the measured state
  double min_h = 0.0;      // min_z (lambda - rho)
  double delta = 0.0;
  QpStatusCode qp_status = QpStatusCode::Skipped;
  int active_rows = 0;     // safety rows with positive multiplier
  bool clf_active = false;
  int clamp_events = 0;    // cells clamped in the b reconstruction
  bool clf_dropped = false;   // CLF row removed to restore feasibility
  bool fallback = false;      // least-violation fallback applied
  // Largest b - b0 over cells whose safety row is active; -inf if none.
  double max_b_excess_active = -std::numeric_limits<double>::infinity();
};

struct ControlDecision {
  CellField b;  // speed-limit profile to apply
  CellField u;  // QP control input (diagnostic)
  StepDiagnostics diag;
};

struct IntegratedProfile {
  CellField b;
  int clamp_events = 0;
};

// Spatial reconstruction of the ratio from u = d(db)/dz:
//   b_i = clamp(b0 + dz * sum_{j<=i} u_j, b_min, b_max),
// anchored at db(0) = 0 just upstream of cell 0. A zero-mean u closes the
// ring: the pre-clamp profile satisfies b(L) == b(0).
IntegratedProfile integrate_u_to_b(const CellField& u, double b0,
                                   const ControlLimits& limits, const Grid& g);

// Same reconstruction with the free level anchored at max db = 0, used by
// the pure safety filter so speed limits are only ever lowered.
IntegratedProfile integrate_u_lower_only(const CellField& u, double b0,
                                         const ControlLimits& limits,
                                         const Grid& g);

// One feedback step: measure the state, assemble the mode's constraint set,
// solve the QP and reconstruct the ratio profile. Infeasible safety systems
// first drop the CLF row, then fall back to the per-cell least-violation
// input clamped to the u box. Diagnostics are filled in every mode.
ControlDecision control_step(const PlantState& state, const Controller& ctl,
                             const Grid& g, const FundamentalDiagram& fd);

// Reference-density field used for linearization in the given mode.
CellField linearization_reference(const CellField& rho, const Controller& ctl,
                                  const FundamentalDiagram& fd);

}  // namespace vsl
