#include "vsl/controller.hpp"

#include <algorithm>
#include <cmath>

namespace vsl {

namespace {

double min_barrier(const CellField& lambda, const CellField& rho) {
  double m = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < rho.size(); ++i) m = std::min(m, lambda[i] - rho[i]);
  return m;
}

// Per-cell least-violation input when the safety rows are incompatible with
// the u box: the point of each row's feasible interval closest to zero,
// clamped to the box.
CellField least_violation_input(const std::vector<CbfRow>& rows,
                                const ControlLimits& lim, int n_cells) {
  CellField u(n_cells, 0.0);
  for (const CbfRow& row : rows) {
    double want = 0.0;
    if (row.coef < 0.0) {
      want = std::max(0.0, row.rhs / row.coef);  // u >= rhs/coef
    } else if (row.coef > 0.0) {
      want = std::min(0.0, row.rhs / row.coef);  // u <= rhs/coef
    }
    // Several rows can share a variable at regime switches; keep the
    // strongest demand.
    const double clamped = std::clamp(want, lim.u_min, lim.u_max);
    if (std::fabs(clamped) > std::fabs(u[row.var])) u[row.var] = clamped;
  }
  return u;
}

}  // namespace

IntegratedProfile integrate_u_to_b(const CellField& u, double b0,
                                   const ControlLimits& limits, const Grid& g) {
  require_on_grid(u, g, "integrate_u_to_b");
  IntegratedProfile out;
  out.b.resize(g.n_cells);
  double db = 0.0;
  for (int i = 0; i < g.n_cells; ++i) {
    db += u[i] * g.dz;
    const double raw = b0 + db;
    const double clamped = std::clamp(raw, limits.b_min, limits.b_max);
    if (clamped != raw) ++out.clamp_events;
    out.b[i] = clamped;
  }
  return out;
}

// Reconstruction gauge for the pure safety filter: the level of b is free
// (the model only sees the gradients u), so anchor the running integral at
// its maximum instead of at the ring origin. The filter then posts only
// reductions, and no headroom clamp can erase the enforcing gradients.
IntegratedProfile integrate_u_lower_only(const CellField& u, double b0,
                                         const ControlLimits& limits,
                                         const Grid& g) {
  require_on_grid(u, g, "integrate_u_lower_only");
  CellField sums(g.n_cells);
  double db = 0.0, peak = 0.0;
  for (int i = 0; i < g.n_cells; ++i) {
    db += u[i] * g.dz;
    sums[i] = db;
    peak = std::max(peak, db);
  }
  IntegratedProfile out;
  out.b.resize(g.n_cells);
  for (int i = 0; i < g.n_cells; ++i) {
    const double raw = b0 + sums[i] - peak;
    const double clamped = std::clamp(raw, limits.b_min, limits.b_max);
    if (clamped != raw) ++out.clamp_events;
    out.b[i] = clamped;
  }
  return out;
}

CellField linearization_reference(const CellField& rho, const Controller& ctl,
                                  const FundamentalDiagram& fd) {
  if (ctl.lin_mode == LinearizationMode::Successive) return rho;
  CellField ref(rho.size());
  for (size_t i = 0; i < rho.size(); ++i) {
    ref[i] = regime(rho[i], fd) == Regime::FreeFlow ? ctl.rho0_free
                                                    : ctl.rho0_cong;
  }
  return ref;
}

ControlDecision control_step(const PlantState& state, const Controller& ctl,
                             const Grid& g, const FundamentalDiagram& fd) {
  require_on_grid(state.rho, g, "control_step rho");

  ControlDecision dec;
  dec.diag.min_h = min_barrier(ctl.cbf.lambda, state.rho);

  CellField e(g.n_cells);
  for (int i = 0; i < g.n_cells; ++i) e[i] = state.rho[i] - ctl.clf.rho_des[i];
  dec.diag.clf_value = clf_value(e, g);

  if (ctl.mode == ControllerMode::Uncontrolled) {
    dec.b = constant_field(g, ctl.b0);
    dec.u = zeros(g);
    return dec;
  }

  const LinearizedCoeffs coeffs =
      linearize(linearization_reference(state.rho, ctl, fd), ctl.b0, fd);

  const bool want_clf =
      ctl.mode == ControllerMode::ClfOnly || ctl.mode == ControllerMode::ClfCbf;
  const bool want_cbf =
      ctl.mode == ControllerMode::CbfOnly || ctl.mode == ControllerMode::ClfCbf;

  ConstraintSystem cs;
  cs.u_min = ctl.limits.u_min;
  cs.u_max = ctl.limits.u_max;
  cs.mean_zero = ctl.mean_zero;
  cs.dz = g.dz;
  if (want_clf) cs.clf_row = build_clf_row(e, coeffs, ctl.clf, g);
  if (want_cbf) {
    // The barrier bounds the absolute density: x measured against zero.
    cs.cbf_rows = build_cbf_rows(state.rho, coeffs, ctl.cbf, zeros(g), g);
  }

  qp::Problem problem;
  problem.h_diag = ctl.h_diag;
  problem.p = ctl.clf.p;
  problem.constraints = cs;
  problem.use_delta = want_clf;
  problem.delta_nonneg = ctl.delta_nonneg;

  qp::Solution sol = qp::solve(problem, ctl.qp_tol);
  if (sol.status == qp::Status::Infeasible && want_clf && want_cbf) {
    // Safety rows take priority: retry without the stabilization row.
    qp::Problem reduced = problem;
    reduced.constraints.clf_row.reset();
    reduced.use_delta = false;
    qp::Solution retry = qp::solve(reduced, ctl.qp_tol);
    if (retry.status != qp::Status::Infeasible) {
      sol = retry;
      dec.diag.clf_dropped = true;
    }
  }

  if (sol.status == qp::Status::Infeasible) {
    dec.u = least_violation_input(cs.cbf_rows, ctl.limits, g.n_cells);
    dec.diag.fallback = true;
    dec.diag.qp_status = QpStatusCode::Infeasible;
    dec.diag.delta = 0.0;
  } else {
    dec.u = sol.u;
    dec.diag.delta = sol.delta;
    dec.diag.qp_status = sol.status == qp::Status::Optimal
                             ? QpStatusCode::Optimal
                             : QpStatusCode::MaxIterations;
    dec.diag.active_rows = sol.active_cbf_rows;
    dec.diag.clf_active = sol.clf_active;
  }
  require_finite(dec.u, "control_step u");

  IntegratedProfile prof =
      ctl.mode == ControllerMode::CbfOnly
          ? integrate_u_lower_only(dec.u, ctl.b0, ctl.limits, g)
          : integrate_u_to_b(dec.u, ctl.b0, ctl.limits, g);
  dec.b = std::move(prof.b);
  dec.diag.clamp_events = prof.clamp_events;

  if (sol.status != qp::Status::Infeasible) {
    for (size_t r = 0; r < sol.cbf_multipliers.size(); ++r) {
      if (sol.cbf_multipliers[r] > 1e-12) {
        const int cell = cs.cbf_rows[r].cell;
        dec.diag.max_b_excess_active =
            std::max(dec.diag.max_b_excess_active, dec.b[cell] - ctl.b0);
      }
    }
  }
  return dec;
}

}  // namespace vsl
