#include "vsl/sim.hpp"

#include <algorithm>
#include <cmath>

namespace vsl {

namespace {

double barrier_min(const CellField& lambda, const CellField& rho) {
  double m = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < rho.size(); ++i) m = std::min(m, lambda[i] - rho[i]);
  return m;
}

}  // namespace

SimTrace simulate(const ScenarioConfig& cfg) { return simulate(build_simulation(cfg)); }

SimTrace simulate(const Simulation& sim) {
  const Grid& g = sim.grid;
  Controller ctl = sim.controller;  // local copy; lambda may move in time
  const CellField lambda_base = ctl.cbf.lambda;

  PlantState state;
  state.rho = sim.rho_initial;
  state.b = constant_field(g, ctl.b0);
  state.t = 0.0;

  SimTrace trace;
  RunStats& st = trace.stats;
  st.mass_initial = total_vehicles(state, g);
  st.min_h_over_run = std::numeric_limits<double>::infinity();

  StepDiagnostics held;  // diagnostics of the last controller update
  double v_prev = 0.0;

  for (int k = 0; k <= sim.steps; ++k) {
    const bool final_step = (k == sim.steps);

    if (sim.lambda_rate != 0.0) {
      // Finite-difference time slope of the barrier profile, evaluated over
      // one plant step.
      for (int i = 0; i < g.n_cells; ++i) {
        const double now = lambda_base[i] + sim.lambda_rate * state.t;
        const double next = lambda_base[i] + sim.lambda_rate * (state.t + sim.dt);
        ctl.cbf.lambda[i] = now;
        ctl.cbf.dlambda_dt[i] = (next - now) / sim.dt;
      }
    }

    if (!final_step && k % sim.control_interval == 0) {
      ControlDecision dec = control_step(state, ctl, g, sim.fd);
      state.b = dec.b;
      held = dec.diag;
      if (held.qp_status != QpStatusCode::Skipped) {
        st.worst_qp_status =
            std::max(st.worst_qp_status, static_cast<int>(held.qp_status));
      }
      if (held.fallback) ++st.fallback_steps;
      if (held.clf_dropped) ++st.clf_drop_steps;
      st.clamp_events_total += held.clamp_events;
      if (held.active_rows > 0) {
        ++st.active_row_steps;
        st.max_b_excess_active =
            std::max(st.max_b_excess_active, held.max_b_excess_active);
      }
    } else {
      // No new solve: refresh the measured quantities, hold the rest.
      CellField e(g.n_cells);
      for (int i = 0; i < g.n_cells; ++i) e[i] = state.rho[i] - ctl.clf.rho_des[i];
      held.clf_value = clf_value(e, g);
      held.min_h = barrier_min(ctl.cbf.lambda, state.rho);
      if (final_step) {
        held.qp_status = QpStatusCode::Skipped;
        held.delta = 0.0;
      }
    }

    if (k == 0) {
      st.v_initial = held.clf_value;
      v_prev = held.clf_value;
    }
    st.min_h_over_run = std::min(st.min_h_over_run, held.min_h);
    st.max_abs_delta = std::max(st.max_abs_delta, std::fabs(held.delta));

    if (k % sim.stride == 0) {
      trace.times.push_back(state.t);
      trace.rho.push_back(state.rho);
      trace.b.push_back(state.b);
      trace.clf_values.push_back(held.clf_value);
      trace.min_h.push_back(held.min_h);
      trace.delta.push_back(held.delta);
      trace.qp_status.push_back(static_cast<int>(held.qp_status));
      trace.clamp_count.push_back(held.clamp_events);
    }

    if (final_step) {
      st.v_final = held.clf_value;
      break;
    }

    st.delta_abs_dt_integral += std::fabs(held.delta) * sim.dt;

    state = godunov_step(state, sim.dt, g, sim.fd);

    const double mass = total_vehicles(state, g);
    st.mass_drift_rel_max = std::max(
        st.mass_drift_rel_max,
        std::fabs(mass - st.mass_initial) / std::max(st.mass_initial, 1e-300));

    // Lyapunov decrease accounting: V_{k+1} <= V_k + dt * delta_k + eps_k.
    CellField e(g.n_cells);
    for (int i = 0; i < g.n_cells; ++i) e[i] = state.rho[i] - ctl.clf.rho_des[i];
    const double v_next = clf_value(e, g);
    st.lyap_excess_sum +=
        std::max(0.0, v_next - v_prev - sim.dt * held.delta);
    v_prev = v_next;
  }

  return trace;
}

}  // namespace vsl
