#include "vsl/constraints.hpp"

#include <string>

namespace vsl {

double clf_value(const CellField& e, const Grid& g) {
  require_on_grid(e, g, "clf_value");
  double sum = 0.0;
  for (double v : e) sum += v * v;
  return 0.5 * sum * g.dz;
}

int input_index(int cell, int wave_sign, const Grid& g) {
  if (wave_sign < 0) return cell;
  return cell == g.n_cells - 1 ? 0 : cell + 1;
}

ClfRow build_clf_row(const CellField& e, const LinearizedCoeffs& coeffs,
                     const ClfSpec& spec, const Grid& g) {
  require_on_grid(e, g, "build_clf_row e");
  require_on_grid(coeffs.b_coef, g, "build_clf_row b_coef");
  if (!g.periodic) {
    // The transport part of dV/dt only drops out on a ring; the boundary
    // term of the open-road case is out of scope here.
    throw BoundaryError("build_clf_row: only periodic grids are supported");
  }
  const std::vector<int> signs = wave_signs(coeffs);
  ClfRow row;
  row.coef.assign(g.n_cells, 0.0);
  for (int i = 0; i < g.n_cells; ++i) {
    row.coef[input_index(i, signs[i], g)] += coeffs.b_coef[i] * e[i] * g.dz;
  }
  row.rhs = -spec.gamma * clf_value(e, g);
  return row;
}

std::vector<CbfRow> build_cbf_rows(const CellField& rho,
                                   const LinearizedCoeffs& coeffs,
                                   const CbfSpec& spec,
                                   const CellField& rho_ref, const Grid& g) {
  require_on_grid(rho, g, "build_cbf_rows rho");
  require_on_grid(rho_ref, g, "build_cbf_rows rho_ref");
  require_on_grid(spec.lambda, g, "build_cbf_rows lambda");
  require_on_grid(coeffs.b_coef, g, "build_cbf_rows b_coef");
  if (!spec.dlambda_dt.empty()) {
    require_on_grid(spec.dlambda_dt, g, "build_cbf_rows dlambda_dt");
  }

  const int n = g.n_cells;
  CellField x(n);
  for (int i = 0; i < n; ++i) {
    if (!(spec.lambda[i] > 0.0)) {
      throw SpecError("build_cbf_rows: barrier profile must be positive, cell " +
                      std::to_string(i));
    }
    x[i] = rho[i] - rho_ref[i];
  }
  // Same stencil as the linearized transport term, so the drift estimate and
  // the regime switching stay consistent.
  const std::vector<int> signs = wave_signs(coeffs);
  const CellField dx_dz = upwind_gradient(x, signs, g);

  std::vector<CbfRow> rows(n);
  for (int i = 0; i < n; ++i) {
    const double h = spec.lambda[i] - x[i];
    const double lambda_dot = spec.dlambda_dt.empty() ? 0.0 : spec.dlambda_dt[i];
    rows[i].cell = i;
    rows[i].var = input_index(i, signs[i], g);
    rows[i].coef = coeffs.b_coef[i];
    rows[i].rhs = spec.alpha * h - coeffs.v_coef[i] * dx_dz[i] + lambda_dot;
  }
  return rows;
}

}  // namespace vsl
