#pragma once

#include <optional>
#include <vector>

#include "vsl/grid.hpp"
#include "vsl/linearize.hpp"

namespace vsl {

// Stabilization objective: quadratic deviation from a desired profile,
// V(t) = 1/2 int e^2 dz with e = rho - rho_des, decay rate gamma and
// relaxation penalty p.
struct ClfSpec {
  CellField rho_des;   // desired density profile (veh/m)
  double gamma = 0.0;  // class-K gain in gamma(V) = gamma * V (1/s)
  double p = 0.0;      // relaxation penalty weight (> 0)
};

// Safety constraint: keep h = lambda - x nonnegative per cell, with
// alpha(h) = alpha * h. dlambda_dt carries the time variation of the
// barrier profile; identically zero for a static barrier.
struct CbfSpec {
  CellField lambda;      // density upper bound (veh/m), entries in (0, rho_max]
  CellField dlambda_dt;  // d(lambda)/dt per cell (veh/m/s); empty means static
  double alpha = 0.0;    // class-K-infinity gain (1/s)
};

// Discretized stabilization row:  sum_i coef_i u_i - delta <= rhs.
struct ClfRow {
  CellField coef;   // coef_i = B_i e_i dz
  double rhs = 0.0; // -gamma * V
};

// One safety row:  coef * u_var <= rhs, coef = B_cell.
// `cell` is the protected cell; `var` is the u entry its flux responds to.
// With the Godunov flux a congested cell couples to the ratio gradient at
// its downstream interface, so var is the downstream neighbour there; free
// flow couples upstream and var == cell.
struct CbfRow {
  int cell = 0;
  int var = 0;
  double coef = 0.0;
  double rhs = 0.0;
};

// The affine constraint set of the per-step program in (u, delta).
struct ConstraintSystem {
  std::optional<ClfRow> clf_row;
  std::vector<CbfRow> cbf_rows;
  double u_min = 0.0;
  double u_max = 0.0;
  bool mean_zero = false;  // equality sum_i u_i dz = 0
  double dz = 0.0;
};

// V(t) = 1/2 * integrate(e^2). Nonnegative; zero iff e == 0.
double clf_value(const CellField& e, const Grid& g);

// Builds the stabilization row
//   sum_i B_i e_i u_{var(i)} dz <= -gamma V + delta
// for periodic grids, where the transport term of dV/dt vanishes. B_i stays
// inside the sum so mixed free-flow/congested states are handled; each cell's
// contribution lands on the u entry its flux responds to (see CbfRow).
// Throws BoundaryError for non-periodic grids.
ClfRow build_clf_row(const CellField& e, const LinearizedCoeffs& coeffs,
                     const ClfSpec& spec, const Grid& g);

// The u entry whose change moves cell i's flux balance at first order:
// i for free flow (demand side), i+1 on the ring for congested (supply side).
int input_index(int cell, int wave_sign, const Grid& g);

// Builds one safety row per cell from dh/dt >= -alpha h with
// h_i = lambda_i - x_i and x = rho - rho_ref:
//   B_i u_i <= alpha h_i - V_i (dx/dz)_i + (dlambda/dt)_i.
// dx/dz is upwinded with the wave signs of coeffs. All cells produce a row;
// no pruning. Throws SpecError if some lambda_i <= 0.
std::vector<CbfRow> build_cbf_rows(const CellField& rho,
                                   const LinearizedCoeffs& coeffs,
                                   const CbfSpec& spec,
                                   const CellField& rho_ref, const Grid& g);

}  // namespace vsl
