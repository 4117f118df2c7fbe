#pragma once

#include "vsl/fd.hpp"
#include "vsl/grid.hpp"

namespace vsl {

// Per-cell coefficients of the linearized transport dynamics
//   dx/dt = V dx/dz + M x + B u,   x = rho - rho_ref,  u = d(db)/dz.
// Branch per cell (reference density in free flow / congested):
//   V = -v_max * b0            |  V = w * b0
//   B = -v_max * rho_ref       |  B = -w * (rho_max - rho_ref)
// M is identically zero for this model.
struct LinearizedCoeffs {
  CellField v_coef;  // advection coefficient (m/s, signed)
  CellField b_coef;  // input coefficient (veh/m per unit u, signed)
  double m_coef = 0.0;
};

// Evaluates the branch of regime(rho_ref_i) in every cell.
// Throws DomainError for rho_ref outside [0, rho_max] or b0 <= 0.
LinearizedCoeffs linearize(const CellField& rho_ref, double b0,
                           const FundamentalDiagram& fd);

// Upwind side selector per cell: sign of v_coef (-1 free flow, +1 congested).
std::vector<int> wave_signs(const LinearizedCoeffs& c);

}  // namespace vsl
