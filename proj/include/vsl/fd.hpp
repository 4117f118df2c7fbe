#pragma once

#include "vsl/errors.hpp"

namespace vsl {

enum class Regime { FreeFlow, Congested };

// Triangular flow-density law. All quantities SI: m/s and veh/m.
// w is derived from the other three so the two branches meet at rho_cr.
struct FundamentalDiagram {
  double v_max = 0.0;    // free-flow speed (m/s)
  double rho_cr = 0.0;   // critical density (veh/m)
  double rho_max = 0.0;  // jam density (veh/m)
  double w = 0.0;        // congested wave speed (m/s), derived
};

// Validates 0 < rho_cr < rho_max and v_max > 0, then sets
// w = v_max * rho_cr / (rho_max - rho_cr).
FundamentalDiagram make_diagram(double v_max, double rho_cr, double rho_max);

// Maximum flow of the b-scaled diagram: b * v_max * rho_cr (veh/s).
double capacity(const FundamentalDiagram& fd, double b);

// FreeFlow iff rho <= rho_cr (boundary deterministically free-flow).
Regime regime(double rho, const FundamentalDiagram& fd);

// Flow of the VSL-scaled diagram (veh/s):
//   b * v_max * rho              rho <= rho_cr
//   b * w * (rho_max - rho)      rho >  rho_cr
// Throws DomainError for rho outside [0, rho_max] or b <= 0.
double flow(double rho, double b, const FundamentalDiagram& fd);

struct DemandSupply {
  double demand = 0.0;  // sending capacity of a cell (veh/s)
  double supply = 0.0;  // receiving capacity of a cell (veh/s)
};

// Godunov/cell-transmission flux decomposition of the scaled diagram:
//   demand = b * v_max * min(rho, rho_cr)
//   supply = b * w * (rho_max - max(rho, rho_cr))
// supply(rho_cr) equals capacity(fd, b) by construction of w. Accepts b = 0
// (both zero) so a zeroed speed limit shuts a cell's flux off; b < 0 throws.
DemandSupply demand_supply(double rho, double b, const FundamentalDiagram& fd);

}  // namespace vsl
