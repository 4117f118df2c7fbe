#pragma once

#include "vsl/fd.hpp"
#include "vsl/grid.hpp"

namespace vsl {

// State of the nonlinear LWR plant.
struct PlantState {
  CellField rho;  // densities (veh/m)
  CellField b;    // VSL ratios (dimensionless)
  double t = 0.0; // simulation time (s)
};

// Total vehicle count on the road (veh).
double total_vehicles(const PlantState& s, const Grid& g);

// Largest stable explicit step for the current state:
//   cfl_number * dz / (max_i b_i * max(v_max, w)).
// Independent of the density profile (triangular diagram has a
// density-independent maximal wave speed).
double cfl_max_dt(const PlantState& s, const Grid& g,
                  const FundamentalDiagram& fd, double cfl_number = 0.9);

// Same bound for a prescribed worst-case ratio (config validation).
double cfl_max_dt(double b_max, const Grid& g, const FundamentalDiagram& fd,
                  double cfl_number = 0.9);

// One conservative Godunov step with periodic wrap:
//   rho_i <- rho_i - (dt/dz) (F_{i+1/2} - F_{i-1/2}),
//   F_{i+1/2} = min(demand(rho_i, b_i), supply(rho_{i+1}, b_{i+1})).
// Throws CflError when dt exceeds cfl_max_dt, BoundaryError for non-periodic
// grids, DomainError if the update leaves [0, rho_max] (never clamps).
PlantState godunov_step(const PlantState& s, double dt, const Grid& g,
                        const FundamentalDiagram& fd);

}  // namespace vsl
