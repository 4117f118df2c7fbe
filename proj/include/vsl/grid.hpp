#pragma once

#include <vector>

#include "vsl/errors.hpp"

namespace vsl {

// Per-cell scalar profile. Units depend on role: veh/m for densities,
// dimensionless for speed-limit ratios b, 1/m for the control input u.
using CellField = std::vector<double>;

// Uniform cell-centered 1-D discretization of the road.
struct Grid {
  double length_m = 0.0;
  int n_cells = 0;
  double dz = 0.0;
  bool periodic = true;
};

// Validates n_cells >= 2, length > 0; dz = length / n_cells.
Grid make_grid(double length_m, int n_cells, bool periodic = true);

// z-coordinate of the center of cell i.
double cell_center(const Grid& g, int i);

CellField zeros(const Grid& g);
CellField constant_field(const Grid& g, double value);

// Distance between two positions on the ring (shortest way around).
double ring_distance(const Grid& g, double z0, double z1);

// Throws DimensionError if f is not defined on g.
void require_on_grid(const CellField& f, const Grid& g, const char* what);
// Throws DomainError if f has a NaN/Inf entry.
void require_finite(const CellField& f, const char* what);

// Midpoint quadrature of f over the road:  sum_i f_i * dz.
double integrate(const CellField& f, const Grid& g);

// One-sided difference per cell with periodic wraparound. wave_sign is the
// sign of the advection coefficient V per cell: negative (free flow, waves
// move downstream) selects the backward difference, positive (congested,
// waves move upstream) the forward difference.
CellField upwind_gradient(const CellField& f, const std::vector<int>& wave_sign,
                          const Grid& g);

}  // namespace vsl
