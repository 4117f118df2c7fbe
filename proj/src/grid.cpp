#include "vsl/grid.hpp"

#include <cmath>
#include <string>

namespace vsl {

Grid make_grid(double length_m, int n_cells, bool periodic) {
  if (!(length_m > 0.0) || !std::isfinite(length_m)) {
    throw DomainError("grid length must be positive, got " + std::to_string(length_m));
  }
  if (n_cells < 2) {
    throw DomainError("grid needs at least 2 cells, got " + std::to_string(n_cells));
  }
  Grid g;
  g.length_m = length_m;
  g.n_cells = n_cells;
  g.dz = length_m / n_cells;
  g.periodic = periodic;
  return g;
}

double cell_center(const Grid& g, int i) { return (i + 0.5) * g.dz; }

CellField zeros(const Grid& g) { return CellField(g.n_cells, 0.0); }

CellField constant_field(const Grid& g, double value) {
  return CellField(g.n_cells, value);
}

double ring_distance(const Grid& g, double z0, double z1) {
  double d = std::fabs(z1 - z0);
  d = std::fmod(d, g.length_m);
  return std::min(d, g.length_m - d);
}

void require_on_grid(const CellField& f, const Grid& g, const char* what) {
  if (static_cast<int>(f.size()) != g.n_cells) {
    throw DimensionError(std::string(what) + ": field has " +
                         std::to_string(f.size()) + " entries, grid has " +
                         std::to_string(g.n_cells) + " cells");
  }
}

void require_finite(const CellField& f, const char* what) {
  for (size_t i = 0; i < f.size(); ++i) {
    if (!std::isfinite(f[i])) {
      throw DomainError(std::string(what) + ": non-finite entry at cell " +
                        std::to_string(i));
    }
  }
}

double integrate(const CellField& f, const Grid& g) {
  require_on_grid(f, g, "integrate");
  double sum = 0.0;
  for (double v : f) sum += v;
  return sum * g.dz;
}

CellField upwind_gradient(const CellField& f, const std::vector<int>& wave_sign,
                          const Grid& g) {
  require_on_grid(f, g, "upwind_gradient");
  if (static_cast<int>(wave_sign.size()) != g.n_cells) {
    throw DimensionError("upwind_gradient: wave_sign length mismatch");
  }
  if (!g.periodic) {
    throw BoundaryError("upwind_gradient: only periodic grids are supported");
  }
  const int n = g.n_cells;
  CellField out(n);
  for (int i = 0; i < n; ++i) {
    if (wave_sign[i] < 0) {
      // waves move downstream: take information from behind
      const int im = (i == 0) ? n - 1 : i - 1;
      out[i] = (f[i] - f[im]) / g.dz;
    } else {
      // waves move upstream: take information from ahead
      const int ip = (i == n - 1) ? 0 : i + 1;
      out[i] = (f[ip] - f[i]) / g.dz;
    }
  }
  return out;
}

}  // namespace vsl
