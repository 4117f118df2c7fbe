#include "vsl/plant.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vsl {

double total_vehicles(const PlantState& s, const Grid& g) {
  return integrate(s.rho, g);
}

double cfl_max_dt(double b_max, const Grid& g, const FundamentalDiagram& fd,
                  double cfl_number) {
  if (!(cfl_number > 0.0) || cfl_number > 1.0) {
    throw DomainError("cfl_number must be in (0, 1]");
  }
  const double wave = b_max * std::max(fd.v_max, fd.w);
  return cfl_number * g.dz / wave;
}

double cfl_max_dt(const PlantState& s, const Grid& g,
                  const FundamentalDiagram& fd, double cfl_number) {
  require_on_grid(s.b, g, "cfl_max_dt");
  const double b_max = *std::max_element(s.b.begin(), s.b.end());
  return cfl_max_dt(b_max, g, fd, cfl_number);
}

PlantState godunov_step(const PlantState& s, double dt, const Grid& g,
                        const FundamentalDiagram& fd) {
  require_on_grid(s.rho, g, "godunov_step rho");
  require_on_grid(s.b, g, "godunov_step b");
  if (!g.periodic) {
    throw BoundaryError("godunov_step: only periodic grids are supported");
  }
  // Reject the step rather than silently produce an unstable update. The
  // bound is evaluated at cfl_number = 1 (true stability limit); the safety
  // factor is the caller's choice of dt.
  const double dt_max = cfl_max_dt(s, g, fd, 1.0);
  if (dt > dt_max * (1.0 + 1e-12)) {
    throw CflError("godunov_step: dt=" + std::to_string(dt) +
                   " exceeds CFL bound " + std::to_string(dt_max));
  }

  const int n = g.n_cells;
  // F[i] is the flux through the interface between cell i and cell i+1.
  std::vector<double> flux(n);
  for (int i = 0; i < n; ++i) {
    const int ip = (i == n - 1) ? 0 : i + 1;
    const double demand = demand_supply(s.rho[i], s.b[i], fd).demand;
    const double supply = demand_supply(s.rho[ip], s.b[ip], fd).supply;
    flux[i] = std::min(demand, supply);
  }

  PlantState next;
  next.rho.resize(n);
  next.b = s.b;
  next.t = s.t + dt;
  const double r = dt / g.dz;
  const double slack = 1e-12 * fd.rho_max;
  for (int i = 0; i < n; ++i) {
    const int im = (i == 0) ? n - 1 : i - 1;
    double rho = s.rho[i] - r * (flux[i] - flux[im]);
    // Invariant region of the scheme; tolerate only roundoff, never clamp
    // real excursions.
    if (rho < -slack || rho > fd.rho_max + slack) {
      throw DomainError("godunov_step: density " + std::to_string(rho) +
                        " left [0, rho_max] at cell " + std::to_string(i));
    }
    next.rho[i] = std::clamp(rho, 0.0, fd.rho_max);
  }
  return next;
}

}  // namespace vsl
