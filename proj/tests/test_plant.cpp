#include <cmath>

#include "doctest.h"
#include "vsl/plant.hpp"
#include "vsl/profile.hpp"

using namespace vsl;

namespace {

FundamentalDiagram paper_fd() { return make_diagram(20.0, 0.015, 0.15); }

PlantState case_study_state(const Grid& g) {
  PlantState s;
  s.rho = profile_eval(parse_profile("bump(10, 90, 880, 200)"), g, 1e-3);
  s.b = constant_field(g, 1.0);
  return s;
}

}  // namespace

TEST_CASE("CFL bound from the default parameters") {
  const Grid g = make_grid(1000.0, 100);
  const FundamentalDiagram fd = paper_fd();
  CHECK(cfl_max_dt(1.5, g, fd, 0.9) == doctest::Approx(0.3).epsilon(1e-14));

  const Grid g2 = make_grid(2000.0, 100);  // doubled dz doubles the bound
  CHECK(cfl_max_dt(1.5, g2, fd, 0.9) == doctest::Approx(0.6).epsilon(1e-14));
}

TEST_CASE("CFL bound ignores the density profile") {
  const Grid g = make_grid(1000.0, 100);
  const FundamentalDiagram fd = paper_fd();
  PlantState a;
  a.rho = constant_field(g, 0.01);
  a.b = constant_field(g, 1.2);
  PlantState b = a;
  b.rho = constant_field(g, 0.14);
  CHECK(cfl_max_dt(a, g, fd) == cfl_max_dt(b, g, fd));
  CHECK(cfl_max_dt(a, g, fd) == doctest::Approx(0.9 * 10.0 / 24.0).epsilon(1e-14));
}

TEST_CASE("uniform state is a fixed point") {
  const Grid g = make_grid(1000.0, 100);
  const FundamentalDiagram fd = paper_fd();
  PlantState s;
  s.rho = constant_field(g, 0.08);
  s.b = constant_field(g, 0.9);
  const PlantState next = godunov_step(s, 0.25, g, fd);
  for (int i = 0; i < g.n_cells; ++i) CHECK(next.rho[i] == s.rho[i]);
  CHECK(next.t == doctest::Approx(0.25));
}

TEST_CASE("step is rejected above the CFL bound") {
  const Grid g = make_grid(1000.0, 100);
  const FundamentalDiagram fd = paper_fd();
  PlantState s = case_study_state(g);
  CHECK_THROWS_AS(godunov_step(s, 0.6, g, fd), CflError);
}

TEST_CASE("non-periodic grids are rejected") {
  const Grid g = make_grid(1000.0, 100, /*periodic=*/false);
  const FundamentalDiagram fd = paper_fd();
  PlantState s = case_study_state(g);
  CHECK_THROWS_AS(godunov_step(s, 0.25, g, fd), BoundaryError);
}

TEST_CASE("vehicle count is conserved over the case-study horizon") {
  const Grid g = make_grid(1000.0, 100);
  const FundamentalDiagram fd = paper_fd();
  PlantState s = case_study_state(g);
  const double mass0 = total_vehicles(s, g);
  for (int k = 0; k < 800; ++k) {
    s = godunov_step(s, 0.25, g, fd);
    for (double rho : s.rho) {
      CHECK(rho >= 0.0);
      CHECK(rho <= fd.rho_max);
    }
  }
  CHECK(std::fabs(total_vehicles(s, g) - mass0) <= 1e-10 * mass0);
  CHECK(s.t == doctest::Approx(200.0));
}

TEST_CASE("a jammed receiver blocks the interface") {
  const Grid g = make_grid(40.0, 4);
  const FundamentalDiagram fd = paper_fd();
  PlantState s;
  s.rho = {0.01, fd.rho_max, 0.01, 0.01};
  s.b = constant_field(g, 1.0);
  const double dt = 0.25;
  const PlantState next = godunov_step(s, dt, g, fd);

  const double r = dt / g.dz;
  // Cell 0 sends nothing into the jam; it only gains the free-flow inflow
  // from cell 3.
  const double inflow = flow(0.01, 1.0, fd);
  CHECK(next.rho[0] == doctest::Approx(0.01 + r * inflow).epsilon(1e-13));
  // The jam drains downstream at capacity.
  CHECK(next.rho[1] ==
        doctest::Approx(fd.rho_max - r * capacity(fd, 1.0)).epsilon(1e-13));
}

TEST_CASE("zero speed-limit ratio freezes a cell's flux") {
  const Grid g = make_grid(50.0, 5);
  const FundamentalDiagram fd = paper_fd();
  PlantState s;
  s.rho = {0.05, 0.08, 0.05, 0.05, 0.05};
  s.b = {1.0, 0.0, 1.0, 1.0, 1.0};
  const PlantState next = godunov_step(s, 0.2, g, fd);
  // Outgoing demand and incoming supply of the zeroed cell both vanish.
  CHECK(next.rho[1] == s.rho[1]);
}

TEST_CASE("first-order convergence on a smooth free-flow profile") {
  const FundamentalDiagram fd = paper_fd();
  // Stays below rho_cr: pure advection at v_max, exact solution available.
  auto l1_error = [&](int n, double dt, int steps) {
    const Grid g = make_grid(1000.0, n);
    PlantState s;
    s.rho.resize(n);
    for (int i = 0; i < n; ++i) {
      s.rho[i] = 0.005 + 0.004 * std::sin(2.0 * M_PI * cell_center(g, i) / 1000.0);
    }
    s.b = constant_field(g, 1.0);
    for (int k = 0; k < steps; ++k) s = godunov_step(s, dt, g, fd);
    const double t = dt * steps;
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      const double z = cell_center(g, i) - fd.v_max * t;
      const double exact = 0.005 + 0.004 * std::sin(2.0 * M_PI * z / 1000.0);
      err += std::fabs(s.rho[i] - exact) * g.dz;
    }
    return err;
  };
  const double e100 = l1_error(100, 0.25, 100);
  const double e200 = l1_error(200, 0.125, 200);
  CHECK(e200 < e100);
  CHECK(e100 / e200 == doctest::Approx(2.0).epsilon(0.3));
}
