#include <cmath>
#include <random>

#include "doctest.h"
#include "vsl/grid.hpp"

using namespace vsl;

TEST_CASE("make_grid computes dz and validates") {
  const Grid g = make_grid(1000.0, 100);
  CHECK(g.dz == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(g.dz * g.n_cells == doctest::Approx(g.length_m).epsilon(1e-15));
  CHECK(g.periodic);
  CHECK_THROWS_AS(make_grid(1000.0, 1), DomainError);
  CHECK_THROWS_AS(make_grid(-5.0, 10), DomainError);
}

TEST_CASE("integrate: constants and zero") {
  const Grid g = make_grid(1000.0, 100);
  CHECK(integrate(zeros(g), g) == 0.0);
  CHECK(integrate(constant_field(g, 1.0), g) == doctest::Approx(1000.0).epsilon(1e-14));
}

TEST_CASE("integrate: full sine periods vanish under the midpoint rule") {
  const Grid g = make_grid(1000.0, 100);
  CellField f(g.n_cells);
  for (int i = 0; i < g.n_cells; ++i) {
    f[i] = std::sin(2.0 * M_PI * cell_center(g, i) / g.length_m);
  }
  CHECK(std::fabs(integrate(f, g)) < 1e-9);
}

TEST_CASE("integrate is linear") {
  const Grid g = make_grid(750.0, 77);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    CellField f(g.n_cells), h(g.n_cells), combo(g.n_cells);
    const double a = unit(rng) * 5.0;
    for (int i = 0; i < g.n_cells; ++i) {
      f[i] = unit(rng);
      h[i] = unit(rng);
      combo[i] = a * f[i] + h[i];
    }
    const double lhs = integrate(combo, g);
    const double rhs = a * integrate(f, g) + integrate(h, g);
    CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::max(1.0, std::fabs(rhs)));
  }
}

TEST_CASE("integrate rejects mismatched fields") {
  const Grid g = make_grid(100.0, 10);
  CHECK_THROWS_AS(integrate(CellField(9, 1.0), g), DimensionError);
}

TEST_CASE("upwind gradient of any constant field is zero") {
  const Grid g = make_grid(400.0, 40);
  std::vector<int> signs(g.n_cells);
  for (int i = 0; i < g.n_cells; ++i) signs[i] = (i % 3 == 0) ? 1 : -1;
  const CellField grad = upwind_gradient(constant_field(g, -2.5), signs, g);
  for (double v : grad) CHECK(v == 0.0);
}

TEST_CASE("upwind gradient on a 4-cell ramp") {
  // f = z at cell centers (0.5, 1.5, 2.5, 3.5), dz = 1.
  const Grid g = make_grid(4.0, 4);
  CellField f{0.5, 1.5, 2.5, 3.5};

  const CellField back = upwind_gradient(f, {-1, -1, -1, -1}, g);
  CHECK(back[0] == doctest::Approx(-3.0));  // wrap cell sees the jump
  CHECK(back[1] == doctest::Approx(1.0));
  CHECK(back[2] == doctest::Approx(1.0));
  CHECK(back[3] == doctest::Approx(1.0));

  const CellField fwd = upwind_gradient(f, {1, 1, 1, 1}, g);
  CHECK(fwd[0] == doctest::Approx(1.0));
  CHECK(fwd[1] == doctest::Approx(1.0));
  CHECK(fwd[2] == doctest::Approx(1.0));
  CHECK(fwd[3] == doctest::Approx(-3.0));
}

TEST_CASE("upwind gradient converges at first order") {
  auto max_err = [](int n) {
    const Grid g = make_grid(1000.0, n);
    CellField f(g.n_cells);
    for (int i = 0; i < g.n_cells; ++i) {
      f[i] = std::sin(2.0 * M_PI * cell_center(g, i) / g.length_m);
    }
    const CellField grad = upwind_gradient(f, std::vector<int>(n, -1), g);
    double err = 0.0;
    for (int i = 0; i < g.n_cells; ++i) {
      const double exact = 2.0 * M_PI / g.length_m *
                           std::cos(2.0 * M_PI * cell_center(g, i) / g.length_m);
      err = std::max(err, std::fabs(grad[i] - exact));
    }
    return err;
  };
  const double e100 = max_err(100);
  const double e200 = max_err(200);
  CHECK(e200 < e100);
  CHECK(e100 / e200 == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("upwind gradient requires a periodic grid") {
  const Grid g = make_grid(100.0, 10, /*periodic=*/false);
  CHECK_THROWS_AS(upwind_gradient(zeros(g), std::vector<int>(10, 1), g),
                  BoundaryError);
}
