#include <random>

#include "doctest.h"
#include "vsl/linearize.hpp"

using namespace vsl;

namespace {
FundamentalDiagram paper_fd() { return make_diagram(20.0, 0.015, 0.15); }
}

TEST_CASE("free-flow branch coefficients") {
  const FundamentalDiagram fd = paper_fd();
  // rho0 = 10 veh/km, b0 = 1
  const LinearizedCoeffs c = linearize({0.01, 0.01}, 1.0, fd);
  CHECK(c.v_coef[0] == doctest::Approx(-20.0).epsilon(1e-15));  // -72 km/h
  CHECK(c.b_coef[0] == doctest::Approx(-0.2).epsilon(1e-15));   // -720 veh km/(km h)
  CHECK(c.m_coef == 0.0);
}

TEST_CASE("congested branch coefficients") {
  const FundamentalDiagram fd = paper_fd();
  // rho0 = 50 veh/km: b_coef = -w (rho_max - rho0) = -800 veh km/(km h) in
  // the config units, -2/9 veh/m per unit u in SI.
  const LinearizedCoeffs c = linearize({0.05, 0.05}, 1.0, fd);
  CHECK(c.v_coef[0] == doctest::Approx(fd.w).epsilon(1e-15));
  CHECK(c.b_coef[0] == doctest::Approx(-fd.w * 0.1).epsilon(1e-15));
  CHECK(c.b_coef[0] == doctest::Approx(-800.0 / 3600.0).epsilon(1e-12));
}

TEST_CASE("boundary density linearizes on the free-flow branch") {
  const FundamentalDiagram fd = paper_fd();
  const LinearizedCoeffs c = linearize({fd.rho_cr, fd.rho_cr}, 0.8, fd);
  CHECK(c.v_coef[0] == doctest::Approx(-fd.v_max * 0.8));
  CHECK(c.b_coef[0] == doctest::Approx(-fd.v_max * fd.rho_cr));
}

TEST_CASE("branch consistency on random reference fields") {
  const FundamentalDiagram fd = paper_fd();
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> rho(0.0, fd.rho_max);
  CellField ref(64);
  for (double& v : ref) v = rho(rng);
  const double b0 = 1.1;
  const LinearizedCoeffs c = linearize(ref, b0, fd);
  for (size_t i = 0; i < ref.size(); ++i) {
    if (regime(ref[i], fd) == Regime::FreeFlow) {
      CHECK(c.v_coef[i] == -fd.v_max * b0);
      CHECK(c.b_coef[i] == -fd.v_max * ref[i]);
    } else {
      CHECK(c.v_coef[i] == fd.w * b0);
      CHECK(c.b_coef[i] == -fd.w * (fd.rho_max - ref[i]));
    }
    if (ref[i] > 0.0 && ref[i] < fd.rho_max) CHECK(c.b_coef[i] < 0.0);
  }
}

TEST_CASE("wave signs follow the advection coefficient") {
  const FundamentalDiagram fd = paper_fd();
  const LinearizedCoeffs c = linearize({0.01, 0.05, 0.015}, 1.0, fd);
  const std::vector<int> s = wave_signs(c);
  CHECK(s[0] == -1);
  CHECK(s[1] == 1);
  CHECK(s[2] == -1);
}

TEST_CASE("linearize validates inputs") {
  const FundamentalDiagram fd = paper_fd();
  CHECK_THROWS_AS(linearize({0.2}, 1.0, fd), DomainError);
  CHECK_THROWS_AS(linearize({-0.01}, 1.0, fd), DomainError);
  CHECK_THROWS_AS(linearize({0.01}, 0.0, fd), DomainError);
}
