#include "vsl/fd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vsl {

namespace {

void check_density(double rho, const FundamentalDiagram& fd) {
  if (!(rho >= 0.0) || !(rho <= fd.rho_max)) {
    throw DomainError("density " + std::to_string(rho) + " outside [0, " +
                      std::to_string(fd.rho_max) + "]");
  }
}

void check_ratio(double b, bool allow_zero) {
  if (!std::isfinite(b) || b < 0.0 || (!allow_zero && b == 0.0)) {
    throw DomainError("speed-limit ratio must be positive, got " +
                      std::to_string(b));
  }
}

}  // namespace

FundamentalDiagram make_diagram(double v_max, double rho_cr, double rho_max) {
  if (!(v_max > 0.0)) {
    throw DomainError("v_max must be positive");
  }
  if (!(rho_cr > 0.0) || !(rho_cr < rho_max)) {
    throw DomainError("need 0 < rho_cr < rho_max, got rho_cr=" +
                      std::to_string(rho_cr) + ", rho_max=" +
                      std::to_string(rho_max));
  }
  FundamentalDiagram fd;
  fd.v_max = v_max;
  fd.rho_cr = rho_cr;
  fd.rho_max = rho_max;
  fd.w = v_max * rho_cr / (rho_max - rho_cr);
  return fd;
}

double capacity(const FundamentalDiagram& fd, double b) {
  return b * fd.v_max * fd.rho_cr;
}

Regime regime(double rho, const FundamentalDiagram& fd) {
  check_density(rho, fd);
  return rho <= fd.rho_cr ? Regime::FreeFlow : Regime::Congested;
}

double flow(double rho, double b, const FundamentalDiagram& fd) {
  check_density(rho, fd);
  check_ratio(b, /*allow_zero=*/false);
  if (rho <= fd.rho_cr) return b * fd.v_max * rho;
  return b * fd.w * (fd.rho_max - rho);
}

DemandSupply demand_supply(double rho, double b, const FundamentalDiagram& fd) {
  check_density(rho, fd);
  check_ratio(b, /*allow_zero=*/true);
  DemandSupply ds;
  ds.demand = b * fd.v_max * std::min(rho, fd.rho_cr);
  ds.supply = b * fd.w * (fd.rho_max - std::max(rho, fd.rho_cr));
  return ds;
}

}  // namespace vsl
