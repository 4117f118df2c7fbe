#include "vsl/linearize.hpp"

#include <string>

namespace vsl {

LinearizedCoeffs linearize(const CellField& rho_ref, double b0,
                           const FundamentalDiagram& fd) {
  if (!(b0 > 0.0)) {
    throw DomainError("linearize: b0 must be positive");
  }
  const int n = static_cast<int>(rho_ref.size());
  LinearizedCoeffs c;
  c.v_coef.resize(n);
  c.b_coef.resize(n);
  c.m_coef = 0.0;
  for (int i = 0; i < n; ++i) {
    // Both coefficients come from the branch of the same regime.
    if (regime(rho_ref[i], fd) == Regime::FreeFlow) {
      c.v_coef[i] = -fd.v_max * b0;
      c.b_coef[i] = -fd.v_max * rho_ref[i];
    } else {
      c.v_coef[i] = fd.w * b0;
      c.b_coef[i] = -fd.w * (fd.rho_max - rho_ref[i]);
    }
  }
  return c;
}

std::vector<int> wave_signs(const LinearizedCoeffs& c) {
  std::vector<int> s(c.v_coef.size());
  for (size_t i = 0; i < s.size(); ++i) s[i] = c.v_coef[i] < 0.0 ? -1 : 1;
  return s;
}

}  // namespace vsl
