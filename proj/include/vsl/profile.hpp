#pragma once

#include <string>
#include <vector>

#include "vsl/grid.hpp"

namespace vsl {

// Spatial profile primitives, sufficient to describe the case-study shapes:
//   constant(v)
//   piecewise_constant(z0,v0, z1,v1, ...)   value v_k on [z_k, z_{k+1})
//   piecewise_linear(z0,v0, z1,v1, ...)     interpolated between breakpoints
//   bump(base, amplitude, center, halfwidth)  cos^2 bump on the ring
// Breakpoints must be ascending and within [0, L]; the first/last segment
// extends to the road ends.
struct ProfileSpec {
  enum class Kind { Constant, PiecewiseConstant, PiecewiseLinear, Bump };
  Kind kind = Kind::Constant;
  std::vector<double> params;

  bool operator==(const ProfileSpec& other) const = default;
};

ProfileSpec parse_profile(const std::string& text);
std::string to_string(const ProfileSpec& spec);

// Samples the profile at cell centers, scaling values by `scale`
// (used for unit conversion at the config boundary).
// Throws SpecError for malformed specs or breakpoints outside [0, L].
CellField profile_eval(const ProfileSpec& spec, const Grid& g,
                       double scale = 1.0);

}  // namespace vsl
