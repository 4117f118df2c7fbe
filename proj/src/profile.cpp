#include "vsl/profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "format.hpp"

namespace vsl {

using detail::format_double;

namespace {

const char* kind_name(ProfileSpec::Kind k) {
  switch (k) {
    case ProfileSpec::Kind::Constant: return "constant";
    case ProfileSpec::Kind::PiecewiseConstant: return "piecewise_constant";
    case ProfileSpec::Kind::PiecewiseLinear: return "piecewise_linear";
    case ProfileSpec::Kind::Bump: return "bump";
  }
  return "?";
}

void check_breakpoints(const std::vector<double>& params, const Grid& g,
                       const char* what) {
  if (params.size() < 2 || params.size() % 2 != 0) {
    throw SpecError(std::string(what) + ": needs (z, value) pairs");
  }
  double prev = -1.0;
  for (size_t k = 0; k < params.size(); k += 2) {
    const double z = params[k];
    if (z < 0.0 || z > g.length_m) {
      throw SpecError(std::string(what) + ": breakpoint z=" + format_double(z) +
                      " outside [0, " + format_double(g.length_m) + "]");
    }
    if (z <= prev) {
      throw SpecError(std::string(what) + ": breakpoints must be ascending");
    }
    prev = z;
  }
}

}  // namespace

ProfileSpec parse_profile(const std::string& text) {
  const size_t open = text.find('(');
  const size_t close = text.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open) {
    throw SpecError("profile spec must look like name(arg, ...): '" + text + "'");
  }
  std::string name = text.substr(0, open);
  name.erase(std::remove_if(name.begin(), name.end(), ::isspace), name.end());

  ProfileSpec spec;
  if (name == "constant") {
    spec.kind = ProfileSpec::Kind::Constant;
  } else if (name == "piecewise_constant") {
    spec.kind = ProfileSpec::Kind::PiecewiseConstant;
  } else if (name == "piecewise_linear") {
    spec.kind = ProfileSpec::Kind::PiecewiseLinear;
  } else if (name == "bump") {
    spec.kind = ProfileSpec::Kind::Bump;
  } else {
    throw SpecError("unknown profile primitive '" + name + "'");
  }

  std::string args = text.substr(open + 1, close - open - 1);
  std::stringstream ss(args);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t pos = 0;
    double v;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      throw SpecError("bad numeric argument '" + item + "' in profile spec");
    }
    while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
    if (pos != item.size()) {
      throw SpecError("bad numeric argument '" + item + "' in profile spec");
    }
    spec.params.push_back(v);
  }
  if (spec.params.empty()) {
    throw SpecError("profile spec has no arguments: '" + text + "'");
  }
  return spec;
}

std::string to_string(const ProfileSpec& spec) {
  std::string out = kind_name(spec.kind);
  out += "(";
  for (size_t i = 0; i < spec.params.size(); ++i) {
    if (i) out += ", ";
    out += format_double(spec.params[i]);
  }
  out += ")";
  return out;
}

CellField profile_eval(const ProfileSpec& spec, const Grid& g, double scale) {
  CellField f(g.n_cells);
  switch (spec.kind) {
    case ProfileSpec::Kind::Constant: {
      if (spec.params.size() != 1) {
        throw SpecError("constant profile takes one argument");
      }
      std::fill(f.begin(), f.end(), scale * spec.params[0]);
      break;
    }
    case ProfileSpec::Kind::PiecewiseConstant: {
      check_breakpoints(spec.params, g, "piecewise_constant");
      for (int i = 0; i < g.n_cells; ++i) {
        const double z = cell_center(g, i);
        double v = spec.params[1];  // first segment extends left
        for (size_t k = 0; k + 1 < spec.params.size(); k += 2) {
          if (z >= spec.params[k]) v = spec.params[k + 1];
        }
        f[i] = scale * v;
      }
      break;
    }
    case ProfileSpec::Kind::PiecewiseLinear: {
      check_breakpoints(spec.params, g, "piecewise_linear");
      const size_t m = spec.params.size() / 2;
      for (int i = 0; i < g.n_cells; ++i) {
        const double z = cell_center(g, i);
        double v;
        if (z <= spec.params[0]) {
          v = spec.params[1];
        } else if (z >= spec.params[2 * (m - 1)]) {
          v = spec.params[2 * (m - 1) + 1];
        } else {
          v = spec.params[1];
          for (size_t k = 0; k + 1 < m; ++k) {
            const double z0 = spec.params[2 * k], v0 = spec.params[2 * k + 1];
            const double z1 = spec.params[2 * k + 2], v1 = spec.params[2 * k + 3];
            if (z >= z0 && z <= z1) {
              v = v0 + (v1 - v0) * (z - z0) / (z1 - z0);
              break;
            }
          }
        }
        f[i] = scale * v;
      }
      break;
    }
    case ProfileSpec::Kind::Bump: {
      if (spec.params.size() != 4) {
        throw SpecError("bump profile takes (base, amplitude, center, halfwidth)");
      }
      const double base = spec.params[0], amp = spec.params[1];
      const double center = spec.params[2], halfwidth = spec.params[3];
      if (center < 0.0 || center > g.length_m) {
        throw SpecError("bump center outside [0, L]");
      }
      if (!(halfwidth > 0.0)) {
        throw SpecError("bump halfwidth must be positive");
      }
      for (int i = 0; i < g.n_cells; ++i) {
        const double d = ring_distance(g, cell_center(g, i), center);
        double v = base;
        if (d < halfwidth) {
          const double c = std::cos(0.5 * M_PI * d / halfwidth);
          v += amp * c * c;
        }
        f[i] = scale * v;
      }
      break;
    }
  }
  return f;
}

}  // namespace vsl
