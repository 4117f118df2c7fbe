#pragma once

#include <limits>
#include <vector>

#include "vsl/constraints.hpp"
#include "vsl/grid.hpp"

namespace vsl {
namespace qp {

enum class Status { Optimal, MaxIterations, Infeasible };

// Max-norm KKT residuals, computable independently of the solve path.
struct KktReport {
  double stationarity = 0.0;
  double primal = 0.0;
  double complementarity = 0.0;
  double worst() const;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

// Small dense strictly convex QP:
//   min 1/2 x' diag(h_diag) x
//   s.t. G x <= g,  E x = e,  lb <= x <= ub.
// Rows are stored dense; lb/ub entries may be +-inf.
struct DenseQp {
  std::vector<double> h_diag;
  std::vector<std::vector<double>> G;
  std::vector<double> g;
  std::vector<std::vector<double>> E;
  std::vector<double> e;
  std::vector<double> lb;
  std::vector<double> ub;

  int dim() const { return static_cast<int>(h_diag.size()); }
};

struct DenseSolution {
  std::vector<double> x;
  Status status = Status::Infeasible;
  KktReport kkt;
  int iterations = 0;
  // Multipliers of the original constraints (>= 0 for inequalities).
  std::vector<double> mult_ineq;
  std::vector<double> mult_eq;
  std::vector<double> mult_lb;
  std::vector<double> mult_ub;
  int active_rows = 0;  // inequality rows (not box) with positive multiplier
};

// Dual active-set solve. Deterministic: fixed most-violated selection with
// smallest-index tie-breaking. max_iter = 0 selects the default 10 * dim.
DenseSolution solve(const DenseQp& problem, double tol = 1e-8, int max_iter = 0);

// Residuals of a candidate point with its multipliers, from problem data only.
KktReport check_kkt(const DenseQp& problem, const DenseSolution& candidate);

// The per-step program of the controller: decision (u, delta) with cost
// 1/2 u' diag(h_diag) u + p delta^2 over a ConstraintSystem. use_delta = false
// drops the relaxation variable (safety-only mode).
struct Problem {
  std::vector<double> h_diag;  // one entry per cell, all > 0
  double p = 0.0;
  ConstraintSystem constraints;
  bool use_delta = true;
  bool delta_nonneg = false;

  int dimension() const;
};

struct Solution {
  CellField u;
  double delta = 0.0;
  Status status = Status::Infeasible;
  KktReport kkt;
  int iterations = 0;
  int active_cbf_rows = 0;
  bool clf_active = false;
  std::vector<double> cbf_multipliers;  // aligned with constraints.cbf_rows
};

// Lowers a Problem to the dense form (delta is the trailing variable).
DenseQp lower(const Problem& problem);

Solution solve(const Problem& problem, double tol = 1e-8, int max_iter = 0);

}  // namespace qp
}  // namespace vsl
