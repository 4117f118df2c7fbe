#include "vsl/qp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace vsl {
namespace qp {

double KktReport::worst() const {
  return std::max({stationarity, primal, complementarity});
}

namespace {

// Provenance of a normalized inequality row, to map multipliers back.
enum class RowSource { General, Upper, Lower };

struct NormRow {
  Eigen::VectorXd a;
  double b = 0.0;
  double scale = 1.0;  // original row = scale * normalized row
  RowSource source = RowSource::General;
  int index = 0;  // index into G / ub / lb
};

struct Workspace {
  int n = 0;
  Eigen::VectorXd d_inv;           // 1 / h_diag
  std::vector<NormRow> ineq;
  std::vector<NormRow> eq;         // independent equality rows
  std::vector<NormRow> eq_dropped; // dependent rows, checked for consistency
};

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
}

NormRow normalize(Eigen::VectorXd a, double b, RowSource src, int index) {
  NormRow row;
  row.scale = std::max(a.lpNorm<Eigen::Infinity>(), 1e-300);
  row.a = a / row.scale;
  row.b = b / row.scale;
  row.source = src;
  row.index = index;
  return row;
}

Workspace build_workspace(const DenseQp& p) {
  Workspace w;
  w.n = p.dim();
  w.d_inv.resize(w.n);
  for (int i = 0; i < w.n; ++i) {
    if (!(p.h_diag[i] > 0.0)) {
      throw DomainError("qp::solve: h_diag must be strictly positive");
    }
    w.d_inv[i] = 1.0 / p.h_diag[i];
  }
  for (size_t r = 0; r < p.G.size(); ++r) {
    if (static_cast<int>(p.G[r].size()) != w.n) {
      throw DimensionError("qp::solve: inequality row dimension mismatch");
    }
    w.ineq.push_back(normalize(to_eigen(p.G[r]), p.g[r], RowSource::General,
                               static_cast<int>(r)));
  }
  for (int i = 0; i < w.n; ++i) {
    if (std::isfinite(p.ub[i])) {
      Eigen::VectorXd a = Eigen::VectorXd::Zero(w.n);
      a[i] = 1.0;
      w.ineq.push_back(normalize(a, p.ub[i], RowSource::Upper, i));
    }
    if (std::isfinite(p.lb[i])) {
      Eigen::VectorXd a = Eigen::VectorXd::Zero(w.n);
      a[i] = -1.0;
      w.ineq.push_back(normalize(a, -p.lb[i], RowSource::Lower, i));
    }
  }
  // Keep a maximal independent subset of the equality rows; dependent rows
  // are verified for consistency against the final iterate.
  Eigen::MatrixXd sel(0, w.n);
  for (size_t r = 0; r < p.E.size(); ++r) {
    if (static_cast<int>(p.E[r].size()) != w.n) {
      throw DimensionError("qp::solve: equality row dimension mismatch");
    }
    Eigen::MatrixXd trial(sel.rows() + 1, w.n);
    if (sel.rows() > 0) trial.topRows(sel.rows()) = sel;
    trial.row(sel.rows()) = to_eigen(p.E[r]).transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(trial);
    lu.setThreshold(1e-12);
    NormRow row = normalize(to_eigen(p.E[r]), p.e[r], RowSource::General,
                            static_cast<int>(r));
    if (lu.rank() == trial.rows()) {
      sel = trial;
      w.eq.push_back(row);
    } else {
      w.eq_dropped.push_back(row);
    }
  }
  return w;
}

// Solves the equality-constrained KKT system for the active rows via the
// Schur complement in the multipliers (diagonal Hessian makes this cheap):
//   M = A D^-1 A',  M r = A D^-1 q,  z = D^-1 (q - A' r).
struct KktSolve {
  Eigen::VectorXd z;
  Eigen::VectorXd r;  // aligned with [eq rows..., working-set rows...]
  bool ok = true;
};

KktSolve solve_kkt(const Workspace& w, const std::vector<int>& working,
                   const Eigen::VectorXd& q) {
  KktSolve out;
  const int ke = static_cast<int>(w.eq.size());
  const int k = ke + static_cast<int>(working.size());
  if (k == 0) {
    out.z = w.d_inv.asDiagonal() * q;
    out.r.resize(0);
    return out;
  }
  Eigen::MatrixXd a_rows(k, w.n);
  for (int i = 0; i < ke; ++i) a_rows.row(i) = w.eq[i].a.transpose();
  for (size_t j = 0; j < working.size(); ++j) {
    a_rows.row(ke + static_cast<int>(j)) = w.ineq[working[j]].a.transpose();
  }
  const Eigen::MatrixXd adi = a_rows * w.d_inv.asDiagonal();
  const Eigen::MatrixXd m = adi * a_rows.transpose();
  const Eigen::VectorXd rhs = adi * q;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
  out.r = ldlt.solve(rhs);
  if ((m * out.r - rhs).lpNorm<Eigen::Infinity>() >
      1e-8 * std::max(1.0, rhs.lpNorm<Eigen::Infinity>())) {
    out.ok = false;
  }
  out.z = w.d_inv.asDiagonal() * (q - a_rows.transpose() * out.r);
  return out;
}

}  // namespace

DenseSolution solve(const DenseQp& problem, double tol, int max_iter) {
  Workspace w = build_workspace(problem);
  const int n = w.n;
  if (max_iter <= 0) max_iter = 10 * std::max(n, 1);

  DenseSolution sol;
  sol.mult_ineq.assign(problem.G.size(), 0.0);
  sol.mult_eq.assign(problem.E.size(), 0.0);
  sol.mult_lb.assign(n, 0.0);
  sol.mult_ub.assign(n, 0.0);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd nu = Eigen::VectorXd::Zero(w.eq.size());  // equality mults
  std::vector<int> working;        // indices into w.ineq
  std::vector<double> mu_working;  // aligned with `working`

  auto finish = [&](Status status) {
    sol.status = status;
    sol.x.assign(x.data(), x.data() + n);
    for (size_t j = 0; j < working.size(); ++j) {
      const NormRow& row = w.ineq[working[j]];
      const double mu = mu_working[j] / row.scale;
      switch (row.source) {
        case RowSource::General: sol.mult_ineq[row.index] = mu; break;
        case RowSource::Upper: sol.mult_ub[row.index] = mu; break;
        case RowSource::Lower: sol.mult_lb[row.index] = mu; break;
      }
      if (row.source == RowSource::General && mu > 1e-12) ++sol.active_rows;
    }
    for (size_t j = 0; j < w.eq.size(); ++j) {
      sol.mult_eq[w.eq[j].index] = nu[j] / w.eq[j].scale;
    }
    if (status == Status::Optimal) {
      // Snap box variables onto their bounds; the working-set solve leaves
      // only roundoff-level dust there, never a real violation.
      for (int i = 0; i < n; ++i) {
        sol.x[i] = std::clamp(sol.x[i], problem.lb[i], problem.ub[i]);
      }
    }
    sol.kkt = check_kkt(problem, sol);
    return sol;
  };

  // Start at the equality-constrained minimizer.
  if (!w.eq.empty()) {
    const int ke = static_cast<int>(w.eq.size());
    Eigen::MatrixXd emat(ke, n);
    Eigen::VectorXd evec(ke);
    for (int i = 0; i < ke; ++i) {
      emat.row(i) = w.eq[i].a.transpose();
      evec[i] = w.eq[i].b;
    }
    const Eigen::MatrixXd m = emat * w.d_inv.asDiagonal() * emat.transpose();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
    nu = ldlt.solve(-evec);
    x = -(w.d_inv.asDiagonal() * (emat.transpose() * nu));
    if ((emat * x - evec).lpNorm<Eigen::Infinity>() > tol) {
      return finish(Status::Infeasible);
    }
  }
  for (const NormRow& row : w.eq_dropped) {
    if (std::fabs(row.a.dot(x) - row.b) > tol) {
      return finish(Status::Infeasible);
    }
  }

  int iters = 0;
  while (true) {
    // Most violated inequality row outside the working set.
    int p_idx = -1;
    double worst = tol;
    for (size_t i = 0; i < w.ineq.size(); ++i) {
      if (std::find(working.begin(), working.end(), static_cast<int>(i)) !=
          working.end()) {
        continue;
      }
      const double viol = w.ineq[i].a.dot(x) - w.ineq[i].b;
      if (viol > worst) {
        worst = viol;
        p_idx = static_cast<int>(i);
      }
    }
    if (p_idx < 0) {
      sol.iterations = iters;
      return finish(Status::Optimal);
    }

    const NormRow& cand = w.ineq[p_idx];
    double s_p = cand.a.dot(x) - cand.b;
    double mu_p = 0.0;

    // Resolve constraint p: take primal/dual steps until it becomes active
    // or is proven incompatible.
    while (true) {
      if (++iters > max_iter) {
        sol.iterations = iters;
        return finish(Status::MaxIterations);
      }
      KktSolve step = solve_kkt(w, working, cand.a);
      if (!step.ok) {
        sol.iterations = iters;
        return finish(Status::MaxIterations);
      }
      const double denom = cand.a.dot(step.z);
      const double denom_ref = cand.a.dot(w.d_inv.asDiagonal() * cand.a);
      const bool dependent = denom <= 1e-12 * std::max(denom_ref, 1e-300);

      // Dual blocking step: first working-set multiplier driven to zero.
      const int ke = static_cast<int>(w.eq.size());
      double t_dual = kInf;
      int block = -1;
      for (size_t j = 0; j < working.size(); ++j) {
        const double rate = step.r[ke + static_cast<int>(j)];
        if (rate > 1e-12) {
          const double t = mu_working[j] / rate;
          if (t < t_dual - 1e-15) {
            t_dual = t;
            block = static_cast<int>(j);
          }
        }
      }

      if (dependent) {
        if (block < 0) {
          // cand.a lies in the span of active normals with no droppable row:
          // the constraint cannot be satisfied.
          sol.iterations = iters;
          return finish(Status::Infeasible);
        }
        // Pure dual step.
        for (size_t j = 0; j < working.size(); ++j) {
          mu_working[j] -= t_dual * step.r[ke + static_cast<int>(j)];
        }
        nu -= t_dual * step.r.head(ke);
        mu_p += t_dual;
        mu_working[block] = 0.0;
        working.erase(working.begin() + block);
        mu_working.erase(mu_working.begin() + block);
        continue;
      }

      const double t_full = s_p / denom;
      const double t = std::min(t_dual, t_full);
      x -= t * step.z;
      for (size_t j = 0; j < working.size(); ++j) {
        mu_working[j] -= t * step.r[ke + static_cast<int>(j)];
      }
      nu -= t * step.r.head(ke);
      mu_p += t;
      s_p -= t * denom;

      if (t_full <= t_dual) {
        working.push_back(p_idx);
        mu_working.push_back(mu_p);
        break;
      }
      mu_working[block] = 0.0;
      working.erase(working.begin() + block);
      mu_working.erase(mu_working.begin() + block);
    }
  }
}

KktReport check_kkt(const DenseQp& problem, const DenseSolution& candidate) {
  const int n = problem.dim();
  KktReport rep;
  const Eigen::VectorXd x = to_eigen(candidate.x);

  // stationarity: || D x + G' mu + E' nu + mu_ub - mu_lb ||_inf
  Eigen::VectorXd grad = to_eigen(problem.h_diag).cwiseProduct(x);
  for (size_t r = 0; r < problem.G.size(); ++r) {
    grad += candidate.mult_ineq[r] * to_eigen(problem.G[r]);
  }
  for (size_t r = 0; r < problem.E.size(); ++r) {
    grad += candidate.mult_eq[r] * to_eigen(problem.E[r]);
  }
  for (int i = 0; i < n; ++i) {
    grad[i] += candidate.mult_ub[i] - candidate.mult_lb[i];
  }
  rep.stationarity = grad.lpNorm<Eigen::Infinity>();

  // primal feasibility and complementary slackness, max-norms
  for (size_t r = 0; r < problem.G.size(); ++r) {
    const double slack = to_eigen(problem.G[r]).dot(x) - problem.g[r];
    rep.primal = std::max(rep.primal, slack);
    rep.complementarity =
        std::max(rep.complementarity, std::fabs(candidate.mult_ineq[r] * slack));
  }
  for (size_t r = 0; r < problem.E.size(); ++r) {
    rep.primal = std::max(
        rep.primal, std::fabs(to_eigen(problem.E[r]).dot(x) - problem.e[r]));
  }
  for (int i = 0; i < n; ++i) {
    if (std::isfinite(problem.ub[i])) {
      const double slack = x[i] - problem.ub[i];
      rep.primal = std::max(rep.primal, slack);
      rep.complementarity =
          std::max(rep.complementarity, std::fabs(candidate.mult_ub[i] * slack));
    }
    if (std::isfinite(problem.lb[i])) {
      const double slack = problem.lb[i] - x[i];
      rep.primal = std::max(rep.primal, slack);
      rep.complementarity =
          std::max(rep.complementarity, std::fabs(candidate.mult_lb[i] * slack));
    }
  }
  rep.primal = std::max(rep.primal, 0.0);
  return rep;
}

int Problem::dimension() const {
  return static_cast<int>(h_diag.size()) + (use_delta ? 1 : 0);
}

DenseQp lower(const Problem& problem) {
  const int cells = static_cast<int>(problem.h_diag.size());
  const int n = problem.dimension();
  DenseQp qp;
  qp.h_diag = problem.h_diag;
  if (problem.use_delta) {
    if (!(problem.p > 0.0)) {
      throw DomainError("qp::lower: relaxation penalty p must be positive");
    }
    qp.h_diag.push_back(2.0 * problem.p);  // 1/2 * (2p) * delta^2 = p delta^2
  }
  qp.lb.assign(n, -kInf);
  qp.ub.assign(n, kInf);
  const ConstraintSystem& cs = problem.constraints;
  for (int i = 0; i < cells; ++i) {
    qp.lb[i] = cs.u_min;
    qp.ub[i] = cs.u_max;
  }
  if (problem.use_delta && problem.delta_nonneg) {
    qp.lb[cells] = 0.0;
  }
  for (const CbfRow& row : cs.cbf_rows) {
    std::vector<double> a(n, 0.0);
    a[row.var] = row.coef;
    qp.G.push_back(std::move(a));
    qp.g.push_back(row.rhs);
  }
  if (cs.clf_row) {
    if (static_cast<int>(cs.clf_row->coef.size()) != cells) {
      throw DimensionError("qp::lower: CLF row dimension mismatch");
    }
    std::vector<double> a(n, 0.0);
    for (int i = 0; i < cells; ++i) a[i] = cs.clf_row->coef[i];
    if (!problem.use_delta) {
      throw DomainError("qp::lower: CLF row requires the relaxation variable");
    }
    a[cells] = -1.0;
    qp.G.push_back(std::move(a));
    qp.g.push_back(cs.clf_row->rhs);
  }
  if (cs.mean_zero) {
    std::vector<double> a(n, 0.0);
    for (int i = 0; i < cells; ++i) a[i] = cs.dz;
    qp.E.push_back(std::move(a));
    qp.e.push_back(0.0);
  }
  return qp;
}

Solution solve(const Problem& problem, double tol, int max_iter) {
  const DenseQp dense = lower(problem);
  const DenseSolution ds = solve(dense, tol, max_iter);
  const int cells = static_cast<int>(problem.h_diag.size());

  Solution out;
  out.status = ds.status;
  out.kkt = ds.kkt;
  out.iterations = ds.iterations;
  out.u.assign(ds.x.begin(), ds.x.begin() + cells);
  out.delta = problem.use_delta ? ds.x[cells] : 0.0;
  const size_t n_cbf = problem.constraints.cbf_rows.size();
  out.cbf_multipliers.assign(ds.mult_ineq.begin(),
                             ds.mult_ineq.begin() + n_cbf);
  for (double mu : out.cbf_multipliers) {
    if (mu > 1e-12) ++out.active_cbf_rows;
  }
  if (problem.constraints.clf_row) {
    out.clf_active = ds.mult_ineq.back() > 1e-12;
  }
  return out;
}

}  // namespace qp
}  // namespace vsl
