// Copyright 2026 The spotgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spotgame/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace spotgame {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool all_finite(const VectorXd& v) { return v.allFinite(); }

}  // namespace

Cqp::Cqp(VectorXd diag_hessian, VectorXd linear_cost)
    : diag_hessian_(std::move(diag_hessian)),
      linear_cost_(std::move(linear_cost)) {
  const Index n = diag_hessian_.size();
  if (n == 0) throw std::invalid_argument("Cqp: empty problem");
  if (linear_cost_.size() != n) {
    throw std::invalid_argument("Cqp: linear cost has wrong dimension");
  }
  for (Index i = 0; i < n; ++i) {
    if (!(diag_hessian_[i] > 0.0) || !std::isfinite(diag_hessian_[i])) {
      std::ostringstream os;
      os << "Cqp: Hessian diagonal entry " << i << " = " << diag_hessian_[i]
         << " is not strictly positive";
      throw std::invalid_argument(os.str());
    }
  }
  if (!all_finite(linear_cost_)) {
    throw std::invalid_argument("Cqp: linear cost must be finite");
  }
  ineq_matrix_.resize(0, n);
  lower_ = VectorXd::Constant(n, -kInf);
  upper_ = VectorXd::Constant(n, kInf);
}

void Cqp::set_inequalities(MatrixXd matrix, VectorXd rhs) {
  if (matrix.cols() != num_vars() || matrix.rows() != rhs.size()) {
    throw std::invalid_argument("Cqp: inequality block has wrong dimensions");
  }
  if (!matrix.allFinite() || !all_finite(rhs)) {
    throw std::invalid_argument("Cqp: inequality block must be finite");
  }
  ineq_matrix_ = std::move(matrix);
  ineq_rhs_ = std::move(rhs);
}

void Cqp::set_bounds(VectorXd lower, VectorXd upper) {
  if (lower.size() != num_vars() || upper.size() != num_vars()) {
    throw std::invalid_argument("Cqp: bounds have wrong dimension");
  }
  for (Index i = 0; i < num_vars(); ++i) {
    if (std::isnan(lower[i]) || std::isnan(upper[i]) || lower[i] > upper[i] ||
        lower[i] == kInf || upper[i] == -kInf) {
      std::ostringstream os;
      os << "Cqp: invalid bounds [" << lower[i] << ", " << upper[i]
         << "] for variable " << i;
      throw std::invalid_argument(os.str());
    }
  }
  lower_ = std::move(lower);
  upper_ = std::move(upper);
}

void Cqp::set_equality(VectorXd coefficients, double rhs) {
  if (coefficients.size() != num_vars()) {
    throw std::invalid_argument("Cqp: equality row has wrong dimension");
  }
  if (!all_finite(coefficients) || !std::isfinite(rhs) ||
      coefficients.lpNorm<Eigen::Infinity>() == 0.0) {
    throw std::invalid_argument("Cqp: equality row must be finite and nonzero");
  }
  eq_vector_ = std::move(coefficients);
  eq_rhs_ = rhs;
}

void Cqp::clear_equality() {
  eq_vector_.resize(0);
  eq_rhs_ = 0.0;
}

double Cqp::objective(const VectorXd& x) const {
  return 0.5 * x.dot(diag_hessian_.cwiseProduct(x)) + linear_cost_.dot(x);
}

std::string describe(const ConstraintRef& ref) {
  std::ostringstream os;
  switch (ref.kind) {
    case ConstraintKind::kEquality: os << "equality"; break;
    case ConstraintKind::kRow: os << "row " << ref.index; break;
    case ConstraintKind::kLower: os << "lower bound of x[" << ref.index << "]"; break;
    case ConstraintKind::kUpper: os << "upper bound of x[" << ref.index << "]"; break;
  }
  return os.str();
}

std::string to_string(CqpStatus status) {
  switch (status) {
    case CqpStatus::kOptimal: return "optimal";
    case CqpStatus::kInfeasible: return "infeasible";
    case CqpStatus::kIterationLimit: return "iteration_limit";
  }
  return "unknown";
}

double KktResiduals::max() const {
  return std::max({stationarity, primal, dual, complementarity});
}

namespace {

// Every constraint is handled in the normalized form  c' x >= beta
// (the equality as c' x = beta). Bounds are never materialized as dense rows
// in the scans; only the step computation builds their unit normals.
class ConstraintView {
 public:
  explicit ConstraintView(const Cqp& qp) : qp_(qp) {}

  double slack(const ConstraintRef& ref, const VectorXd& x) const {
    switch (ref.kind) {
      case ConstraintKind::kEquality: return qp_.eq_vector().dot(x) - qp_.eq_rhs();
      case ConstraintKind::kRow:
        return qp_.ineq_rhs()[ref.index] - qp_.ineq_matrix().row(ref.index).dot(x);
      case ConstraintKind::kLower: return x[ref.index] - qp_.lower_bounds()[ref.index];
      case ConstraintKind::kUpper: return qp_.upper_bounds()[ref.index] - x[ref.index];
    }
    return 0.0;
  }

  double rhs(const ConstraintRef& ref) const {
    switch (ref.kind) {
      case ConstraintKind::kEquality: return qp_.eq_rhs();
      case ConstraintKind::kRow: return -qp_.ineq_rhs()[ref.index];
      case ConstraintKind::kLower: return qp_.lower_bounds()[ref.index];
      case ConstraintKind::kUpper: return -qp_.upper_bounds()[ref.index];
    }
    return 0.0;
  }

  VectorXd normal(const ConstraintRef& ref) const {
    const Index n = qp_.num_vars();
    switch (ref.kind) {
      case ConstraintKind::kEquality: return qp_.eq_vector();
      case ConstraintKind::kRow: return -qp_.ineq_matrix().row(ref.index).transpose();
      case ConstraintKind::kLower: return VectorXd::Unit(n, ref.index);
      case ConstraintKind::kUpper: return -VectorXd::Unit(n, ref.index);
    }
    return VectorXd::Zero(n);
  }

  double normal_norm(const ConstraintRef& ref) const {
    if (ref.kind == ConstraintKind::kRow) {
      return qp_.ineq_matrix().row(ref.index).norm();
    }
    if (ref.kind == ConstraintKind::kEquality) return qp_.eq_vector().norm();
    return 1.0;
  }

  // Rounding in n'x grows with the size of its terms, so the tolerance does
  // too: a fixed variable next to a 1e4 MWh balance row is off by ~1e-9.
  double feas_scale(const ConstraintRef& ref, const VectorXd& x) const {
    double l1 = 1.0;
    if (ref.kind == ConstraintKind::kRow) l1 = qp_.ineq_matrix().row(ref.index).lpNorm<1>();
    if (ref.kind == ConstraintKind::kEquality) l1 = qp_.eq_vector().lpNorm<1>();
    return std::max({1.0, std::abs(rhs(ref)), l1 * x.lpNorm<Eigen::Infinity>()});
  }

  // Inequality constraints in tie-break order: rows, then lower bounds,
  // then upper bounds, each ascending.
  std::vector<ConstraintRef> inequalities() const {
    std::vector<ConstraintRef> out;
    for (Index j = 0; j < qp_.num_rows(); ++j) out.push_back({ConstraintKind::kRow, j});
    for (Index i = 0; i < qp_.num_vars(); ++i) {
      if (std::isfinite(qp_.lower_bounds()[i])) out.push_back({ConstraintKind::kLower, i});
    }
    for (Index i = 0; i < qp_.num_vars(); ++i) {
      if (std::isfinite(qp_.upper_bounds()[i])) out.push_back({ConstraintKind::kUpper, i});
    }
    return out;
  }

 private:
  const Cqp& qp_;
};

int order_key(const ConstraintRef& ref, Index rows, Index n) {
  switch (ref.kind) {
    case ConstraintKind::kEquality: return -1;
    case ConstraintKind::kRow: return static_cast<int>(ref.index);
    case ConstraintKind::kLower: return static_cast<int>(rows + ref.index);
    case ConstraintKind::kUpper: return static_cast<int>(rows + n + ref.index);
  }
  return 0;
}

struct ActiveSet {
  std::vector<ConstraintRef> refs;
  std::vector<VectorXd> normals;
  std::vector<double> u;

  Index size() const { return static_cast<Index>(refs.size()); }

  void add(const ConstraintRef& ref, VectorXd normal, double multiplier) {
    refs.push_back(ref);
    normals.push_back(std::move(normal));
    u.push_back(multiplier);
  }

  void drop(Index k) {
    refs.erase(refs.begin() + k);
    normals.erase(normals.begin() + k);
    u.erase(u.begin() + k);
  }

  MatrixXd matrix(Index n) const {
    MatrixXd N(n, size());
    for (Index k = 0; k < size(); ++k) N.col(k) = normals[k];
    return N;
  }
};

// Re-solves the equality-constrained subproblem on the final working set:
// x = H^{-1}(N u - g) with (N' H^{-1} N) u = beta + N' H^{-1} g.
bool polish(const Cqp& qp, const ConstraintView& view, const VectorXd& hinv,
            ActiveSet& active, VectorXd& x) {
  if (active.size() == 0) {
    x = -hinv.cwiseProduct(qp.linear_cost());
    return true;
  }
  const MatrixXd N = active.matrix(qp.num_vars());
  const MatrixXd HinvN = hinv.asDiagonal() * N;
  const MatrixXd S = N.transpose() * HinvN;
  VectorXd beta(active.size());
  for (Index k = 0; k < active.size(); ++k) beta[k] = view.rhs(active.refs[k]);
  const VectorXd rhs = beta + HinvN.transpose() * qp.linear_cost();
  Eigen::LDLT<MatrixXd> ldlt(S);
  if (ldlt.info() != Eigen::Success) return false;
  const VectorXd u = ldlt.solve(rhs);
  if (!u.allFinite()) return false;
  x = hinv.cwiseProduct(N * u - qp.linear_cost());
  for (Index k = 0; k < active.size(); ++k) active.u[k] = u[k];
  return true;
}

}  // namespace

KktResiduals kkt_residuals(const Cqp& qp, const CqpSolution& sol) {
  KktResiduals res;
  const VectorXd& x = sol.x;
  VectorXd grad = qp.diag_hessian().cwiseProduct(x) + qp.linear_cost();
  if (qp.num_rows() > 0) grad += qp.ineq_matrix().transpose() * sol.ineq_multipliers;
  if (qp.has_equality()) grad += sol.eq_multiplier * qp.eq_vector();
  grad -= sol.lower_multipliers;
  grad += sol.upper_multipliers;
  res.stationarity = grad.lpNorm<Eigen::Infinity>();

  ConstraintView view(qp);
  auto check = [&](const ConstraintRef& ref, double multiplier) {
    const double s = view.slack(ref, x);
    const double scale = view.feas_scale(ref, x);
    res.primal = std::max(res.primal, std::max(0.0, -s) / scale);
    res.dual = std::max(res.dual, std::max(0.0, -multiplier));
    res.complementarity =
        std::max(res.complementarity, std::abs(multiplier) * std::abs(s) / scale);
  };
  for (const ConstraintRef& ref : view.inequalities()) {
    double mu = 0.0;
    if (ref.kind == ConstraintKind::kRow) mu = sol.ineq_multipliers[ref.index];
    if (ref.kind == ConstraintKind::kLower) mu = sol.lower_multipliers[ref.index];
    if (ref.kind == ConstraintKind::kUpper) mu = sol.upper_multipliers[ref.index];
    check(ref, mu);
  }
  if (qp.has_equality()) {
    const ConstraintRef eq{ConstraintKind::kEquality, 0};
    res.primal = std::max(res.primal, std::abs(view.slack(eq, x)) / view.feas_scale(eq, x));
  }
  return res;
}

CqpSolution solve_cqp(const Cqp& qp, const CqpOptions& options) {
  const Index n = qp.num_vars();
  const Index rows = qp.num_rows();
  const ConstraintView view(qp);
  const VectorXd hinv = qp.diag_hessian().cwiseInverse();
  const std::vector<ConstraintRef> candidates = view.inequalities();
  const int max_iter = options.max_iterations > 0
                           ? options.max_iterations
                           : static_cast<int>(10 * (rows + 2 * n + 1));

  CqpSolution sol;
  sol.ineq_multipliers = VectorXd::Zero(rows);
  sol.lower_multipliers = VectorXd::Zero(n);
  sol.upper_multipliers = VectorXd::Zero(n);

  // Unconstrained minimizer.
  VectorXd x = -hinv.cwiseProduct(qp.linear_cost());
  ActiveSet active;

  if (qp.has_equality()) {
    const ConstraintRef eq{ConstraintKind::kEquality, 0};
    VectorXd c = view.normal(eq);
    const VectorXd z = hinv.cwiseProduct(c);
    const double t = -view.slack(eq, x) / z.dot(c);
    x += t * z;
    active.add(eq, std::move(c), t);
  }

  auto is_active = [&](const ConstraintRef& ref) {
    return std::find(active.refs.begin(), active.refs.end(), ref) != active.refs.end();
  };

  auto violated = [&](const ConstraintRef& ref) {
    return view.slack(ref, x) < -options.feas_tol * view.feas_scale(ref, x);
  };

  int iter = 0;
  bool done = false;
  while (!done) {
    if (iter >= max_iter) {
      sol.status = CqpStatus::kIterationLimit;
      break;
    }

    // Pick the constraint to add: violated hints first, then the most
    // violated constraint by normalized distance (first in order wins ties).
    std::optional<ConstraintRef> pick;
    for (const ConstraintRef& ref : options.warm_start) {
      if (ref.kind == ConstraintKind::kEquality || is_active(ref)) continue;
      if (ref.kind == ConstraintKind::kRow && ref.index >= rows) continue;
      if (ref.kind != ConstraintKind::kRow && ref.index >= n) continue;
      if (!std::isfinite(view.rhs(ref))) continue;
      if (violated(ref)) {
        pick = ref;
        break;
      }
    }
    if (!pick) {
      double worst = 0.0;
      for (const ConstraintRef& ref : candidates) {
        if (!violated(ref) || is_active(ref)) continue;
        const double dist = -view.slack(ref, x) / view.normal_norm(ref);
        if (dist > worst) {
          worst = dist;
          pick = ref;
        }
      }
    }
    if (!pick) {
      sol.status = CqpStatus::kOptimal;
      break;
    }

    const ConstraintRef p = *pick;
    const VectorXd cp = view.normal(p);
    const VectorXd hinv_cp = hinv.cwiseProduct(cp);
    const double curvature = cp.dot(hinv_cp);
    double up = 0.0;

    // Inner loop: move toward satisfying p, dropping blocking constraints.
    while (true) {
      if (++iter > max_iter) {
        sol.status = CqpStatus::kIterationLimit;
        done = true;
        break;
      }
      VectorXd z = hinv_cp;
      VectorXd r;
      if (active.size() > 0) {
        const MatrixXd N = active.matrix(n);
        const MatrixXd HinvN = hinv.asDiagonal() * N;
        const MatrixXd S = N.transpose() * HinvN;
        r = S.ldlt().solve(HinvN.transpose() * cp);
        z -= HinvN * r;
      }

      // Partial (dual) step limit from active inequality multipliers.
      double t1 = kInf;
      Index drop = -1;
      int drop_key = 0;
      const double r_tol = r.size() > 0 ? 1e-13 * (1.0 + r.lpNorm<Eigen::Infinity>()) : 0.0;
      for (Index k = 0; k < active.size(); ++k) {
        if (active.refs[k].kind == ConstraintKind::kEquality) continue;
        if (r[k] <= r_tol) continue;
        const double ratio = std::max(0.0, active.u[k]) / r[k];
        const int key = order_key(active.refs[k], rows, n);
        if (ratio < t1 || (ratio == t1 && key < drop_key)) {
          t1 = ratio;
          drop = k;
          drop_key = key;
        }
      }

      // Full (primal) step.
      const double ztc = z.dot(cp);
      const double sp = view.slack(p, x);
      double t2 = kInf;
      if (ztc > 1e-12 * curvature) t2 = -sp / ztc;

      const double t = std::min(t1, t2);
      if (t == kInf) {
        sol.status = CqpStatus::kInfeasible;
        sol.infeasible_constraint = p;
        sol.infeasibility = -sp;
        done = true;
        break;
      }

      if (t2 == kInf) {
        // Dual step only: p is dependent on the active normals.
        for (Index k = 0; k < active.size(); ++k) active.u[k] -= t * r[k];
        up += t;
        active.drop(drop);
        continue;
      }

      x += t * z;
      for (Index k = 0; k < active.size(); ++k) active.u[k] -= t * r[k];
      up += t;
      if (t2 <= t1) {
        active.add(p, cp, up);
        break;
      }
      active.drop(drop);
      if (!violated(p)) {
        // p became satisfied to within tolerance on a partial step; keep it
        // as active so its accumulated multiplier is not lost.
        active.add(p, cp, up);
        break;
      }
    }
  }
  sol.iterations = iter;

  if (sol.status == CqpStatus::kOptimal) {
    VectorXd polished = x;
    ActiveSet trial = active;
    if (polish(qp, view, hinv, trial, polished)) {
      bool ok = true;
      for (const ConstraintRef& ref : candidates) {
        if (view.slack(ref, polished) < -options.feas_tol * view.feas_scale(ref, polished)) {
          ok = false;
        }
      }
      for (Index k = 0; k < trial.size(); ++k) {
        if (trial.refs[k].kind != ConstraintKind::kEquality && trial.u[k] < -options.tol) {
          ok = false;
        }
      }
      if (ok) {
        x = polished;
        active = trial;
      }
    }
    x = x.cwiseMax(qp.lower_bounds()).cwiseMin(qp.upper_bounds());
  }

  sol.x = x;
  sol.active_set = active.refs;
  for (Index k = 0; k < active.size(); ++k) {
    const ConstraintRef& ref = active.refs[k];
    const double u = active.u[k];
    switch (ref.kind) {
      case ConstraintKind::kEquality: sol.eq_multiplier = -u; break;
      case ConstraintKind::kRow: sol.ineq_multipliers[ref.index] = std::max(0.0, u); break;
      case ConstraintKind::kLower: sol.lower_multipliers[ref.index] = std::max(0.0, u); break;
      case ConstraintKind::kUpper: sol.upper_multipliers[ref.index] = std::max(0.0, u); break;
    }
  }
  sol.kkt_residual = kkt_residuals(qp, sol).max();
  return sol;
}

}  // namespace spotgame
