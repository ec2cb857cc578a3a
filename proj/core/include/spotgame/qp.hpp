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

#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace spotgame {

/// Strictly convex QP with a diagonal Hessian:
///
///   minimize   1/2 x' diag(h) x + g' x
///   subject to A x <= r            (general rows)
///              lo <= x <= hi       (bounds, entries may be infinite)
///              e' x = d            (optional single equality)
///
/// Every setter validates its arguments and throws std::invalid_argument, so
/// a Cqp that exists is well formed.
class Cqp {
 public:
  Cqp(Eigen::VectorXd diag_hessian, Eigen::VectorXd linear_cost);

  void set_inequalities(Eigen::MatrixXd matrix, Eigen::VectorXd rhs);
  void set_bounds(Eigen::VectorXd lower, Eigen::VectorXd upper);
  void set_equality(Eigen::VectorXd coefficients, double rhs);
  void clear_equality();

  Eigen::Index num_vars() const { return diag_hessian_.size(); }
  Eigen::Index num_rows() const { return ineq_matrix_.rows(); }
  bool has_equality() const { return eq_vector_.size() > 0; }

  const Eigen::VectorXd& diag_hessian() const { return diag_hessian_; }
  const Eigen::VectorXd& linear_cost() const { return linear_cost_; }
  const Eigen::MatrixXd& ineq_matrix() const { return ineq_matrix_; }
  const Eigen::VectorXd& ineq_rhs() const { return ineq_rhs_; }
  const Eigen::VectorXd& lower_bounds() const { return lower_; }
  const Eigen::VectorXd& upper_bounds() const { return upper_; }
  const Eigen::VectorXd& eq_vector() const { return eq_vector_; }
  double eq_rhs() const { return eq_rhs_; }

  double objective(const Eigen::VectorXd& x) const;

 private:
  Eigen::VectorXd diag_hessian_;
  Eigen::VectorXd linear_cost_;
  Eigen::MatrixXd ineq_matrix_;
  Eigen::VectorXd ineq_rhs_;
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
  Eigen::VectorXd eq_vector_;
  double eq_rhs_ = 0.0;
};

enum class ConstraintKind { kEquality, kRow, kLower, kUpper };

/// Identifies one constraint of a Cqp. `index` is the row for kRow and the
/// variable for kLower/kUpper; it is ignored for kEquality.
struct ConstraintRef {
  ConstraintKind kind = ConstraintKind::kRow;
  Eigen::Index index = 0;

  friend bool operator==(const ConstraintRef&, const ConstraintRef&) = default;
};

std::string describe(const ConstraintRef& ref);

enum class CqpStatus { kOptimal, kInfeasible, kIterationLimit };

std::string to_string(CqpStatus status);

struct CqpSolution {
  CqpStatus status = CqpStatus::kInfeasible;
  Eigen::VectorXd x;
  // Sign convention: diag(h) x + g + A' ineq + e eq - lower + upper = 0,
  // with ineq, lower, upper >= 0.
  double eq_multiplier = 0.0;
  Eigen::VectorXd ineq_multipliers;
  Eigen::VectorXd lower_multipliers;
  Eigen::VectorXd upper_multipliers;
  double kkt_residual = 0.0;
  int iterations = 0;
  std::vector<ConstraintRef> active_set;
  // Set when status is kInfeasible: the constraint that could not be added
  // to the active set, and its violation at the last iterate.
  std::optional<ConstraintRef> infeasible_constraint;
  double infeasibility = 0.0;
};

struct CqpOptions {
  double tol = 1e-8;        // KKT residual target
  double feas_tol = 1e-9;   // relative to max(1, |rhs|, |n|_1 |x|_inf)
  int max_iterations = 0;   // 0 selects 10 * (rows + 2 n + 1)
  // Constraints expected to be active. Violated hinted constraints are
  // added first; the optimum does not depend on the hint.
  std::vector<ConstraintRef> warm_start;
};

struct KktResiduals {
  double stationarity = 0.0;
  double primal = 0.0;
  double dual = 0.0;
  double complementarity = 0.0;

  double max() const;
};

/// Goldfarb-Idnani dual active-set method. Infeasible problems return
/// kInfeasible with a certificate rather than throwing.
CqpSolution solve_cqp(const Cqp& problem, const CqpOptions& options = {});

KktResiduals kkt_residuals(const Cqp& problem, const CqpSolution& solution);

}  // namespace spotgame
