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


#include "spotgame/calibration.hpp"

#include "parallel.hpp"
#include "spotgame/cost_model.hpp"
#include "spotgame/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace spotgame {

Scales Scales::ones(int num_zones) {
  return {Eigen::VectorXd::Ones(num_zones), Eigen::VectorXd::Ones(num_zones)};
}

Eigen::VectorXd Scales::stacked() const {
  Eigen::VectorXd out(2 * c.size());
  for (Eigen::Index z = 0; z < c.size(); ++z) {
    out[2 * z] = c[z];
    out[2 * z + 1] = b[z];
  }
  return out;
}

Scales Scales::unstack(const Eigen::VectorXd& v) {
  if (v.size() % 2 != 0) throw std::invalid_argument("Scales::unstack: odd length");
  const Eigen::Index zones = v.size() / 2;
  Scales s{Eigen::VectorXd(zones), Eigen::VectorXd(zones)};
  for (Eigen::Index z = 0; z < zones; ++z) {
    s.c[z] = v[2 * z];
    s.b[z] = v[2 * z + 1];
  }
  return s;
}

void CalibrationProblem::validate() const {
  if (hours.empty()) throw std::invalid_argument("calibration: no hours");
  const int zones = hours.front().num_zones();
  if (targets.rows() != static_cast<Eigen::Index>(hours.size()) || targets.cols() != zones) {
    throw std::invalid_argument("calibration: targets must be hours x zones");
  }
  for (const MarketInstance& h : hours) {
    if (h.num_zones() != zones) throw std::invalid_argument("calibration: zone count varies");
  }
  if (initial.c.size() != zones || initial.b.size() != zones) {
    throw std::invalid_argument("calibration: initial scales must have one entry per zone");
  }
}

namespace {

struct HourTerms {
  bool feasible = false;
  double sq_error = 0.0;
  Eigen::VectorXd gradient;
  std::vector<Eigen::Matrix2d> hessian;
  Eigen::VectorXi setter;
  int used = 0;
  int skipped = 0;
};

HourTerms hour_terms(const MarketInstance& hour, const Eigen::RowVectorXd& target,
                     const Scales& s) {
  const int zones = hour.num_zones();
  HourTerms out;
  out.gradient = Eigen::VectorXd::Zero(2 * zones);
  out.hessian.assign(static_cast<std::size_t>(zones), Eigen::Matrix2d::Zero());
  out.setter = Eigen::VectorXi::Constant(zones, -1);

  MarketInstance scaled = hour;
  scaled.players = apply_scales(hour.players, s.c, s.b);
  const ClearingResult res = clear_market(scaled, truthful_profile(scaled));
  if (!res.optimal()) return out;
  out.feasible = true;

  for (int z = 0; z < zones; ++z) {
    if (!res.priced(z) || !std::isfinite(target[z])) {
      ++out.skipped;
      continue;
    }
    const int k = res.price_setter[static_cast<std::size_t>(z)];
    const Player& p = hour.players[static_cast<std::size_t>(k)];
    const double r = res.v[z] - target[z];
    // v_z = s^c_z c_k x_k + s^b_z b_k with x_k held fixed.
    const Eigen::Vector2d dv(p.c * res.x[k], p.b);
    out.sq_error += r * r;
    out.gradient.segment<2>(2 * z) += 2.0 * r * dv;
    out.hessian[static_cast<std::size_t>(z)] += 2.0 * dv * dv.transpose();
    out.setter[z] = k;
    ++out.used;
  }
  return out;
}

}  // namespace

CalibrationEvaluation evaluate_calibration(const CalibrationProblem& problem, const Scales& s,
                                           int threads) {
  problem.validate();
  const int zones = problem.hours.front().num_zones();
  if (s.c.size() != zones || s.b.size() != zones) {
    throw std::invalid_argument("calibration: scales must have one entry per zone");
  }
  std::vector<HourTerms> terms(problem.hours.size());
  detail::parallel_for(terms.size(), threads, [&](std::size_t t) {
    terms[t] = hour_terms(problem.hours[t], problem.targets.row(static_cast<Eigen::Index>(t)), s);
  });

  CalibrationEvaluation ev;
  ev.gradient = Eigen::VectorXd::Zero(2 * zones);
  ev.hessian.assign(static_cast<std::size_t>(zones), Eigen::Matrix2d::Zero());
  ev.price_setter = Eigen::MatrixXi::Constant(static_cast<Eigen::Index>(terms.size()), zones, -1);
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const HourTerms& h = terms[t];
    if (!h.feasible) {
      ++ev.infeasible_hours;
      continue;
    }
    ++ev.hours_used;
    ev.objective += h.sq_error;
    ev.gradient += h.gradient;
    for (int z = 0; z < zones; ++z) {
      ev.hessian[static_cast<std::size_t>(z)] += h.hessian[static_cast<std::size_t>(z)];
    }
    ev.price_setter.row(static_cast<Eigen::Index>(t)) = h.setter.transpose();
    ev.points_used += h.used;
    ev.points_skipped += h.skipped;
  }
  if (ev.hours_used == 0) throw NumericalError("calibration: every hour clears infeasibly");
  const double inv = 1.0 / ev.hours_used;
  ev.objective *= inv;
  ev.gradient *= inv;
  for (Eigen::Matrix2d& block : ev.hessian) block *= inv;
  return ev;
}

double calibration_objective(const CalibrationProblem& problem, const Scales& s, int threads) {
  return evaluate_calibration(problem, s, threads).objective;
}

FitResult fit_tb_scales(const CalibrationProblem& problem, const FitOptions& options) {
  problem.validate();
  Eigen::VectorXd x = problem.initial.stacked().cwiseMax(options.scale_floor);
  CalibrationEvaluation ev = evaluate_calibration(problem, Scales::unstack(x), options.threads);

  FitResult out;
  double step = options.initial_step;
  out.trace.push_back({0, ev.objective, ev.gradient.norm(), 0.0, Scales::unstack(x)});
  for (int it = 1; it <= options.max_iterations; ++it) {
    // Projected gradient: components pushing into the floor do not count.
    Eigen::VectorXd pg = ev.gradient;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      if (x[j] <= options.scale_floor && pg[j] > 0.0) pg[j] = 0.0;
    }
    if (pg.norm() <= options.gradient_tol || ev.objective == 0.0) {
      out.converged = true;
      break;
    }

    double t = options.initial_step;
    bool accepted = false;
    Eigen::VectorXd trial;
    CalibrationEvaluation trial_ev;
    while (t >= options.min_step) {
      trial = (x - t * ev.gradient).cwiseMax(options.scale_floor);
      trial_ev = evaluate_calibration(problem, Scales::unstack(trial), options.threads);
      const double predicted = ev.gradient.dot(trial - x);
      if (trial_ev.objective <= ev.objective + options.sufficient_decrease * predicted &&
          trial_ev.objective < ev.objective) {
        accepted = true;
        break;
      }
      t *= options.backtrack;
    }
    if (!accepted) {
      out.diagnostic = "line search found no decrease at iteration " + std::to_string(it);
      break;
    }
    const double moved = (trial - x).norm();
    x = trial;
    ev = std::move(trial_ev);
    step = t;
    out.iterations = it;
    out.trace.push_back({it, ev.objective, ev.gradient.norm(), step, Scales::unstack(x)});
    if (moved <= options.step_tol * std::max(1.0, x.norm())) {
      out.converged = true;
      break;
    }
  }
  if (!out.converged && out.diagnostic.empty()) out.diagnostic = "iteration limit reached";
  out.scales = Scales::unstack(x);
  out.objective = ev.objective;
  return out;
}

Scales gt_ratio_adjust(const Eigen::MatrixXd& gt_prices, const Eigen::MatrixXd& targets,
                       const std::vector<int>& hours, const Scales& s_tb) {
  if (gt_prices.rows() != targets.rows() || gt_prices.cols() != targets.cols()) {
    throw std::invalid_argument("gt_ratio_adjust: price matrices differ in shape");
  }
  if (targets.cols() != s_tb.c.size()) {
    throw std::invalid_argument("gt_ratio_adjust: zone count differs from scales");
  }
  std::vector<int> rows = hours;
  if (rows.empty()) {
    for (int t = 0; t < static_cast<int>(targets.rows()); ++t) rows.push_back(t);
  }
  Scales out = s_tb;
  for (Eigen::Index z = 0; z < targets.cols(); ++z) {
    double sum = 0.0;
    int count = 0;
    for (int t : rows) {
      if (t < 0 || t >= targets.rows()) throw std::invalid_argument("gt_ratio_adjust: bad hour");
      const double v = gt_prices(t, z);
      const double p = targets(t, z);
      if (!std::isfinite(v) || !std::isfinite(p)) continue;
      if (p == 0.0) {
        throw NumericalError("gt_ratio_adjust: zero target price at hour " + std::to_string(t) +
                             ", zone " + std::to_string(z));
      }
      sum += v / p;
      ++count;
    }
    if (count == 0) {
      throw NumericalError("gt_ratio_adjust: no usable hours in zone " + std::to_string(z));
    }
    const double ratio = sum / count;
    if (!(ratio > 0.0)) {
      throw NumericalError("gt_ratio_adjust: non-positive mean price ratio in zone " +
                           std::to_string(z));
    }
    out.c[z] = s_tb.c[z] / ratio;
  }
  return out;
}

}  // namespace spotgame
