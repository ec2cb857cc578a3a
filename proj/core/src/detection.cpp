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


#include "spotgame/detection.hpp"

#include "spotgame/errors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace spotgame {

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p must lie in (0, 1)");
  // Acklam's rational approximation (relative error ~1e-9) ...
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // ... polished by one Halley step against the erfc-based CDF.
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

NullModel fit_null(const std::vector<double>& errors, double confidence) {
  if (errors.size() < 2) throw NumericalError("fit_null: need at least two samples");
  if (!(confidence >= 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("fit_null: confidence must lie in [0, 1)");
  }
  double mean = 0.0;
  for (double e : errors) mean += e;
  mean /= static_cast<double>(errors.size());
  double ss = 0.0;
  for (double e : errors) ss += (e - mean) * (e - mean);
  const double sd = std::sqrt(ss / static_cast<double>(errors.size() - 1));
  if (!(sd > 0.0) || !std::isfinite(sd)) {
    throw NumericalError("fit_null: error series has zero or undefined spread");
  }
  const double z = confidence == 0.0 ? 0.0 : normal_quantile(0.5 * (1.0 + confidence));
  return {mean, sd, mean - z * sd, mean + z * sd};
}

const char* to_string(State state) {
  switch (state) {
    case State::kNull:
      return "S0";
    case State::kTruthful:
      return "TB";
    case State::kStrategic:
      return "GT";
    case State::kExpectedAnomaly:
      return "EA";
    case State::kOtherAnomaly:
      return "OA";
  }
  return "?";
}

Side side_of(double error, const NullModel& null) {
  if (error < null.ci_lo) return Side::kLow;
  if (error > null.ci_hi) return Side::kHigh;
  return Side::kIn;
}

StateLabel classify_point(double e_tb, double e_gt, const NullModel& null_tb,
                          const NullModel& null_gt) {
  // kTable[tb][gt], sides ordered low, in, high. Drawn with the TB error on
  // the horizontal axis and GT on the vertical, R1..R3 is the GT-high row.
  static constexpr StateLabel kTable[3][3] = {
      {{7, State::kExpectedAnomaly}, {4, State::kStrategic}, {1, State::kOtherAnomaly}},
      {{8, State::kTruthful}, {5, State::kNull}, {2, State::kTruthful}},
      {{9, State::kOtherAnomaly}, {6, State::kStrategic}, {3, State::kStrategic}},
  };
  const auto tb = static_cast<int>(side_of(e_tb, null_tb));
  const auto gt = static_cast<int>(side_of(e_gt, null_gt));
  return kTable[tb][gt];
}

namespace {

int severity(State s) {
  switch (s) {
    case State::kNull:
      return 0;
    case State::kTruthful:
      return 1;
    case State::kStrategic:
      return 2;
    case State::kExpectedAnomaly:
      return 3;
    case State::kOtherAnomaly:
      return 4;
  }
  return 0;
}

}  // namespace

State aggregate_states(const std::vector<State>& zone_states) {
  if (zone_states.empty()) throw std::invalid_argument("aggregate_states: no zones");
  State out = State::kNull;
  for (State s : zone_states) {
    if (severity(s) > severity(out)) out = s;
  }
  return out;
}

StateSeries run_tdsd(const Eigen::MatrixXd& tb_prices, const Eigen::MatrixXd& gt_prices,
                     const Eigen::MatrixXd& target_prices, double confidence,
                     int first_hour_of_day) {
  if (tb_prices.rows() != target_prices.rows() || tb_prices.cols() != target_prices.cols() ||
      gt_prices.rows() != target_prices.rows() || gt_prices.cols() != target_prices.cols()) {
    throw InputError("run_tdsd: price series are not aligned (" +
                     std::to_string(tb_prices.rows()) + "x" + std::to_string(tb_prices.cols()) +
                     ", " + std::to_string(gt_prices.rows()) + "x" +
                     std::to_string(gt_prices.cols()) + ", " +
                     std::to_string(target_prices.rows()) + "x" +
                     std::to_string(target_prices.cols()) + ")");
  }
  if (!tb_prices.allFinite() || !gt_prices.allFinite() || !target_prices.allFinite()) {
    throw InputError("run_tdsd: price series contain undefined entries");
  }
  const Eigen::Index hours = target_prices.rows();
  const Eigen::Index zones = target_prices.cols();
  const Eigen::MatrixXd e_tb = target_prices - tb_prices;
  const Eigen::MatrixXd e_gt = target_prices - gt_prices;

  StateSeries out;
  for (Eigen::Index z = 0; z < zones; ++z) {
    const Eigen::VectorXd tb = e_tb.col(z);
    const Eigen::VectorXd gt = e_gt.col(z);
    out.null_tb.push_back(fit_null({tb.data(), tb.data() + hours}, confidence));
    out.null_gt.push_back(fit_null({gt.data(), gt.data() + hours}, confidence));
  }
  out.hour_of_day.assign(24, {0, 0, 0, 0, 0});
  out.zonal.resize(static_cast<std::size_t>(hours));
  for (Eigen::Index t = 0; t < hours; ++t) {
    std::vector<State> states;
    for (Eigen::Index z = 0; z < zones; ++z) {
      const StateLabel label = classify_point(e_tb(t, z), e_gt(t, z),
                                              out.null_tb[static_cast<std::size_t>(z)],
                                              out.null_gt[static_cast<std::size_t>(z)]);
      out.zonal[static_cast<std::size_t>(t)].push_back(label);
      states.push_back(label.state);
    }
    const State agg = aggregate_states(states);
    out.aggregate.push_back(agg);
    const auto hod = static_cast<std::size_t>(((t + first_hour_of_day) % 24 + 24) % 24);
    ++out.hour_of_day[hod][static_cast<std::size_t>(severity(agg))];
  }
  return out;
}

}  // namespace spotgame
