// Copyright 2026 The rmpta Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rmpta/policies.hpp"

namespace rmpta {
namespace {

Eigen::MatrixXd weight_matrix(const Eigen::VectorXd& weight, int dim) {
  if (weight.size() == 1) return weight(0) * Eigen::MatrixXd::Identity(dim, dim);
  if (weight.size() != dim) throw BadParams("metric weight must have 1 or " + std::to_string(dim) + " entries");
  return weight.asDiagonal();
}

void check_weight(const Eigen::VectorXd& weight) {
  if (weight.size() == 0 || (weight.array() < 0.0).any() || !weight.allFinite()) {
    throw BadParams("metric weights must be finite and non-negative");
  }
}

void check_keeper(const KeeperParams& p) {
  if (!(p.stiffness > 0.0)) throw BadParams("keeper stiffness must be positive");
  if (!(p.damping >= 0.0)) throw BadParams("keeper damping must be non-negative");
  if (!(p.barrier_scale > 0.0)) throw BadParams("keeper barrier scale must be positive");
  if (!(p.steepness > 0.0)) throw BadParams("keeper ramp steepness must be positive");
  if (!(p.floor >= 0.0)) throw BadParams("keeper metric floor must be non-negative");
}

}  // namespace

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double soft_norm_potential(const Eigen::VectorXd& d, double gain, double softness) {
  return gain * (std::sqrt(d.squaredNorm() + softness * softness) - softness);
}

PolicySpec make_inspection_position(const CylinderChart& cylinder, const Eigen::Vector3d& target,
                                    const AttractorParams& params, std::string name) {
  if (!(params.gain > 0.0)) throw BadParams("attractor gain must be positive");
  if (!(params.softness > 0.0)) throw BadParams("attractor softness must be positive");
  if (!(params.damping >= 0.0)) throw BadParams("attractor damping must be non-negative");
  check_weight(params.weight);

  Eigen::VectorXd period = Eigen::VectorXd::Zero(3);
  period(1) = cylinder.arc_period();
  const Eigen::MatrixXd metric = weight_matrix(params.weight, 3);
  const double gain = params.gain;
  const double softness = params.softness;
  const Eigen::VectorXd goal = target;

  auto diff = [period, goal](const Eigen::VectorXd& x) {
    Eigen::VectorXd d = x - goal;
    d(1) = wrap_periodic(d(1), period(1));
    return d;
  };

  Eigen::MatrixXd human_map = Eigen::MatrixXd::Zero(3, 3);
  human_map(0, 0) = 1.0;
  human_map(1, 1) = 1.0;

  return PolicySpec{
      .name = std::move(name),
      .category = PolicyCategory::kMission,
      .chart = make_position_chart(cylinder),
      .potential = [=](const Eigen::VectorXd& x) { return soft_norm_potential(diff(x), gain, softness); },
      .gradient =
          [=](const Eigen::VectorXd& x) -> Eigen::VectorXd {
            const Eigen::VectorXd d = diff(x);
            return gain / std::sqrt(d.squaredNorm() + softness * softness) * d;
          },
      .damping = params.damping,
      .metric = [metric](const Eigen::VectorXd&, const Eigen::VectorXd&) { return metric; },
      .optimum = goal,
      .period = period,
      .human_map = human_map,
  };
}

PolicySpec make_inspection_rotation(const CylinderChart& cylinder, RollMode mode,
                                    const AttractorParams& params, std::string name) {
  check_weight(params.weight);
  const double gain = params.gain;
  const double goal = roll_target(mode);
  const Eigen::MatrixXd metric = weight_matrix(params.weight, 1);

  Eigen::MatrixXd human_map = Eigen::MatrixXd::Zero(1, 3);
  human_map(0, 2) = 1.0;

  return PolicySpec{
      .name = std::move(name),
      .category = PolicyCategory::kMission,
      .chart = make_roll_chart(cylinder),
      .potential =
          [=](const Eigen::VectorXd& x) {
            const double e = wrap_angle(x(0) - goal);
            return 0.5 * gain * e * e;
          },
      .gradient =
          [=](const Eigen::VectorXd& x) -> Eigen::VectorXd {
            return Eigen::VectorXd::Constant(1, gain * wrap_angle(x(0) - goal));
          },
      .damping = params.damping,
      .metric = [metric](const Eigen::VectorXd&, const Eigen::VectorXd&) { return metric; },
      .optimum = Eigen::VectorXd::Constant(1, goal),
      .period = Eigen::VectorXd::Constant(1, 2.0 * std::numbers::pi),
      .human_map = human_map,
  };
}

PolicySpec make_distance_keeping(const CylinderChart& cylinder, double d_safe,
                                 const KeeperParams& params) {
  if (!(d_safe > 0.0)) throw BadParams("safe distance must be positive");
  check_keeper(params);
  const KeeperParams p = params;
  return PolicySpec{
      .name = "distance_keeping",
      .category = PolicyCategory::kSafety,
      .chart = make_distance_chart(cylinder),
      .potential =
          [=](const Eigen::VectorXd& x) {
            const double e = x(0) - d_safe;
            return 0.5 * p.stiffness * e * e;
          },
      .gradient =
          [=](const Eigen::VectorXd& x) -> Eigen::VectorXd {
            return Eigen::VectorXd::Constant(1, p.stiffness * (x(0) - d_safe));
          },
      .damping = p.damping,
      .metric =
          [=](const Eigen::VectorXd& x, const Eigen::VectorXd&) -> Eigen::MatrixXd {
            // Large on the near side of d_safe.
            const double a = p.barrier_scale * logistic(-p.steepness * (x(0) - d_safe)) + p.floor;
            return Eigen::MatrixXd::Constant(1, 1, a);
          },
      .optimum = Eigen::VectorXd::Constant(1, d_safe),
      .period = Eigen::VectorXd::Zero(1),
      .human_map = {},
  };
}

PolicySpec make_normal_keeping(const CylinderChart& cylinder, const KeeperParams& params) {
  check_keeper(params);
  const KeeperParams p = params;
  return PolicySpec{
      .name = "normal_keeping",
      .category = PolicyCategory::kSafety,
      .chart = make_tilt_chart(cylinder),
      .potential = [=](const Eigen::VectorXd& x) { return 0.5 * p.stiffness * x.squaredNorm(); },
      .gradient = [=](const Eigen::VectorXd& x) -> Eigen::VectorXd { return p.stiffness * x; },
      .damping = p.damping,
      .metric =
          [=](const Eigen::VectorXd& x, const Eigen::VectorXd&) -> Eigen::MatrixXd {
            const double a = p.barrier_scale * logistic(p.steepness * (x.norm() - p.setpoint)) + p.floor;
            return a * Eigen::MatrixXd::Identity(2, 2);
          },
      .optimum = Eigen::VectorXd::Zero(2),
      .period = Eigen::VectorXd::Zero(2),
      .human_map = {},
  };
}

}  // namespace rmpta
