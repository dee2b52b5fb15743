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

#include "rmpta/operators.hpp"

#include <cmath>
#include <vector>

namespace rmpta {
namespace {

// Cosine between the desired gradient produced by `u` and the target direction.
double alignment(const Eigen::VectorXd& u, const Eigen::VectorXd& unit_target,
                 const Eigen::VectorXd& hdot, const Eigen::MatrixXd& gain) {
  const Eigen::VectorXd neg_desired = hdot + gain * u;
  const double n = neg_desired.norm();
  if (n < kGradientEpsilon) return -1.0;
  return -neg_desired.dot(unit_target) / n;
}

}  // namespace

std::string operator_kind(const OperatorModel& model) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PerfectOperator>) return "perfect";
        if constexpr (std::is_same_v<T, NoisyOperator>) return "noisy";
        if constexpr (std::is_same_v<T, IdleOperator>) return "idle";
        return "replay";
      },
      model);
}

OperatorInput perfect_input(const Eigen::VectorXd& target_gradient, const Eigen::VectorXd& hdot,
                            const AdaptationConfig& cfg, double time) {
  const double gnorm = target_gradient.norm();
  if (gnorm < kGradientEpsilon) throw DegenerateTarget("target gradient vanishes");
  if (hdot.size() != target_gradient.size() || cfg.gain.rows() != hdot.size()) {
    throw DimensionMismatch("perfect_input: dimensions disagree");
  }
  const Eigen::VectorXd unit = target_gradient / gnorm;
  const auto solver = cfg.gain.ldlt();
  const Eigen::VectorXd a = solver.solve(unit);
  const Eigen::VectorXd b = solver.solve(hdot);

  // Solve |c a + b| = 1 for the largest c; u = -(c a + b) then makes
  // hdot + K u = -c * unit exactly.
  const double aa = a.squaredNorm();
  const double ab = a.dot(b);
  const double disc = ab * ab - aa * (b.squaredNorm() - 1.0);
  if (disc >= 0.0) {
    const double c = (-ab + std::sqrt(disc)) / aa;
    if (c > 0.0) {
      Eigen::VectorXd u = -(c * a + b);
      u /= u.norm();
      return {u, time};
    }
  }

  // Infeasible: maximize the cosine over the unit sphere by projected ascent
  // from several seeds.
  const Eigen::Index n = unit.size();
  std::vector<Eigen::VectorXd> seeds{-unit, -a / std::sqrt(aa)};
  if (b.norm() > 1e-15) seeds.push_back(-b.normalized());
  for (Eigen::Index k = 0; k < n; ++k) {
    seeds.push_back(Eigen::VectorXd::Unit(n, k));
    seeds.push_back(-Eigen::VectorXd::Unit(n, k));
  }
  Eigen::VectorXd best_u = seeds.front();
  double best = alignment(best_u, unit, hdot, cfg.gain);
  for (Eigen::VectorXd u : seeds) {
    double score = alignment(u, unit, hdot, cfg.gain);
    double rate = 1.0;
    for (int it = 0; it < 2000 && rate > 1e-14; ++it) {
      const Eigen::VectorXd w = hdot + cfg.gain * u;
      const double wn = w.norm();
      if (wn < kGradientEpsilon) break;
      const Eigen::VectorXd dw = -(unit - (w.dot(unit) / (wn * wn)) * w) / wn;
      Eigen::VectorXd grad = cfg.gain.transpose() * dw;
      grad -= grad.dot(u) * u;
      if (grad.norm() < 1e-14) break;
      const Eigen::VectorXd trial = (u + rate * grad).normalized();
      const double trial_score = alignment(trial, unit, hdot, cfg.gain);
      if (trial_score > score) {
        u = trial;
        score = trial_score;
        rate *= 2.0;
      } else {
        rate *= 0.5;
      }
    }
    if (score > best) {
      best = score;
      best_u = u;
    }
  }
  return {best_u, time};
}

OperatorInput perfect_input(const PolicySpec& target, const Pose& pose, const Twist& twist,
                            const Chart& human_chart, const AdaptationConfig& cfg, double time) {
  const HumanView view = human_view(target, pose, twist);
  return perfect_input(view.gradient, human_chart.velocity(pose, twist), cfg, time);
}

OperatorInput noisy_input(const OperatorInput& base, double noise_std, std::mt19937_64& rng) {
  if (noise_std <= 0.0) return base;
  std::normal_distribution<double> noise(0.0, noise_std);
  Eigen::VectorXd u = base.u;
  for (Eigen::Index i = 0; i < u.size(); ++i) u(i) += noise(rng);
  return OperatorInput::ingest(u, base.time);
}

Eigen::VectorXd task_gradient(const Scenario& scenario, int task, const Pose& pose,
                              const Twist& twist) {
  const auto& mission = scenario.mission();
  const auto& position = mission.at(static_cast<std::size_t>(scenario.position_policy(task)));
  const auto& rotation = mission.at(static_cast<std::size_t>(scenario.rotation_policy_for_task(task)));
  return human_view(position, pose, twist).gradient + human_view(rotation, pose, twist).gradient;
}

void TaskSchedule::update(double time, const Pose& pose) {
  if (complete()) return;
  if (!scenario_->within_tolerance(active_, pose)) {
    hold_start_.reset();
    return;
  }
  if (!hold_start_) hold_start_ = time;
  if (time - *hold_start_ >= scenario_->params().tolerance.dwell - 1e-9) {
    completions_.push_back(time);
    ++active_;
    hold_start_.reset();
  }
}

OperatorSession::OperatorSession(OperatorModel model, const Scenario& scenario, std::uint64_t seed)
    : model_(std::move(model)), scenario_(&scenario), rng_(seed) {}

OperatorInput OperatorSession::next(const RobotState& state, int active_task) {
  const int dim = scenario_->human_dim();
  const double t = state.time;

  auto demonstrate = [&]() -> OperatorInput {
    if (active_task < 0) return OperatorInput::zero(dim, t);
    const Eigen::VectorXd g = task_gradient(*scenario_, active_task, state.pose, state.twist);
    try {
      return perfect_input(g, scenario_->human_chart().velocity(state.pose, state.twist),
                           scenario_->adaptation(), t);
    } catch (const DegenerateTarget&) {
      return OperatorInput::zero(dim, t);
    }
  };

  return std::visit(
      [&](auto& m) -> OperatorInput {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PerfectOperator>) {
          return demonstrate();
        } else if constexpr (std::is_same_v<T, NoisyOperator>) {
          if (active_task < 0) return OperatorInput::zero(dim, t);
          return noisy_input(demonstrate(), m.noise_std, rng_);
        } else if constexpr (std::is_same_v<T, IdleOperator>) {
          return OperatorInput::zero(dim, t);
        } else {
          if (cursor_ >= m.inputs.size()) return OperatorInput::zero(dim, t);
          OperatorInput in = m.inputs[cursor_++];
          in.time = t;
          return OperatorInput::ingest(in.u, t);
        }
      },
      model_);
}

}  // namespace rmpta
