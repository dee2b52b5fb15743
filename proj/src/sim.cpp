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

#include "rmpta/sim.hpp"

#include <cmath>

namespace rmpta {
namespace {

Policy scaled_pullback(const PolicySpec& spec, const Pose& pose, const Twist& twist, double scale) {
  const Eigen::MatrixXd jac = spec.chart.jacobian(pose);
  const Eigen::VectorXd x = spec.chart.apply(pose);
  Policy local = evaluate(spec, x, jac * twist.stacked());
  local.metric *= scale;
  return pullback(local, jac);
}

}  // namespace

Vector6d compose_motion(const RobotState& state, const Scenario& scenario, const ScaleVector& alpha) {
  const auto& mission = scenario.mission();
  if (alpha.size() != static_cast<int>(mission.size())) {
    throw DimensionMismatch("compose_motion: alpha size differs from the mission count");
  }
  std::vector<Policy> pulled;
  pulled.reserve(mission.size() + scenario.safety().size());
  for (std::size_t i = 0; i < mission.size(); ++i) {
    pulled.push_back(scaled_pullback(mission[i], state.pose, state.twist, alpha.alpha(static_cast<Eigen::Index>(i))));
  }
  for (const auto& spec : scenario.safety()) {
    pulled.push_back(scaled_pullback(spec, state.pose, state.twist, 1.0));
  }
  return rmp_sum(pulled).f;
}

RobotState integrate_step(const RobotState& state, const Vector6d& u_r, double dt) {
  if (!(dt > 0.0)) throw BadParams("integrate_step: dt must be positive");
  RobotState next = state;
  next.twist = Twist::from_stacked(state.twist.stacked() + u_r * dt);
  next.pose.position = state.pose.position + next.twist.linear * dt;
  next.pose.orientation = (state.pose.orientation * quat_exp(next.twist.angular * dt)).normalized();
  next.time = state.time + dt;
  return next;
}

double optimality_residual(const RobotState& state, const Scenario& scenario,
                           const ScaleVector& alpha) {
  Vector6d sum = Vector6d::Zero();
  const auto& mission = scenario.mission();
  for (std::size_t i = 0; i < mission.size(); ++i) {
    const auto& spec = mission[i];
    const Eigen::MatrixXd jac = spec.chart.jacobian(state.pose);
    const Eigen::VectorXd x = spec.chart.apply(state.pose);
    const Eigen::VectorXd xdot = jac * state.twist.stacked();
    sum += alpha.alpha(static_cast<Eigen::Index>(i)) * jac.transpose() * spec.metric(x, xdot) *
           spec.gradient(x);
  }
  return sum.norm();
}

Eigen::VectorXd policy_potentials(const RobotState& state, const Scenario& scenario) {
  const auto& mission = scenario.mission();
  const auto& safety = scenario.safety();
  Eigen::VectorXd phi(static_cast<Eigen::Index>(mission.size() + safety.size()));
  Eigen::Index k = 0;
  for (const auto& spec : mission) phi(k++) = spec.potential(spec.chart.apply(state.pose));
  for (const auto& spec : safety) phi(k++) = spec.potential(spec.chart.apply(state.pose));
  return phi;
}

EpisodeRunner::EpisodeRunner(const Scenario& scenario, TraceHeader header)
    : scenario_(&scenario),
      state_(scenario.initial_state()),
      alpha_(scenario.initial_alpha()),
      schedule_(scenario) {
  trace_.header = std::move(header);
  const int n = scenario.mission_count();
  report_ = {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n),
             Eigen::VectorXd::Zero(scenario.human_dim())};
}

bool EpisodeRunner::timed_out() const {
  return state_.time >= scenario_->max_duration() - 0.5 * scenario_->dt();
}

int EpisodeRunner::observe() {
  if (observed_tick_ != tick_) {
    schedule_.update(state_.time, state_.pose);
    observed_tick_ = tick_;
  }
  return schedule_.active();
}

const TraceRecord& EpisodeRunner::step(const OperatorInput& raw) {
  const Scenario& sc = *scenario_;
  const int task = observe();
  const OperatorInput input = OperatorInput::ingest(raw.u, state_.time);

  AdaptationResult adapted = adaptation_step(state_.pose, state_.twist, input, sc.mission(),
                                             sc.human_chart(), alpha_, sc.adaptation());
  alpha_ = std::move(adapted.alpha);
  report_ = std::move(adapted.report);
  const Vector6d u_r = compose_motion(state_, sc, alpha_);

  TraceRecord rec;
  rec.t = state_.time;
  rec.pose = state_.pose;
  rec.twist = state_.twist;
  rec.u_h = input.u;
  rec.u_r = u_r;
  rec.alpha = alpha_.alpha;
  rec.p = report_.combined;
  rec.cond = report_.conditional;
  rec.prior = report_.prior;
  rec.phi = policy_potentials(state_, sc);
  rec.task = task;
  trace_.records.push_back(std::move(rec));

  ++tick_;
  RobotState next = integrate_step(state_, u_r, sc.dt());
  // Time is k * dt rather than accumulated to keep ticks exact.
  next.time = static_cast<double>(tick_) * sc.dt();
  if (!next.twist.finite() || next.twist.stacked().norm() > kDivergenceSpeed) {
    throw Diverged("twist exceeded the divergence fuse at t = " + std::to_string(next.time));
  }
  state_ = next;
  return trace_.records.back();
}

EpisodeTrace run_episode(const Scenario& scenario, const OperatorModel& model, std::uint64_t seed,
                         const EpisodeOptions& options) {
  EpisodeRunner runner(scenario, make_trace_header(scenario, seed, operator_kind(model)));
  OperatorSession session(model, scenario, seed);
  const double limit = options.max_duration > 0.0 ? options.max_duration : scenario.max_duration();
  const long max_ticks = std::lround(limit / scenario.dt());
  for (long k = 0; k < max_ticks; ++k) {
    const int task = runner.observe();
    runner.step(session.next(runner.state(), task));
    // The completing tick is recorded with task -1 so completion is visible in the trace.
    if (options.stop_when_complete && task < 0) break;
  }
  return runner.take_trace();
}

}  // namespace rmpta
