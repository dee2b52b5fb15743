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

#include <doctest.h>

#include "rmpta/operators.hpp"
#include "support.hpp"

namespace rmpta {
namespace {

using testing::random_vector;
using testing::uniform;

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const double x : values) v(i++) = x;
  return v;
}

double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return a.dot(b) / (a.norm() * b.norm()); }

TEST_CASE("perfect input at rest is the normalized negative gradient") {
  AdaptationConfig cfg;
  cfg.gain = 0.7 * Eigen::MatrixXd::Identity(3, 3);
  const OperatorInput u = perfect_input(vec({0, -2, 0}), Eigen::VectorXd::Zero(3), cfg);
  CHECK((u.u - vec({0, 1, 0})).norm() < 1e-12);
  CHECK_THROWS_AS((void)perfect_input(Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(3), cfg), DegenerateTarget);
}

TEST_CASE("perfect input aligns the desired gradient whenever alignment is feasible") {
  AdaptationConfig cfg;
  cfg.gain = Eigen::Vector3d(0.3, 0.8, 0.5).asDiagonal();
  const Eigen::MatrixXd kinv = cfg.gain.inverse();
  std::mt19937 rng(41);
  int feasible_cases = 0;
  for (int i = 0; i < 2000; ++i) {
    const Eigen::VectorXd g = random_vector(rng, 3);
    const Eigen::VectorXd hdot = random_vector(rng, 3, uniform(rng, 0.0, 0.6));
    const OperatorInput u = perfect_input(g, hdot, cfg);
    CHECK(u.u.norm() == doctest::Approx(1.0));

    // Dense search over the scale c of -c * g_hat = hdot + K u for a unit u.
    const Eigen::VectorXd gh = g.normalized();
    bool feasible = false;
    double prev = (kinv * hdot).norm() - 1.0;
    for (int k = 1; k <= 20000 && !feasible; ++k) {
      const double c = 5.0 * k / 20000.0;
      const double cur = (kinv * (c * gh + hdot)).norm() - 1.0;
      feasible = (prev <= 0.0) != (cur <= 0.0);
      prev = cur;
    }
    const Eigen::VectorXd desired = -(hdot + cfg.gain * u.u);
    if (feasible) {
      ++feasible_cases;
      CHECK(cosine(desired, g) >= 0.99);
    }
    // Otherwise at least as good as a dense sampling of the unit sphere.
    if (!feasible && i % 10 == 0) {
      double sampled = -1.0;
      constexpr int kPoints = 20000;
      for (int k = 0; k < kPoints; ++k) {
        const double z = 1.0 - 2.0 * (k + 0.5) / kPoints;
        const double r = std::sqrt(1.0 - z * z);
        const double phi = k * std::numbers::pi * (3.0 - std::sqrt(5.0));
        const Eigen::Vector3d v(r * std::cos(phi), r * std::sin(phi), z);
        sampled = std::max(sampled, cosine(-(hdot + cfg.gain * v), g));
      }
      CHECK(cosine(desired, g) >= sampled - 1e-6);
    }
  }
  CHECK(feasible_cases > 1000);
}

TEST_CASE("noisy input") {
  std::mt19937_64 rng(5);
  const OperatorInput base{vec({0.6, 0.0, 0.8}), 1.0};
  CHECK(noisy_input(base, 0.0, rng).u == base.u);
  for (int i = 0; i < 1000; ++i) CHECK(noisy_input(base, 0.5, rng).u.norm() <= 1.0 + 1e-12);

  std::mt19937_64 a(9), b(9);
  for (int i = 0; i < 100; ++i) CHECK(noisy_input(base, 0.2, a).u == noisy_input(base, 0.2, b).u);
}

TEST_CASE("operator kinds") {
  CHECK(operator_kind(PerfectOperator{}) == "perfect");
  CHECK(operator_kind(NoisyOperator{}) == "noisy");
  CHECK(operator_kind(IdleOperator{}) == "idle");
  CHECK(operator_kind(ReplayOperator{}) == "replay");
}

TEST_CASE("task gradient combines position and roll") {
  const Scenario scenario(reference_params());
  const RobotState s = scenario.initial_state();
  const Eigen::VectorXd g = task_gradient(scenario, 0, s.pose, s.twist);
  const HumanView pos = human_view(scenario.mission()[0], s.pose, s.twist);
  const HumanView rot = human_view(scenario.mission()[static_cast<std::size_t>(scenario.rotation_policy_for_task(0))],
                                   s.pose, s.twist);
  CHECK((g - pos.gradient - rot.gradient).norm() < 1e-12);
}

TEST_CASE("sessions") {
  const Scenario scenario(reference_params());
  const RobotState start = scenario.initial_state();

  SUBCASE("perfect at target is zero") {
    RobotState at = start;
    at.pose = scenario.target_pose(0);
    OperatorSession session(PerfectOperator{}, scenario, 0);
    CHECK(session.next(at, 0).u.norm() == 0.0);
    CHECK(session.next(start, -1).u.norm() == 0.0);
    CHECK(session.next(start, 0).u.norm() == doctest::Approx(1.0));
  }
  SUBCASE("idle is zero") {
    OperatorSession session(IdleOperator{}, scenario, 0);
    CHECK(session.next(start, 0).u == Eigen::VectorXd::Zero(3));
  }
  SUBCASE("replay ingests and runs out") {
    OperatorSession session(ReplayOperator{{{vec({2, 0, 0}), 0.0}, {vec({0, 0.5, 0}), 0.01}}}, scenario, 0);
    CHECK(session.next(start, 0).u.isApprox(vec({1, 0, 0})));
    CHECK(session.next(start, 0).u == vec({0, 0.5, 0}));
    CHECK(session.next(start, 0).u == Eigen::VectorXd::Zero(3));
  }
  SUBCASE("noisy is seeded") {
    OperatorSession a(NoisyOperator{0.2}, scenario, 17);
    OperatorSession b(NoisyOperator{0.2}, scenario, 17);
    OperatorSession c(NoisyOperator{0.2}, scenario, 18);
    const Eigen::VectorXd ua = a.next(start, 0).u;
    CHECK(ua == b.next(start, 0).u);
    CHECK(ua != c.next(start, 0).u);
  }
}

TEST_CASE("task schedule waits out the dwell time") {
  const Scenario scenario(reference_params());
  TaskSchedule schedule(scenario);
  const double dt = scenario.dt();
  const Pose away = scenario.initial_state().pose;
  const Pose target = scenario.target_pose(0);
  schedule.update(0.0, away);
  CHECK(schedule.active() == 0);
  for (int k = 1; k <= 30; ++k) schedule.update(k * dt, target);
  schedule.update(0.31, away);  // leaving resets the hold
  for (int k = 32; k < 82; ++k) schedule.update(k * dt, target);
  CHECK(schedule.active() == 0);
  schedule.update(82 * dt, target);
  CHECK(schedule.active() == 1);
  REQUIRE(schedule.completion_times().size() == 1);
  CHECK(schedule.completion_times()[0] == doctest::Approx(0.82));
}

TEST_CASE("tolerance check uses position and rotation") {
  const Scenario scenario(reference_params());
  const Pose target = scenario.target_pose(1);
  CHECK(scenario.within_tolerance(1, target));
  Pose shifted = target;
  shifted.position.x() += 0.049;
  CHECK(scenario.within_tolerance(1, shifted));
  shifted.position.x() += 0.002;
  CHECK_FALSE(scenario.within_tolerance(1, shifted));
  const Pose turned(target.position, target.orientation * Eigen::AngleAxisd(0.06, Eigen::Vector3d::UnitZ()));
  CHECK_FALSE(scenario.within_tolerance(1, turned));
  const auto [trans, rot] = scenario.task_errors(1, turned);
  CHECK(trans == 0.0);
  CHECK(rot == doctest::Approx(0.06));
}

}  // namespace
}  // namespace rmpta
