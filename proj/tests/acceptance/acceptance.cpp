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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rmpta/metrics.hpp"
#include "rmpta/operators.hpp"
#include "rmpta/rmp.hpp"
#include "rmpta/service.hpp"
#include "rmpta/sim.hpp"
#include "rmpta/trace.hpp"
#include "support.hpp"
#include "wire_client.hpp"

namespace rmpta {
namespace {

using testing::random_psd;
using testing::random_vector;
using testing::uniform;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Accumulates sub-checks; the first failure is kept in the detail.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && pass_) {
      pass_ = false;
      failure_ = what;
    }
  }
  [[nodiscard]] Outcome result(const std::string& summary) const {
    return {pass_, pass_ ? summary : failure_};
  }

 private:
  bool pass_ = true;
  std::string failure_;
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const double x : values) v(i++) = x;
  return v;
}

double distance_to_surface(const Scenario& scenario, const Pose& pose) {
  return scenario.cylinder().frame<double>(pose.position, pose.orientation.toRotationMatrix()).distance;
}

Outcome algebra() {
  Checks c;
  std::mt19937 rng(101);
  double identity_err = 0.0, neutral_err = 0.0, perm_err = 0.0;
  for (int i = 0; i < 200; ++i) {
    const int dim = 1 + i % 6;
    const Policy p{random_vector(rng, dim), random_psd(rng, dim) + 0.1 * Eigen::MatrixXd::Identity(dim, dim)};
    const Policy q = pullback(p, Eigen::MatrixXd(Eigen::MatrixXd::Identity(dim, dim)));
    identity_err = std::max({identity_err, (q.f - p.f).cwiseAbs().maxCoeff() / std::max(1.0, p.f.norm()),
                             (q.metric - p.metric).cwiseAbs().maxCoeff() / std::max(1.0, p.metric.norm())});

    const Policy z{random_vector(rng, dim, 10.0), Eigen::MatrixXd::Zero(dim, dim)};
    const Policy s = rmp_sum(std::vector<Policy>{p, z});
    neutral_err = std::max({neutral_err, (s.f - p.f).norm() / std::max(1.0, p.f.norm()),
                            (s.metric - p.metric).norm()});

    std::vector<Policy> many;
    for (int k = 0; k < 5; ++k) many.push_back({random_vector(rng, dim), random_psd(rng, dim, 1 + k % dim)});
    const Policy ref = rmp_sum(many);
    std::shuffle(many.begin(), many.end(), rng);
    const Policy shuffled = rmp_sum(many);
    perm_err = std::max({perm_err, (ref.f - shuffled.f).norm() / std::max(1.0, ref.f.norm()),
                         (ref.metric - shuffled.metric).norm() / std::max(1.0, ref.metric.norm())});
  }
  c.expect(identity_err <= 1e-12, fmt("identity pullback error %.3g", identity_err));
  c.expect(neutral_err <= 1e-8, fmt("zero-metric neutrality error %.3g", neutral_err));
  c.expect(perm_err <= 1e-8, fmt("permutation error %.3g", perm_err));

  const Policy one{vec({3}), Eigen::MatrixXd::Constant(1, 1, 2.0)};
  const Policy pulled = pullback(one, Eigen::MatrixXd(Eigen::RowVector2d(1, 0)));
  c.expect(pulled.metric == Eigen::Matrix2d(Eigen::Vector2d(2, 0).asDiagonal()).eval().cast<double>() &&
               pulled.f == vec({3, 0}),
           "hand pullback example");
  const Policy a{vec({2, 0}), Eigen::Matrix2d(Eigen::Vector2d(1, 0).asDiagonal())};
  const Policy b{vec({0, 4}), Eigen::Matrix2d(Eigen::Vector2d(0, 1).asDiagonal())};
  const Policy sum = rmp_sum(std::vector<Policy>{a, b});
  c.expect(sum.f == vec({2, 4}) && sum.metric == Eigen::MatrixXd::Identity(2, 2), "hand sum example");
  return c.result(fmt("identity %.1e, neutrality %.1e, permutation %.1e, hand examples exact", identity_err,
                      neutral_err, perm_err));
}

Outcome gradients() {
  Checks c;
  const Scenario scenario(reference_params());
  std::vector<PolicySpec> all = scenario.mission();
  all.insert(all.end(), scenario.safety().begin(), scenario.safety().end());
  std::mt19937 rng(102);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Pose pose = testing::random_surface_pose(rng, scenario.cylinder(), 0.8);
    for (const auto& spec : all) {
      const Eigen::VectorXd x = spec.chart.apply(pose);
      const double err = testing::relative_error(spec.gradient(x), testing::fd_gradient(spec.potential, x));
      worst = std::max(worst, err);
      c.expect(err <= 1e-5, fmt("%s gradient error %.3g at state %d", spec.name.c_str(), err, i));
    }
  }
  return c.result(fmt("%zu potentials x 50 states, worst relative error %.2e", all.size(), worst));
}

Outcome likelihoods() {
  Checks c;
  std::mt19937 rng(103);
  int out_of_range = 0;
  for (int i = 0; i < 10000; ++i) {
    const int dim = 1 + i % 3;
    const Eigen::MatrixXd metric = random_psd(rng, dim, 1 + i % dim);
    const double cond = conditional_likelihood(random_vector(rng, dim), random_vector(rng, dim), metric);
    const double prior = policy_prior(metric, random_vector(rng, dim, 3.0), uniform(rng, 0.0, 1.0));
    for (const double v : {cond, prior, cond * prior}) out_of_range += (v < 0.0 || v > 1.0) ? 1 : 0;
  }
  c.expect(out_of_range == 0, fmt("%d values outside [0, 1]", out_of_range));

  const double cond = conditional_likelihood(vec({-1, 0}), vec({1, 1}), Eigen::Matrix2d(Eigen::Vector2d(4, 1).asDiagonal()));
  c.expect(std::abs(cond - 0.94721) <= 1e-5, fmt("conditional %.6f", cond));
  const double prior = policy_prior(Eigen::Matrix2d(Eigen::Vector2d(2, 1).asDiagonal()), vec({1, 1}), 0.0);
  c.expect(std::abs(prior - 0.72138) <= 1e-5, fmt("prior %.6f", prior));

  AdaptationConfig cfg;
  cfg.alpha_step = 0.1;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
  auto view = [&](const Eigen::VectorXd& g) { return HumanView{{Eigen::VectorXd::Zero(2), id}, g, Eigen::VectorXd::Zero(2)}; };
  const ScaleVector half = ScaleVector::uniform(2, 0.5);
  const std::vector<HumanView> orthogonal{view(vec({1, 0})), view(vec({0, 1}))};
  const std::vector<HumanView> aligned{view(vec({1, 0})), view(vec({1, 0}))};
  const Eigen::VectorXd t1 = policy_scaling(orthogonal, vec({0.9, 0.4}), half, cfg).alpha;
  const Eigen::VectorXd t2 = policy_scaling(aligned, vec({0.9, 0.4}), half, cfg).alpha;
  c.expect((t1 - vec({0.6, 0.6})).cwiseAbs().maxCoeff() <= 1e-5, fmt("orthogonal trace (%.6f, %.6f)", t1(0), t1(1)));
  c.expect((t2 - vec({0.6, 0.4})).cwiseAbs().maxCoeff() <= 1e-5, fmt("aligned trace (%.6f, %.6f)", t2(0), t2(1)));
  return c.result(fmt("1e4 samples in range; conditional %.5f, prior %.5f, traces (%.1f,%.1f)/(%.1f,%.1f)", cond,
                      prior, t1(0), t1(1), t2(0), t2(1)));
}

Outcome convergence() {
  Checks c;
  const ScenarioParams base = reference_params();
  const int budget = static_cast<int>(std::ceil(1.0 / base.adaptation.alpha_step)) + 10;
  int worst_steps = 0;
  for (int task = 0; task < static_cast<int>(base.targets.size()); ++task) {
    for (const RollMode mode : {RollMode::kHorizontal, RollMode::kVertical}) {
      ScenarioParams params = base;
      params.targets[static_cast<std::size_t>(task)].mode = mode;
      const Scenario scenario(params);
      EpisodeRunner runner(scenario, make_trace_header(scenario, 0, "perfect"));
      OperatorSession op(PerfectOperator{}, scenario, 0);
      const int pos = scenario.position_policy(task);
      const int rot = scenario.rotation_policy(mode);
      int reached = -1;
      double competing = 1.0;  // largest competing position scale when the target converged
      for (int step = 1; step <= budget && reached < 0; ++step) {
        runner.step(op.next(runner.state(), task));
        const auto& a = runner.alpha().alpha;
        if (a(pos) >= 0.95 && a(rot) >= 0.95) {
          reached = step;
          competing = 0.0;
          for (int j = 0; j < scenario.task_count(); ++j) {
            if (j != task) competing = std::max(competing, a(scenario.position_policy(j)));
          }
        }
      }
      const std::string label = fmt("target %d %s", task + 1, mode == RollMode::kHorizontal ? "horizontal" : "vertical");
      c.expect(reached > 0, label + " did not reach 0.95");
      c.expect(competing == 0.0, fmt("%s competing scale %.3f", label.c_str(), competing));
      worst_steps = std::max(worst_steps, reached);
    }
  }
  return c.result(fmt("12 cases, slowest reached 0.95 after %d of %d steps with every competitor at 0", worst_steps, budget));
}

Outcome optimality() {
  Checks c;
  const Scenario scenario(reference_params());
  double worst_residual = 0.0, worst_speed = 0.0;
  for (int task = 0; task < scenario.task_count(); ++task) {
    EpisodeRunner runner(scenario, make_trace_header(scenario, 0, "perfect"));
    OperatorSession perfect(PerfectOperator{}, scenario, 0);
    const int pos = scenario.position_policy(task);
    const int rot = scenario.rotation_policy_for_task(task);
    for (int k = 0; k < 1000; ++k) {
      runner.step(perfect.next(runner.state(), task));
      const auto& a = runner.alpha().alpha;
      if (a(pos) >= 0.95 && a(rot) >= 0.95 && scenario.within_tolerance(task, runner.state().pose)) break;
    }
    for (int k = 0; k < 1000; ++k) runner.step(OperatorInput::zero(scenario.human_dim(), 0.0));
    const double residual = optimality_residual(runner.state(), scenario, runner.alpha());
    const double speed = runner.state().twist.linear.norm();
    worst_residual = std::max(worst_residual, residual);
    worst_speed = std::max(worst_speed, speed);
    c.expect(residual <= 1e-3, fmt("target %d residual %.3g", task + 1, residual));
    c.expect(speed <= 1e-3, fmt("target %d final speed %.3g", task + 1, speed));
  }
  return c.result(fmt("6 targets, 10 s idle after convergence: residual <= %.1e, speed <= %.1e m/s", worst_residual,
                      worst_speed));
}

Outcome task_completion() {
  Checks c;
  const Scenario scenario(reference_params());
  const EpisodeTrace trace = run_episode(scenario, PerfectOperator{}, 0);
  const EpisodeMetrics m = compute_metrics(trace);
  double worst_trans = 0.0, worst_rot = 0.0;
  for (const auto& t : m.tasks) {
    c.expect(t.completion.has_value(), fmt("target %d not completed", t.task + 1));
    if (t.translation_error) {
      worst_trans = std::max(worst_trans, *t.translation_error);
      worst_rot = std::max(worst_rot, *t.rotation_error);
    }
  }
  c.expect(worst_trans <= 0.05 && worst_rot <= 3.0 * std::numbers::pi / 180.0, "pose error above tolerance");
  double closest = 1e9;
  for (const auto& r : trace.records) closest = std::min(closest, distance_to_surface(scenario, r.pose));
  const double floor = scenario.params().d_safe - 0.01;
  c.expect(closest >= floor, fmt("closest approach %.4f m below %.4f m", closest, floor));
  return c.result(fmt("6/6 targets in %.1f s simulated, errors <= %.4f m / %.4f rad, closest approach %.4f m",
                      trace.records.back().t, worst_trans, worst_rot, closest));
}

// Converged: every task completes and its position scale reaches the threshold while it is active.
bool converged(const EpisodeTrace& trace) {
  const EpisodeMetrics m = compute_metrics(trace);
  for (const auto& t : m.tasks) {
    if (!t.completion) return false;
    const auto interval = task_interval(trace, t.task);
    const int pos = trace.header.tasks[static_cast<std::size_t>(t.task)].position_policy;
    bool reached = false;
    for (std::size_t k = interval->begin; k < interval->end && !reached; ++k) {
      reached = trace.records[k].alpha(pos) >= trace.header.convergence_threshold;
    }
    if (!reached) return false;
  }
  return true;
}

Outcome robustness() {
  const Scenario scenario(reference_params());
  constexpr int kSeeds = 100;
  std::vector<std::future<bool>> jobs;
  std::vector<bool> ok(kSeeds, false);
  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int s = next++; s < kSeeds; s = next++) {
        try {
          ok[static_cast<std::size_t>(s)] = converged(run_episode(scenario, NoisyOperator{0.2}, static_cast<std::uint64_t>(s)));
        } catch (const Error&) {
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  const int count = static_cast<int>(std::count(ok.begin(), ok.end(), true));
  std::string failed;
  for (int s = 0; s < kSeeds; ++s) {
    if (!ok[static_cast<std::size_t>(s)]) failed += (failed.empty() ? "" : ",") + std::to_string(s);
  }
  return {count >= 95, fmt("%d/100 noisy episodes converged (need 95)", count) +
                           (failed.empty() ? "" : "; not converged: " + failed)};
}

std::string serialize(const EpisodeTrace& trace) {
  std::ostringstream out;
  write_trace(out, trace);
  return out.str();
}

Outcome determinism() {
  Checks c;
  const Scenario scenario(reference_params());
  for (const OperatorModel& model : {OperatorModel{PerfectOperator{}}, OperatorModel{NoisyOperator{0.2}}}) {
    for (const std::uint64_t seed : {0ULL, 7ULL}) {
      const EpisodeTrace a = run_episode(scenario, model, seed);
      const EpisodeTrace b = run_episode(scenario, model, seed);
      const std::string sa = serialize(a);
      c.expect(sa == serialize(b), "same-seed traces differ");
      std::istringstream in(sa);
      const EpisodeTrace persisted = read_trace(in);
      c.expect(serialize(persisted) == sa, "persisted trace does not reserialize identically");
      c.expect(summary_csv({compute_metrics(a)}) == summary_csv({compute_metrics(persisted)}),
               "metrics from the persisted trace differ");
    }
  }
  return c.result("perfect and noisy, 2 seeds each: traces bit-identical, persisted metrics identical");
}

Outcome loopback() {
  Checks c;
  const Scenario scenario(reference_params());
  const EpisodeTrace local = run_episode(scenario, PerfectOperator{}, 0);

  TeleopService service(scenario, {.lockstep = true});
  service.start();
  testing::WireClient client(service.port());
  client.hello("operator", "loopback");
  c.expect(client.read_until<InstructionFrame>().has_value(), "no instruction after hello");
  auto session = std::async(std::launch::async, [&] { return service.run_session(); });

  OperatorSession perfect(PerfectOperator{}, scenario, 0);
  while (const auto frame = client.read_until<StateFrame>()) {
    RobotState state;
    state.pose = array_pose(frame->pose);
    state.twist = Twist::from_stacked(Eigen::Map<const Vector6d>(frame->twist.data()));
    state.time = frame->t;
    const OperatorInput u = perfect.next(state, frame->active_target);
    client.input(u.u(0), u.u(1), u.u(2), std::llround(frame->t / scenario.dt()), frame->t);
  }
  const EpisodeTrace remote = session.get();

  const std::size_t n = std::min(local.records.size(), remote.records.size());
  const long length_gap = std::labs(static_cast<long>(local.records.size()) - static_cast<long>(remote.records.size()));
  c.expect(length_gap <= 1, fmt("trace lengths %zu vs %zu", local.records.size(), remote.records.size()));
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    worst = std::max(worst, (local.records[k].alpha - remote.records[k].alpha).cwiseAbs().maxCoeff());
  }
  const double step = scenario.adaptation().alpha_step;
  c.expect(worst <= step, fmt("alpha differs by %.3g at some tick", worst));
  return c.result(fmt("%zu ticks over the wire, max alpha difference %.2g (limit %.2f)", n, worst, step));
}

struct Criterion {
  const char* name;
  double limit_s;  // non-positive: no limit
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace rmpta

int main() {
  using namespace rmpta;
  const std::vector<Criterion> criteria{
      {"algebra", 5.0, algebra},
      {"gradients", 10.0, gradients},
      {"likelihoods", 0.0, likelihoods},
      {"convergence", 30.0, convergence},
      {"optimality", 0.0, optimality},
      {"task_completion", 60.0, task_completion},
      {"robustness", 0.0, robustness},
      {"determinism", 0.0, determinism},
      {"loopback", 0.0, loopback},
  };
  int failures = 0;
  for (const auto& cr : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = cr.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt("%.2f s", secs);
    if (cr.limit_s > 0.0) {
      timing += fmt(" of %.0f s", cr.limit_s);
      if (secs > cr.limit_s) {
        out.pass = false;
        out.detail += "; over the time limit";
      }
    }
    std::printf("%s %-16s %s (%s)\n", out.pass ? "PASS" : "FAIL", cr.name, out.detail.c_str(), timing.c_str());
    std::fflush(stdout);
    failures += out.pass ? 0 : 1;
  }
  std::printf("%s: %d of %zu criteria passed\n", failures == 0 ? "ACCEPTED" : "REJECTED",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
