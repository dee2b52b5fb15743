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

#include "rmpta/adaptation.hpp"

#include <algorithm>
#include <numeric>

namespace rmpta {
namespace {

double metric_norm(const Eigen::VectorXd& v, const Eigen::MatrixXd& metric) {
  return std::sqrt(std::max(0.0, v.dot(metric * v)));
}

// True when a metric norm is indistinguishable from zero at the scale of the
// vector and metric involved.
bool negligible(double norm_a, const Eigen::VectorXd& v, const Eigen::MatrixXd& metric) {
  const double scale = v.norm() * std::sqrt(metric.norm());
  return norm_a <= kGradientEpsilon * std::max(1.0, scale);
}

}  // namespace

void AdaptationConfig::validate() const {
  if (gain.rows() != gain.cols() || gain.rows() == 0) throw BadParams("K must be square");
  if ((gain - gain.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, gain.norm())) {
    throw BadParams("K must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gain);
  if (es.eigenvalues().minCoeff() <= 0.0) throw BadParams("K must be positive-definite");
  if (!(alpha_step > 0.0 && alpha_step <= 1.0)) throw BadParams("alpha_step must be in (0, 1]");
  if (!(gamma_tolerance >= 0.0)) throw BadParams("gamma_tolerance must be non-negative");
  if (!(update_rate > 0.0)) throw BadParams("update_rate must be positive");
}

OperatorInput OperatorInput::ingest(const Eigen::VectorXd& raw, double time) {
  OperatorInput out{raw, time};
  if (!raw.allFinite()) {
    out.u.setZero();
    return out;
  }
  // The slack keeps ingestion idempotent on already-normalized vectors.
  const double n = raw.norm();
  if (n > 1.0 + kUnitSlack) out.u /= n;
  return out;
}

HumanView human_view(const PolicySpec& spec, const Pose& pose, const Twist& twist) {
  if (spec.human_map.rows() != spec.dim()) {
    throw DimensionMismatch("human_view: " + spec.name + " has no human-coordinate map");
  }
  const Eigen::MatrixXd jac = spec.chart.jacobian(pose);
  const Eigen::VectorXd x = spec.chart.apply(pose);
  const Policy local = evaluate(spec, x, jac * twist.stacked());
  const Eigen::MatrixXd& map = spec.human_map;

  HumanView view;
  view.policy = pullback(local, map);
  view.gradient = map.transpose() * spec.gradient(x);
  view.displacement = pseudo_inverse(map) * spec.difference(x, spec.optimum);
  return view;
}

Eigen::VectorXd desired_gradient(const Eigen::VectorXd& hdot, const OperatorInput& input,
                                 const AdaptationConfig& cfg) {
  if (hdot.size() != input.u.size() || cfg.gain.rows() != hdot.size() ||
      cfg.gain.cols() != hdot.size()) {
    throw DimensionMismatch("desired_gradient: human-manifold dimensions disagree");
  }
  return hdot + cfg.gain * input.u;
}

double conditional_likelihood(const Eigen::VectorXd& neg_desired, const Eigen::VectorXd& gradient,
                              const Eigen::MatrixXd& metric) {
  if (neg_desired.size() != gradient.size() || metric.rows() != gradient.size()) {
    throw DimensionMismatch("conditional_likelihood: dimensions disagree");
  }
  if (neg_desired.norm() < kGradientEpsilon || gradient.norm() < kGradientEpsilon) return 0.5;
  const Eigen::VectorXd desired = -neg_desired;
  const double nd = metric_norm(desired, metric);
  const double ng = metric_norm(gradient, metric);
  if (negligible(nd, desired, metric) || negligible(ng, gradient, metric)) return 0.5;
  const double cos_sim = std::clamp(desired.dot(metric * gradient) / (nd * ng), -1.0, 1.0);
  return 0.5 * (1.0 + cos_sim);
}

double policy_prior(const Eigen::MatrixXd& metric, const Eigen::VectorXd& displacement,
                    double input_norm) {
  if (metric.rows() != displacement.size()) throw DimensionMismatch("policy_prior: dimensions disagree");
  const auto decomposition = spectral(metric);
  const double total = decomposition.eigenvalues.sum();
  // A zero metric carries no region of attraction; treat it as uninformative.
  if (!(total > 1e-12)) return 1.0;
  const double shrink = 1.0 - std::clamp(input_norm, 0.0, 1.0);
  double prior = 0.0;
  for (Eigen::Index j = 0; j < decomposition.eigenvalues.size(); ++j) {
    const double lambda = decomposition.eigenvalues(j);
    if (lambda <= 1e-12) continue;
    const double d = shrink * decomposition.eigenvectors.col(j).dot(displacement);
    prior += std::exp(-d * d / (2.0 * lambda)) * lambda / total;
  }
  return std::clamp(prior, 0.0, 1.0);
}

double policy_prior(const PolicySpec& spec, const Pose& pose, const Twist& twist,
                    const OperatorInput& input) {
  const HumanView view = human_view(spec, pose, twist);
  return policy_prior(view.policy.metric, view.displacement, input.u.norm());
}

LikelihoodReport policy_likelihoods(std::span<const HumanView> views, const Eigen::VectorXd& hdot,
                                    const OperatorInput& input, const AdaptationConfig& cfg) {
  if (views.empty()) throw EmptyList("policy_likelihoods: no mission policies");
  const Eigen::Index n = static_cast<Eigen::Index>(views.size());
  LikelihoodReport report;
  report.desired_gradient = desired_gradient(hdot, input, cfg);
  report.conditional.resize(n);
  report.prior.resize(n);
  const double input_norm = input.u.norm();
  for (Eigen::Index i = 0; i < n; ++i) {
    const HumanView& v = views[static_cast<std::size_t>(i)];
    report.conditional(i) =
        conditional_likelihood(report.desired_gradient, v.gradient, v.policy.metric);
    report.prior(i) = policy_prior(v.policy.metric, v.displacement, input_norm);
  }
  report.combined = report.conditional.cwiseProduct(report.prior);
  return report;
}

ScaleVector policy_scaling(std::span<const HumanView> views, const Eigen::VectorXd& likelihood,
                           const ScaleVector& alpha, const AdaptationConfig& cfg) {
  const std::size_t n = views.size();
  if (likelihood.size() != static_cast<Eigen::Index>(n) || alpha.size() != static_cast<int>(n)) {
    throw DimensionMismatch("policy_scaling: policies, likelihoods and scales are not aligned");
  }
  if (n == 0) return alpha;
  const Eigen::Index dim = views.front().gradient.size();
  for (const auto& v : views) {
    if (v.gradient.size() != dim || v.policy.metric.rows() != dim) {
      throw DimensionMismatch("policy_scaling: policies live in different dimensions");
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return likelihood(static_cast<Eigen::Index>(a)) > likelihood(static_cast<Eigen::Index>(b));
  });

  ScaleVector out = alpha;
  // Running sums of the cumulative policy: sum a_i A_i and sum a_i A_i grad_i.
  Eigen::MatrixXd metric_sum = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd weighted_gradient = Eigen::VectorXd::Zero(dim);

  for (const std::size_t j : order) {
    const HumanView& v = views[j];
    const auto idx = static_cast<Eigen::Index>(j);

    double gamma = 0.0;
    if (metric_sum.cwiseAbs().maxCoeff() > 1e-12) {
      const Eigen::VectorXd cumulative = pseudo_inverse(metric_sum) * weighted_gradient;
      const double nj = metric_norm(v.gradient, metric_sum);
      const double nc = metric_norm(cumulative, metric_sum);
      if (negligible(nj, v.gradient, metric_sum)) {
        gamma = 0.0;  // acts outside everything decided so far
      } else if (negligible(nc, cumulative, metric_sum)) {
        gamma = 1.0;  // would pull already-satisfied features away from their optimum
      } else {
        gamma = v.gradient.dot(metric_sum * cumulative) / (nj * nc);
      }
    }

    double a = out.alpha(idx);
    a += std::abs(gamma) <= cfg.gamma_tolerance ? cfg.alpha_step : -cfg.alpha_step;
    a = std::clamp(a, 0.0, 1.0);
    out.alpha(idx) = a;

    metric_sum += a * v.policy.metric;
    weighted_gradient += a * v.policy.metric * v.gradient;
  }
  return out;
}

AdaptationResult adaptation_step(const Pose& pose, const Twist& twist, const OperatorInput& input,
                                 std::span<const PolicySpec> mission, const Chart& human_chart,
                                 const ScaleVector& alpha, const AdaptationConfig& cfg) {
  std::vector<HumanView> views;
  views.reserve(mission.size());
  for (const auto& spec : mission) views.push_back(human_view(spec, pose, twist));
  const Eigen::VectorXd hdot = human_chart.velocity(pose, twist);
  AdaptationResult result;
  result.report = policy_likelihoods(views, hdot, input, cfg);
  if (cfg.hold_without_input && input.u.squaredNorm() == 0.0) {
    result.alpha = alpha;
  } else {
    result.alpha = policy_scaling(views, result.report.combined, alpha, cfg);
  }
  return result;
}

}  // namespace rmpta
