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

#include "rmpta/rmp.hpp"

namespace rmpta {

Eigen::VectorXd PolicySpec::difference(const Eigen::VectorXd& x,
                                       const Eigen::VectorXd& reference) const {
  if (x.size() != reference.size()) throw DimensionMismatch("difference: size mismatch");
  Eigen::VectorXd d = x - reference;
  if (period.size() == d.size()) {
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      if (period(i) > 0.0) d(i) = wrap_periodic(d(i), period(i));
    }
  }
  return d;
}

Policy evaluate(const PolicySpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& xdot) {
  const int d = spec.dim();
  if (x.size() != d || xdot.size() != d) {
    throw DimensionMismatch("evaluate: state dimension does not match " + spec.name);
  }
  Policy out;
  out.f = -spec.gradient(x) - spec.damping * xdot;
  out.metric = spec.metric(x, xdot);
  if (out.f.size() != d || out.metric.rows() != d || out.metric.cols() != d) {
    throw DimensionMismatch("evaluate: " + spec.name + " returned a mis-shaped policy");
  }
  return out;
}

Policy evaluate_pulled(const PolicySpec& spec, const Pose& pose, const Twist& twist) {
  const Eigen::MatrixXd jac = spec.chart.jacobian(pose);
  const Eigen::VectorXd x = spec.chart.apply(pose);
  const Eigen::VectorXd xdot = jac * twist.stacked();
  return pullback(evaluate(spec, x, xdot), jac);
}

}  // namespace rmpta
