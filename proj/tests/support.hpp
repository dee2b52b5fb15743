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

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "rmpta/geometry.hpp"
#include "rmpta/rmp.hpp"
#include "rmpta/scenario.hpp"

namespace rmpta::testing {

inline Eigen::Vector3d random_unit(std::mt19937& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Vector3d v(n(rng), n(rng), n(rng));
  return v.normalized();
}

inline Eigen::Quaterniond random_rotation(std::mt19937& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return Eigen::Quaterniond(n(rng), n(rng), n(rng), n(rng)).normalized();
}

inline double uniform(std::mt19937& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Eigen::VectorXd random_vector(std::mt19937& rng, int dim, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = n(rng);
  return v;
}

inline Eigen::MatrixXd random_psd(std::mt19937& rng, int dim, int rank = -1) {
  const int r = rank < 0 ? dim : rank;
  Eigen::MatrixXd m(dim, r);
  for (int c = 0; c < r; ++c) m.col(c) = random_vector(rng, dim);
  return m * m.transpose();
}

// Pose near the reference cylinder, tool roughly facing the surface, away from the branch cut.
inline Pose random_surface_pose(std::mt19937& rng, const CylinderChart& cyl, double max_tilt = 1.0) {
  const double arc = uniform(rng, -2.5, 2.5) * cyl.radius();
  const double height = uniform(rng, -0.2, 1.2);
  const double standoff = uniform(rng, 0.02, 0.5);
  const double roll = uniform(rng, -3.0, 3.0);
  const Eigen::Quaterniond aligned = cyl.surface_orientation(arc, roll);
  const Eigen::Quaterniond tilt(Eigen::AngleAxisd(uniform(rng, 0.0, max_tilt), random_unit(rng)));
  return {cyl.surface_point(height, arc, standoff), aligned * tilt};
}

inline Twist random_twist(std::mt19937& rng, double scale = 0.5) {
  std::normal_distribution<double> n(0.0, scale);
  return {{n(rng), n(rng), n(rng)}, {n(rng), n(rng), n(rng)}};
}

// Central differences of a chart along the body twist parametrization. `wrap` maps raw
// coordinate differences into a continuous range.
inline Eigen::MatrixXd fd_jacobian(const Chart& chart, const Pose& pose,
                                   const std::function<Eigen::VectorXd(Eigen::VectorXd)>& wrap = {},
                                   double h = 1e-6) {
  Eigen::MatrixXd j(chart.dim(), 6);
  for (int k = 0; k < 6; ++k) {
    Vector6d d = Vector6d::Zero();
    d(k) = h;
    Eigen::VectorXd diff = chart.apply(retract(pose, d)) - chart.apply(retract(pose, -d));
    if (wrap) diff = wrap(diff);
    j.col(k) = diff / (2.0 * h);
  }
  return j;
}

inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double h = 1e-6) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd a = x, b = x;
    a(i) += h;
    b(i) -= h;
    g(i) = (f(a) - f(b)) / (2.0 * h);
  }
  return g;
}

inline double relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

}  // namespace rmpta::testing
