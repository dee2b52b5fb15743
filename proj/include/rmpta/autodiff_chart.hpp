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

// Builds a Chart from a coordinate functor, with the Jacobian obtained by
// forward-mode automatic differentiation along retract().
//
// A coordinate functor provides `static constexpr int kDim` and
//
//   template <class S>
//   Eigen::Matrix<S, kDim, 1> operator()(const Eigen::Matrix<S, 3, 1>& position,
//                                        const Eigen::Matrix<S, 3, 3>& rotation) const;

#include <unsupported/Eigen/AutoDiff>

#include "rmpta/geometry.hpp"

namespace rmpta {

template <class Coordinates>
Eigen::MatrixXd autodiff_jacobian(const Coordinates& coords, const Pose& pose) {
  using Ad = Eigen::AutoDiffScalar<Vector6d>;
  Eigen::Matrix<Ad, 3, 1> p;
  for (int i = 0; i < 3; ++i) p(i) = Ad(pose.position(i), 6, i);

  // R0 * (I + [d]x) agrees with R0 * exp([d]x) to first order, which is all the
  // derivative at d = 0 needs.
  Eigen::Matrix<Ad, 3, 3> hat;
  const Ad zero(0.0, Vector6d::Zero());
  const Ad dx(0.0, 6, 3), dy(0.0, 6, 4), dz(0.0, 6, 5);
  hat << zero, -dz, dy,  //
      dz, zero, -dx,     //
      -dy, dx, zero;
  const Eigen::Matrix3d r0 = pose.orientation.toRotationMatrix();
  Eigen::Matrix<Ad, 3, 3> rotation;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Ad acc(r0(i, j), Vector6d::Zero());
      for (int k = 0; k < 3; ++k) acc += r0(i, k) * hat(k, j);
      rotation(i, j) = acc;
    }
  }

  const auto x = coords(p, rotation);
  Eigen::MatrixXd jac(Coordinates::kDim, 6);
  for (int r = 0; r < Coordinates::kDim; ++r) {
    const Vector6d d = x(r).derivatives();
    jac.row(r) = d.transpose();
  }
  return jac;
}

template <class Coordinates>
Chart make_chart(Coordinates coords) {
  auto map = [coords](const Pose& pose) -> Eigen::VectorXd {
    const Eigen::Vector3d p = pose.position;
    const Eigen::Matrix3d r = pose.orientation.toRotationMatrix();
    return coords(p, r);
  };
  auto jac = [coords](const Pose& pose) -> Eigen::MatrixXd {
    return autodiff_jacobian(coords, pose);
  };
  return Chart(Coordinates::kDim, std::move(map), std::move(jac));
}

}  // namespace rmpta
