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

#include "rmpta/geometry.hpp"

#include <algorithm>

#include "rmpta/autodiff_chart.hpp"

namespace rmpta {
namespace {

constexpr double kPi = std::numbers::pi;

// Rotation vector of a rotation matrix, smooth at the identity.
template <class S>
Eigen::Matrix<S, 3, 1> rotation_log(const Eigen::Matrix<S, 3, 3>& r) {
  Eigen::Matrix<S, 3, 1> w(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  w *= S(0.5);
  const S cosine = (r(0, 0) + r(1, 1) + r(2, 2) - S(1.0)) * S(0.5);
  return detail::angle_over_sine<S>(w.squaredNorm(), cosine) * w;
}

struct IdentityCoordinates {
  static constexpr int kDim = 6;
  Eigen::Matrix3d reference_t;

  template <class S>
  Eigen::Matrix<S, 6, 1> operator()(const Eigen::Matrix<S, 3, 1>& p,
                                    const Eigen::Matrix<S, 3, 3>& r) const {
    const Eigen::Matrix<S, 3, 3> rel = reference_t.cast<S>() * r;
    Eigen::Matrix<S, 6, 1> out;
    out << p, rotation_log<S>(rel);
    return out;
  }
};

struct SurfaceCoordinates {
  static constexpr int kDim = 3;
  CylinderChart cylinder;

  template <class S>
  Eigen::Matrix<S, 3, 1> operator()(const Eigen::Matrix<S, 3, 1>& p,
                                    const Eigen::Matrix<S, 3, 3>& r) const {
    const auto f = cylinder.frame<S>(p, r);
    return {f.height, f.arc, f.tool_roll};
  }
};

struct PositionCoordinates {
  static constexpr int kDim = 3;
  CylinderChart cylinder;

  template <class S>
  Eigen::Matrix<S, 3, 1> operator()(const Eigen::Matrix<S, 3, 1>& p,
                                    const Eigen::Matrix<S, 3, 3>& r) const {
    const auto f = cylinder.frame<S>(p, r);
    return {f.height, f.arc, f.distance};
  }
};

struct DistanceCoordinates {
  static constexpr int kDim = 1;
  CylinderChart cylinder;

  template <class S>
  Eigen::Matrix<S, 1, 1> operator()(const Eigen::Matrix<S, 3, 1>& p,
                                    const Eigen::Matrix<S, 3, 3>& r) const {
    Eigen::Matrix<S, 1, 1> out;
    out(0) = cylinder.frame<S>(p, r).distance;
    return out;
  }
};

struct RollCoordinates {
  static constexpr int kDim = 1;
  CylinderChart cylinder;

  template <class S>
  Eigen::Matrix<S, 1, 1> operator()(const Eigen::Matrix<S, 3, 1>& p,
                                    const Eigen::Matrix<S, 3, 3>& r) const {
    Eigen::Matrix<S, 1, 1> out;
    out(0) = cylinder.frame<S>(p, r).tool_roll;
    return out;
  }
};

struct TiltCoordinates {
  static constexpr int kDim = 2;
  CylinderChart cylinder;

  template <class S>
  Eigen::Matrix<S, 2, 1> operator()(const Eigen::Matrix<S, 3, 1>& p,
                                    const Eigen::Matrix<S, 3, 3>& r) const {
    return cylinder.frame<S>(p, r).tilt;
  }
};

}  // namespace

double wrap_angle(double angle) { return wrap_periodic(angle, 2.0 * kPi); }

double wrap_periodic(double value, double period) {
  const double half = 0.5 * period;
  double out = std::fmod(value + half, period);
  if (out <= 0.0) out += period;
  return out - half;
}

Eigen::Quaterniond quat_exp(const Eigen::Vector3d& rotation_vector) {
  const double angle = rotation_vector.norm();
  if (angle < 1e-12) {
    return Eigen::Quaterniond(1.0, 0.5 * rotation_vector.x(), 0.5 * rotation_vector.y(),
                              0.5 * rotation_vector.z())
        .normalized();
  }
  return Eigen::Quaterniond(Eigen::AngleAxisd(angle, rotation_vector / angle));
}

Eigen::Vector3d quat_log(const Eigen::Quaterniond& q) {
  Eigen::Quaterniond u = q.normalized();
  if (u.w() < 0.0) u.coeffs() *= -1.0;
  const double sine = u.vec().norm();
  if (sine < 1e-12) return 2.0 * u.vec();
  return 2.0 * std::atan2(sine, u.w()) / sine * u.vec();
}

Pose retract(const Pose& pose, const Vector6d& delta) {
  return {pose.position + delta.head<3>(), pose.orientation * quat_exp(delta.tail<3>())};
}

double orientation_error(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b) {
  const Eigen::Quaterniond rel = a.normalized().conjugate() * b.normalized();
  return 2.0 * std::atan2(rel.vec().norm(), std::abs(rel.w()));
}

Chart make_identity_chart(const Eigen::Quaterniond& reference) {
  return make_chart(IdentityCoordinates{reference.normalized().toRotationMatrix().transpose()});
}

CylinderChart::CylinderChart(const Eigen::Vector3d& origin, const Eigen::Vector3d& axis,
                             double radius, const Eigen::Vector3d& reference)
    : origin_(origin), radius_(radius) {
  if (!(radius > 0.0)) throw BadParams("cylinder radius must be positive");
  if (axis.norm() < 1e-12) throw BadParams("cylinder axis must be non-zero");
  axis_ = axis.normalized();
  reference_ = reference - reference.dot(axis_) * axis_;
  if (reference_.norm() < 1e-9) throw BadParams("cylinder reference direction is parallel to the axis");
  reference_.normalize();
}

Eigen::Vector3d CylinderChart::apply(const Pose& pose) const {
  const Eigen::Vector3d p = pose.position;
  const Eigen::Matrix3d r = pose.orientation.toRotationMatrix();
  const auto f = frame<double>(p, r);
  return {f.height, f.arc, f.tool_roll};
}

Eigen::MatrixXd CylinderChart::jacobian(const Pose& pose) const {
  return autodiff_jacobian(SurfaceCoordinates{*this}, pose);
}

Eigen::Vector3d CylinderChart::normal(double arc) const {
  const double angle = arc / radius_;
  return std::cos(angle) * reference_ + std::sin(angle) * axis_.cross(reference_);
}

Eigen::Vector3d CylinderChart::surface_point(double height, double arc, double standoff) const {
  return origin_ + height * axis_ + (radius_ + standoff) * normal(arc);
}

Eigen::Quaterniond CylinderChart::surface_orientation(double arc, double roll) const {
  const Eigen::Vector3d n = normal(arc);
  const Eigen::Vector3d tangent = axis_.cross(n);
  Eigen::Matrix3d r;
  const Eigen::Vector3d tool_axis = -n;
  const Eigen::Vector3d tool_up = std::cos(roll) * axis_ - std::sin(roll) * tangent;
  r.col(0) = tool_up.cross(tool_axis);
  r.col(1) = tool_up;
  r.col(2) = tool_axis;
  return Eigen::Quaterniond(r).normalized();
}

Chart make_surface_chart(const CylinderChart& cylinder) {
  return make_chart(SurfaceCoordinates{cylinder});
}
Chart make_position_chart(const CylinderChart& cylinder) {
  return make_chart(PositionCoordinates{cylinder});
}
Chart make_distance_chart(const CylinderChart& cylinder) {
  return make_chart(DistanceCoordinates{cylinder});
}
Chart make_roll_chart(const CylinderChart& cylinder) {
  return make_chart(RollCoordinates{cylinder});
}
Chart make_tilt_chart(const CylinderChart& cylinder) {
  return make_chart(TiltCoordinates{cylinder});
}

}  // namespace rmpta
