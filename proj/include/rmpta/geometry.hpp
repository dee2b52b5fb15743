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

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cmath>
#include <functional>
#include <numbers>

#include "rmpta/errors.hpp"

namespace rmpta {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

// End-effector pose. The quaternion is normalized on construction and by every
// operation in this module that produces a Pose.
struct Pose {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();

  Pose() = default;
  Pose(const Eigen::Vector3d& p, const Eigen::Quaterniond& q)
      : position(p), orientation(q.normalized()) {}
};

// Linear velocity is expressed in the world frame, angular velocity in the
// body frame. Charts differentiate along exactly this parametrization, see
// retract().
struct Twist {
  Eigen::Vector3d linear = Eigen::Vector3d::Zero();
  Eigen::Vector3d angular = Eigen::Vector3d::Zero();

  Twist() = default;
  Twist(const Eigen::Vector3d& v, const Eigen::Vector3d& w) : linear(v), angular(w) {}

  [[nodiscard]] Vector6d stacked() const {
    Vector6d out;
    out << linear, angular;
    return out;
  }
  [[nodiscard]] static Twist from_stacked(const Vector6d& v) {
    return {v.head<3>(), v.tail<3>()};
  }
  [[nodiscard]] bool finite() const { return linear.allFinite() && angular.allFinite(); }
};

/// Wraps an angle to (-pi, pi].
[[nodiscard]] double wrap_angle(double angle);

/// Wraps `value` to (-period/2, period/2].
[[nodiscard]] double wrap_periodic(double value, double period);

[[nodiscard]] Eigen::Quaterniond quat_exp(const Eigen::Vector3d& rotation_vector);
[[nodiscard]] Eigen::Vector3d quat_log(const Eigen::Quaterniond& q);

/// Moves a pose along a twist-shaped increment: (p + d_lin, q * exp(d_ang)).
[[nodiscard]] Pose retract(const Pose& pose, const Vector6d& delta);

/// Geodesic angle between two rotations, in [0, pi]. Sign of either quaternion
/// is irrelevant.
[[nodiscard]] double orientation_error(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b);

// A differentiable map from the pose manifold to local coordinates on some
// task or input manifold. The Jacobian is taken with respect to the 6-D
// increment of retract(), i.e. world-frame linear and body-frame angular.
class Chart {
 public:
  using Map = std::function<Eigen::VectorXd(const Pose&)>;
  using Jacobian = std::function<Eigen::MatrixXd(const Pose&)>;

  Chart(int dim, Map map, Jacobian jacobian)
      : dim_(dim), map_(std::move(map)), jacobian_(std::move(jacobian)) {}

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] Eigen::VectorXd apply(const Pose& pose) const { return map_(pose); }
  [[nodiscard]] Eigen::MatrixXd jacobian(const Pose& pose) const { return jacobian_(pose); }
  [[nodiscard]] Eigen::VectorXd velocity(const Pose& pose, const Twist& twist) const {
    return jacobian_(pose) * twist.stacked();
  }

 private:
  int dim_;
  Map map_;
  Jacobian jacobian_;
};

/// Position plus body-frame rotation vector relative to `reference`.
[[nodiscard]] Chart make_identity_chart(
    const Eigen::Quaterniond& reference = Eigen::Quaterniond::Identity());

// Quantities of a pose relative to a cylinder, all evaluated at the foot point
// of the pose on the cylinder axis.
template <class S>
struct CylinderFrame {
  S height;      // along the axis
  S angle;       // azimuth from the reference direction, (-pi, pi]
  S arc;         // radius * angle
  S distance;    // radial distance minus radius
  S tool_roll;   // signed rotation of the tool "up" axis about the outward normal
  Eigen::Matrix<S, 2, 1> tilt;  // tool-axis misalignment with the inward normal
};

// Cylinder given by an axis line and a radius. Output coordinates of apply()
// are (height, arc length, tool roll). The azimuth branch cut sits opposite
// the reference direction.
class CylinderChart {
 public:
  // Threshold on the radial distance below which a pose is on the axis.
  static constexpr double kSingularRadius = 1e-6;

  CylinderChart(const Eigen::Vector3d& origin, const Eigen::Vector3d& axis, double radius,
                const Eigen::Vector3d& reference = Eigen::Vector3d::UnitX());

  [[nodiscard]] const Eigen::Vector3d& origin() const { return origin_; }
  [[nodiscard]] const Eigen::Vector3d& axis() const { return axis_; }
  [[nodiscard]] const Eigen::Vector3d& reference() const { return reference_; }
  [[nodiscard]] double radius() const { return radius_; }
  [[nodiscard]] double arc_period() const { return 2.0 * std::numbers::pi * radius_; }

  template <class S>
  [[nodiscard]] CylinderFrame<S> frame(const Eigen::Matrix<S, 3, 1>& p,
                                       const Eigen::Matrix<S, 3, 3>& rotation) const;

  [[nodiscard]] Eigen::Vector3d apply(const Pose& pose) const;
  [[nodiscard]] Eigen::MatrixXd jacobian(const Pose& pose) const;

  /// Outward unit normal at surface coordinates (height, arc).
  [[nodiscard]] Eigen::Vector3d normal(double arc) const;
  /// Point at `standoff` from the surface along the outward normal.
  [[nodiscard]] Eigen::Vector3d surface_point(double height, double arc, double standoff) const;
  /// Tool pointing along the inward normal with the requested roll.
  [[nodiscard]] Eigen::Quaterniond surface_orientation(double arc, double roll) const;

 private:
  Eigen::Vector3d origin_;
  Eigen::Vector3d axis_;
  Eigen::Vector3d reference_;
  double radius_;
};

// Charts over a cylinder. Tool axis is body z, tool "up" is body y.
[[nodiscard]] Chart make_surface_chart(const CylinderChart& cylinder);   // (height, arc, roll)
[[nodiscard]] Chart make_position_chart(const CylinderChart& cylinder);  // (height, arc, distance)
[[nodiscard]] Chart make_distance_chart(const CylinderChart& cylinder);  // (distance)
[[nodiscard]] Chart make_roll_chart(const CylinderChart& cylinder);      // (roll)
[[nodiscard]] Chart make_tilt_chart(const CylinderChart& cylinder);      // 2-D tilt vector

namespace detail {

inline double value_of(double x) { return x; }
template <class S>
double value_of(const S& x) {
  return x.value();
}

template <class S>
Eigen::Matrix<S, 3, 1> cross(const Eigen::Matrix<S, 3, 1>& a, const Eigen::Matrix<S, 3, 1>& b) {
  return {a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0)};
}

// angle / sin(angle) from sin^2 and cos, smooth through zero.
template <class S>
S angle_over_sine(const S& sin_sq, const S& cosine) {
  using std::atan2;
  using std::sqrt;
  if (value_of(sin_sq) < 1e-12 && value_of(cosine) > 0.0) {
    return S(1.0) + sin_sq / S(6.0) + S(3.0 / 40.0) * sin_sq * sin_sq;
  }
  const S sine = sqrt(sin_sq);
  return atan2(sine, cosine) / sine;
}

}  // namespace detail

template <class S>
CylinderFrame<S> CylinderChart::frame(const Eigen::Matrix<S, 3, 1>& p,
                                      const Eigen::Matrix<S, 3, 3>& rotation) const {
  using std::atan2;
  using std::sqrt;
  using Vec = Eigen::Matrix<S, 3, 1>;
  const Vec axis = axis_.cast<S>();
  const Vec reference = reference_.cast<S>();
  const Vec side = detail::cross<S>(axis, reference);

  const Vec rel = p - origin_.cast<S>();
  CylinderFrame<S> out;
  out.height = rel.dot(axis);
  const Vec radial = rel - out.height * axis;
  const S rho_sq = radial.squaredNorm();
  if (!(detail::value_of(rho_sq) >= kSingularRadius * kSingularRadius)) {
    throw SingularPose("pose lies on the cylinder axis");
  }
  const S rho = sqrt(rho_sq);
  out.angle = atan2(radial.dot(side), radial.dot(reference));
  if (detail::value_of(out.angle) <= -std::numbers::pi) out.angle += S(2.0 * std::numbers::pi);
  out.arc = S(radius_) * out.angle;
  out.distance = rho - S(radius_);

  const Vec normal = radial / rho;
  const Vec tangent = detail::cross<S>(axis, normal);
  const Vec tool_axis = rotation.col(2);
  const Vec tool_up = rotation.col(1);

  out.tool_roll = atan2(-tool_up.dot(tangent), tool_up.dot(axis));

  const S along_tangent = tool_axis.dot(tangent);
  const S along_axis = tool_axis.dot(axis);
  const S inward = -tool_axis.dot(normal);
  const S sin_sq = along_tangent * along_tangent + along_axis * along_axis;
  const S scale = detail::angle_over_sine(sin_sq, inward);
  out.tilt << scale * along_tangent, scale * along_axis;
  return out;
}

}  // namespace rmpta
