#pragma once

#include <Eigen/Core>

namespace deltakit {

/// Rotation + translation (mm), the semantic form of a homogeneous transform.
struct RigidTransform {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static RigidTransform identity();
  static RigidTransform translate(const Eigen::Vector3d& t);
  static RigidTransform rotate_x(double rad);
  static RigidTransform rotate_y(double rad);
  static RigidTransform rotate_z(double rad);

  RigidTransform operator*(const RigidTransform& rhs) const;
  Eigen::Vector3d apply(const Eigen::Vector3d& p) const;

  /// max(‖RᵀR − I‖∞, |det R − 1|); 0 for a proper rotation.
  double orthonormality_defect() const;
};

}  // namespace deltakit
