#include "deltakit/transform.hpp"

#include <Eigen/LU>
#include <cmath>

namespace deltakit {

RigidTransform RigidTransform::identity() { return {}; }

RigidTransform RigidTransform::translate(const Eigen::Vector3d& t) {
  RigidTransform out;
  out.translation = t;
  return out;
}

RigidTransform RigidTransform::rotate_x(double rad) {
  RigidTransform out;
  const double c = std::cos(rad), s = std::sin(rad);
  out.rotation << 1, 0, 0, 0, c, -s, 0, s, c;
  return out;
}

RigidTransform RigidTransform::rotate_y(double rad) {
  RigidTransform out;
  const double c = std::cos(rad), s = std::sin(rad);
  out.rotation << c, 0, s, 0, 1, 0, -s, 0, c;
  return out;
}

RigidTransform RigidTransform::rotate_z(double rad) {
  RigidTransform out;
  const double c = std::cos(rad), s = std::sin(rad);
  out.rotation << c, -s, 0, s, c, 0, 0, 0, 1;
  return out;
}

RigidTransform RigidTransform::operator*(const RigidTransform& rhs) const {
  RigidTransform out;
  out.rotation = rotation * rhs.rotation;
  out.translation = rotation * rhs.translation + translation;
  return out;
}

Eigen::Vector3d RigidTransform::apply(const Eigen::Vector3d& p) const {
  return rotation * p + translation;
}

double RigidTransform::orthonormality_defect() const {
  const Eigen::Matrix3d gram =
      rotation.transpose() * rotation - Eigen::Matrix3d::Identity();
  return std::max(gram.cwiseAbs().maxCoeff(),
                  std::abs(rotation.determinant() - 1.0));
}

}  // namespace deltakit
