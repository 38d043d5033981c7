#include "deltakit/kinematics.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <limits>
#include <string>

#include "deltakit/units.hpp"

namespace deltakit {

namespace {

// |n̂·ẑ| below this is singular: the slider gain 1/(n̂·ẑ) passes 1e6.
constexpr double kHorizontalLinkTol = 1e-6;

// Horizontal offset from slider joint to platform joint of leg i.
Vec3 horizontal_gap(const DeltaParams& p, const PlatformPose& pose, int leg) {
  const Vec3 u = p.rail_radial(leg);
  Vec3 g = pose + (p.platform_radius - p.base_radius) * u;
  g.z() = 0.0;
  return g;
}

double slider_height(const DeltaParams& p, const PlatformPose& pose, int leg) {
  const Vec3 g = horizontal_gap(p, pose, leg);
  const double disc = p.link_length * p.link_length - g.squaredNorm();
  if (disc < 0.0) {
    throw ReachabilityError("pose unreachable: leg " + std::to_string(leg + 1) +
                                " would need a link longer than " +
                                std::to_string(p.link_length) + " mm",
                            leg);
  }
  return pose.z() - std::sqrt(disc);
}

// Unit axis of leg i, slider joint -> platform joint.
Vec3 leg_axis(const DeltaParams& p, const PlatformPose& pose, int leg) {
  const Vec3 g = horizontal_gap(p, pose, leg);
  const double disc = p.link_length * p.link_length - g.squaredNorm();
  if (disc < 0.0) {
    throw ReachabilityError("pose unreachable on leg " + std::to_string(leg + 1),
                            leg);
  }
  return Vec3(g.x(), g.y(), std::sqrt(disc)) / p.link_length;
}

}  // namespace

JointPositions inverse_kinematics(const DeltaParams& params,
                                  const PlatformPose& pose) {
  if (!pose.allFinite()) throw DomainError("pose has non-finite components");
  JointPositions q{};
  for (int i = 0; i < 3; ++i) {
    q[static_cast<std::size_t>(i)] = slider_height(params, pose, i);
  }
  return q;
}

PlatformPose forward_kinematics(const DeltaParams& params,
                                const JointPositions& q) {
  // P is equidistant (L) from the three offset centers c_i = s_i − r_p·û_i;
  // classic trilateration in the frame spanned by the centers.
  const double L = params.link_length;
  std::array<Vec3, 3> c;
  for (int i = 0; i < 3; ++i) {
    c[static_cast<std::size_t>(i)] =
        (params.base_radius - params.platform_radius) * params.rail_radial(i) +
        q[static_cast<std::size_t>(i)] * Vec3::UnitZ();
  }

  const Vec3 d12 = c[1] - c[0];
  const double d = d12.norm();
  if (d < 1e-12) {
    throw SingularityError("sphere centers of legs 1 and 2 coincide");
  }
  const Vec3 ex = d12 / d;
  const Vec3 r13 = c[2] - c[0];
  const double i = ex.dot(r13);
  const Vec3 ey_raw = r13 - i * ex;
  const double ey_norm = ey_raw.norm();
  if (ey_norm < 1e-12) {
    throw SingularityError("sphere centers are collinear");
  }
  const Vec3 ey = ey_raw / ey_norm;
  const double j = ey.dot(r13);
  Vec3 ez = ex.cross(ey);

  const double x = d / 2.0;  // equal radii
  const double y = (i * i + j * j - 2.0 * i * x) / (2.0 * j);
  const double h2 = L * L - x * x - y * y;
  if (h2 < 0.0) {
    throw ReachabilityError("no platform position reaches all three sliders");
  }
  // Branch: platform above the sliders, matching inverse_kinematics.
  if (ez.z() < 0.0) ez = -ez;
  return c[0] + x * ex + y * ey + std::sqrt(h2) * ez;
}

Eigen::Matrix3d jacobian(const DeltaParams& params, const PlatformPose& pose) {
  Eigen::Matrix3d jac;
  for (int i = 0; i < 3; ++i) {
    const Vec3 n = leg_axis(params, pose, i);
    if (std::abs(n.z()) < kHorizontalLinkTol) {
      throw SingularityError("leg " + std::to_string(i + 1) +
                             " is horizontal; slider motion cannot follow");
    }
    jac.row(i) = n.transpose() / n.z();
  }
  return jac;
}

Eigen::Matrix3d leg_axis_matrix(const DeltaParams& params,
                                const PlatformPose& pose) {
  Eigen::Matrix3d axes;
  for (int i = 0; i < 3; ++i) {
    axes.row(i) = leg_axis(params, pose, i).transpose();
  }
  return axes;
}

std::array<double, 3> joint_swing_angles(const DeltaParams& params,
                                         const PlatformPose& pose,
                                         double home_z) {
  const PlatformPose home(0.0, 0.0, home_z);
  std::array<double, 3> swing{};
  for (int i = 0; i < 3; ++i) {
    const Vec3 nominal = leg_axis(params, home, i);
    const Vec3 current = leg_axis(params, pose, i);
    const double c = std::clamp(nominal.dot(current), -1.0, 1.0);
    swing[static_cast<std::size_t>(i)] = units::rad_to_deg(std::acos(c));
  }
  return swing;
}

double slider_travel(const DeltaParams& params,
                     std::span<const PlatformPose> poses) {
  std::array<double, 3> lo{}, hi{};
  lo.fill(std::numeric_limits<double>::infinity());
  hi.fill(-std::numeric_limits<double>::infinity());
  for (const PlatformPose& pose : poses) {
    const JointPositions q = inverse_kinematics(params, pose);
    for (std::size_t i = 0; i < 3; ++i) {
      lo[i] = std::min(lo[i], q[i]);
      hi[i] = std::max(hi[i], q[i]);
    }
  }
  double travel = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    if (hi[i] >= lo[i]) travel = std::max(travel, hi[i] - lo[i]);
  }
  return travel;
}

RigidTransform full_chain_fk(const DeltaParams& params, const JointPositions& q,
                             const ArmConfig& arm) {
  if (std::abs(units::rad_to_deg(arm.roll_angle)) > kRollRangeDeg) {
    throw DomainError("roll angle outside the validated ±45° range");
  }
  if (std::abs(units::rad_to_deg(arm.tilt_angle)) > kTiltRangeDeg) {
    throw DomainError("tilt angle outside the validated ±120° range");
  }
  const PlatformPose platform = forward_kinematics(params, q);
  const RigidTransform base_to_platform = RigidTransform::translate(platform);
  const RigidTransform platform_to_roll =
      RigidTransform::translate({0.0, 0.0, arm.d1}) *
      RigidTransform::rotate_x(arm.roll_angle);
  const RigidTransform roll_to_arm =
      RigidTransform::translate({arm.d2, 0.0, 0.0}) *
      RigidTransform::translate({0.0, 0.0, arm.d3});
  const RigidTransform arm_to_tip =
      RigidTransform::rotate_y(arm.tilt_angle) *
      RigidTransform::translate(arm.tool_offset);
  return base_to_platform * platform_to_roll * roll_to_arm * arm_to_tip;
}

Vec3 admittance_velocity(const Eigen::Matrix3d& gain, const Vec3& handle_force) {
  if (!gain.allFinite()) throw DomainError("admittance gain has non-finite entries");
  return gain * handle_force;
}

}  // namespace deltakit
