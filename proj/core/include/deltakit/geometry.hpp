#pragma once

#include <Eigen/Core>
#include <array>

#include "deltakit/errors.hpp"

namespace deltakit {

using Vec3 = Eigen::Vector3d;

/// Position of the platform point P in the base frame {b}, mm. The delta
/// stage is purely translational, so a pose carries no rotation.
using PlatformPose = Eigen::Vector3d;

/// Slider heights along the three vertical rails, mm.
using JointPositions = std::array<double, 3>;

/// Default rail placement about the base Z axis.
inline constexpr std::array<double, 3> kDefaultRailAzimuthsDeg{90.0, 210.0, 330.0};

/// Geometric design point of the linear-rail delta stage.
///
/// The two radii are derived, not free: platform_radius is the smallest
/// circumradius that seats all six ball joints given the joint radius and the
/// leg width, and base_radius = platform_radius + link_length·sin(offset_angle)
/// so that each leg makes the offset angle with its rail at the centered pose.
struct DeltaParams {
  double link_length = 0.0;      // L, mm
  double leg_width = 0.0;        // w, tangential separation of a leg's link pair, mm
  double offset_angle = 0.0;     // psi, rad (degrees at all external interfaces)
  double sr_joint_radius = 0.0;  // ball-joint radius, mm
  double platform_radius = 0.0;  // r_p, mm (derived)
  double base_radius = 0.0;      // r_b, mm (derived)
  std::array<double, 3> rail_azimuths{};  // rad, about base Z

  /// Horizontal unit vector from the base center toward rail `leg`.
  Vec3 rail_radial(int leg) const;
};

/// Smallest platform circumradius that accommodates all six ball joints.
double platform_radius_from_sr(double sr_joint_radius, double leg_width);

/// Inverse of platform_radius_from_sr in the joint radius.
double sr_radius_from_platform(double platform_radius, double leg_width);

/// Builds a validated design point from the four free parameters.
/// Throws DomainError on non-positive or non-finite input, offset angle
/// outside (0°, 90°), or rail azimuths that coincide modulo 360°.
DeltaParams derive_radii(double link_length_mm, double leg_width_mm,
                         double offset_angle_deg, double sr_joint_radius_mm,
                         const std::array<double, 3>& rail_azimuths_deg =
                             kDefaultRailAzimuthsDeg);

/// Re-checks every DeltaParams invariant (including the two derived-radius
/// identities to 1e-9 mm). Throws DomainError on the first failure.
void validate(const DeltaParams& params);

}  // namespace deltakit
