#pragma once

#include <span>

#include "deltakit/geometry.hpp"
#include "deltakit/transform.hpp"

namespace deltakit {

/// Fixed offsets and joint values of the arm riding on the delta platform.
/// The tilt linkage is abstracted as a single revolute joint about Y plus a
/// fixed tool offset.
struct ArmConfig {
  double d1 = 0.0;  // mm, platform -> roll frame along Z
  double d2 = 0.0;  // mm, roll -> arm frame along X
  double d3 = 0.0;  // mm, roll -> arm frame along Z
  double roll_angle = 0.0;  // rad, about X of the roll frame
  double tilt_angle = 0.0;  // rad, abstract tilt joint about Y
  Vec3 tool_offset = Vec3::Zero();  // mm, tilt frame -> tool tip
};

inline constexpr double kRollRangeDeg = 45.0;   // validated joint range, ±
inline constexpr double kTiltRangeDeg = 120.0;  // validated joint range, ±

/// Slider heights for a platform position. Branch: slider below its platform
/// joint, i.e. q = P_z − sqrt(L² − ‖horizontal gap‖²), so the platform rides
/// above the sliders. Throws ReachabilityError naming the first offending leg.
JointPositions inverse_kinematics(const DeltaParams& params,
                                  const PlatformPose& pose);

/// Platform position for slider heights, via three-sphere intersection on the
/// branch consistent with inverse_kinematics. Throws ReachabilityError when
/// the spheres miss and SingularityError when the sphere centers degenerate.
PlatformPose forward_kinematics(const DeltaParams& params,
                                const JointPositions& q);

/// Velocity map q̇ = J·ṗ with rows n̂ᵢᵀ/(n̂ᵢ·ẑ); n̂ᵢ is the unit leg axis.
/// Throws SingularityError when a link is horizontal.
Eigen::Matrix3d jacobian(const DeltaParams& params, const PlatformPose& pose);

/// Rows are the unit leg axes n̂ᵢᵀ (the leg-length-constraint gradient wrt
/// the platform position, before the per-row slider coupling 1/(n̂ᵢ·ẑ)).
/// This is the matrix whose conditioning the workspace metrics use.
Eigen::Matrix3d leg_axis_matrix(const DeltaParams& params,
                                const PlatformPose& pose);

/// Per-leg angle (deg) between the current leg axis and the leg axis at the
/// centered pose (0, 0, home_z). Pure z translation does not change it.
std::array<double, 3> joint_swing_angles(const DeltaParams& params,
                                         const PlatformPose& pose,
                                         double home_z = 0.0);

/// Max over legs of (max qᵢ − min qᵢ) across the given poses.
double slider_travel(const DeltaParams& params,
                     std::span<const PlatformPose> poses);

/// Pose of the tool tip in {b}: delta FK, then trans(Z,d1)·rot(X,roll),
/// trans(X,d2)·trans(Z,d3), then rot(Y,tilt)·trans(tool_offset).
/// Arm angles outside the validated ranges throw DomainError.
RigidTransform full_chain_fk(const DeltaParams& params, const JointPositions& q,
                             const ArmConfig& arm);

/// Cooperative-mode velocity command: v = gain · handle_force. Pure linear
/// map, no dynamics. gain in (mm/s)/N.
Vec3 admittance_velocity(const Eigen::Matrix3d& gain, const Vec3& handle_force);

}  // namespace deltakit
