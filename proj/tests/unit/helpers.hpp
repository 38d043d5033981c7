#pragma once

#include <Eigen/Dense>
#include <random>

#include "deltakit/compliance.hpp"
#include "deltakit/kinematics.hpp"

// Shared fixtures and independent oracles for the unit suites. Oracles solve
// the same problems by a different route than the library so agreement is
// meaningful; keep them free of library internals.
namespace testutil {

using namespace deltakit;

/// The production design point (link 64, width 40, offset 27°); the joint
/// radius comes from inverting the platform-radius relation for the earlier
/// prototype (width 25, platform radius 24.9).
inline DeltaParams production_params() {
  const double r_sr = sr_radius_from_platform(24.9, 25.0);
  return derive_radii(64.0, 40.0, 27.0, r_sr);
}

inline DeltaParams prototype_params() {
  const double r_sr = sr_radius_from_platform(24.9, 25.0);
  return derive_radii(86.0, 25.0, 21.0, r_sr);
}

/// Uniform sample inside the target cylinder (55 mm diameter, 60 mm height).
inline PlatformPose random_cylinder_pose(std::mt19937& rng, double diameter = 55.0,
                                         double height = 60.0) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = diameter / 2.0 * std::sqrt(unit(rng));
  const double phi = 2.0 * M_PI * unit(rng);
  const double z = (unit(rng) - 0.5) * height;
  return {r * std::cos(phi), r * std::sin(phi), z};
}

/// Root-find oracle for one slider height: bisection on
/// ‖d − (r_b·û + q·ẑ)‖ − L over the lower branch, independent of the
/// closed-form solution.
inline double slider_height_bisection(const DeltaParams& p,
                                      const PlatformPose& pose, int leg) {
  const Vec3 u = p.rail_radial(leg);
  const Vec3 d = pose + p.platform_radius * u;
  auto dist = [&](double q) {
    return (d - (p.base_radius * u + q * Vec3::UnitZ())).norm() - p.link_length;
  };
  double lo = d.z() - p.link_length;  // dist >= 0 here
  double hi = d.z();                  // dist < 0 for reachable poses
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (dist(mid) >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Central-difference platform-velocity map dP/dq of forward_kinematics.
inline Eigen::Matrix3d fd_fk_jacobian(const DeltaParams& p,
                                      const JointPositions& q,
                                      double step = 1e-4) {
  Eigen::Matrix3d j;
  for (int i = 0; i < 3; ++i) {
    JointPositions hiq = q, loq = q;
    hiq[static_cast<std::size_t>(i)] += step;
    loq[static_cast<std::size_t>(i)] -= step;
    j.col(i) =
        (forward_kinematics(p, hiq) - forward_kinematics(p, loq)) / (2.0 * step);
  }
  return j;
}

/// Wrench at P accumulated link by link: each link carries a pure axial
/// force, and moments come from the joint offsets. Independent of the
/// assembled 6×6 matrix.
inline Vector6d accumulate_wrench(const LinkGeometry& geom,
                                  const PlatformPose& pose,
                                  const Vector6d& forces) {
  Vec3 f = Vec3::Zero(), tau = Vec3::Zero();
  for (int k = 0; k < 6; ++k) {
    const std::size_t i = static_cast<std::size_t>(k);
    const Vec3 axis =
        (geom.platform_joint[i] - geom.slider_joint[i]) / geom.link_length;
    const Vec3 fk = forces[k] * axis;
    f += fk;
    tau += (geom.platform_joint[i] - pose).cross(fk);
  }
  Vector6d w;
  w << f, tau;
  return w;
}

}  // namespace testutil
