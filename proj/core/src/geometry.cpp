#include "deltakit/geometry.hpp"

#include <cmath>
#include <string>

#include "deltakit/units.hpp"

namespace deltakit {

namespace {

constexpr double kRadiusTol = 1e-9;  // mm, derived-radius identity tolerance

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

void require_positive(double v, const char* name) {
  if (!positive_finite(v)) {
    throw DomainError(std::string(name) + " must be positive and finite, got " +
                      std::to_string(v));
  }
}

}  // namespace

Vec3 DeltaParams::rail_radial(int leg) const {
  const double a = rail_azimuths[static_cast<std::size_t>(leg)];
  return {std::cos(a), std::sin(a), 0.0};
}

double platform_radius_from_sr(double sr_joint_radius, double leg_width) {
  require_positive(leg_width, "leg_width");
  if (!std::isfinite(sr_joint_radius) || sr_joint_radius < 0.0) {
    throw DomainError("sr_joint_radius must be non-negative and finite");
  }
  // Circumradius of the hexagon of joint centers: pairs split ±w/2
  // tangentially, with the pair center set radially by the joint size.
  return std::sqrt(4.0 * sr_joint_radius * sr_joint_radius +
                   2.0 * leg_width * sr_joint_radius + leg_width * leg_width) /
         std::sqrt(3.0);
}

double sr_radius_from_platform(double platform_radius, double leg_width) {
  require_positive(platform_radius, "platform_radius");
  require_positive(leg_width, "leg_width");
  // Positive root of 4 r² + 2 w r + (w² − 3 r_p²) = 0.
  const double c = leg_width * leg_width -
                   3.0 * platform_radius * platform_radius;
  const double disc = leg_width * leg_width - 4.0 * c;
  if (disc < 0.0) {
    throw DomainError("platform_radius too small for the given leg_width");
  }
  const double r = (-leg_width + std::sqrt(disc)) / 4.0;
  if (r < 0.0) {
    throw DomainError("platform_radius too small for the given leg_width");
  }
  return r;
}

DeltaParams derive_radii(double link_length_mm, double leg_width_mm,
                         double offset_angle_deg, double sr_joint_radius_mm,
                         const std::array<double, 3>& rail_azimuths_deg) {
  require_positive(link_length_mm, "link_length");
  require_positive(leg_width_mm, "leg_width");
  require_positive(sr_joint_radius_mm, "sr_joint_radius");
  if (!std::isfinite(offset_angle_deg) || offset_angle_deg <= 0.0 ||
      offset_angle_deg >= 90.0) {
    throw DomainError("offset_angle must lie in (0, 90) degrees, got " +
                      std::to_string(offset_angle_deg));
  }

  DeltaParams p;
  p.link_length = link_length_mm;
  p.leg_width = leg_width_mm;
  p.offset_angle = units::deg_to_rad(offset_angle_deg);
  p.sr_joint_radius = sr_joint_radius_mm;
  p.platform_radius = platform_radius_from_sr(sr_joint_radius_mm, leg_width_mm);
  p.base_radius = p.platform_radius + link_length_mm * std::sin(p.offset_angle);
  for (int i = 0; i < 3; ++i) {
    p.rail_azimuths[static_cast<std::size_t>(i)] =
        units::deg_to_rad(rail_azimuths_deg[static_cast<std::size_t>(i)]);
  }
  validate(p);
  return p;
}

void validate(const DeltaParams& params) {
  require_positive(params.link_length, "link_length");
  require_positive(params.leg_width, "leg_width");
  require_positive(params.sr_joint_radius, "sr_joint_radius");
  if (!(params.offset_angle > 0.0) ||
      !(params.offset_angle < units::deg_to_rad(90.0))) {
    throw DomainError("offset_angle out of (0, 90) degrees");
  }
  const double rp = platform_radius_from_sr(params.sr_joint_radius,
                                            params.leg_width);
  if (std::abs(rp - params.platform_radius) > kRadiusTol) {
    throw DomainError("platform_radius inconsistent with joint radius and leg width");
  }
  const double rb = params.platform_radius +
                    params.link_length * std::sin(params.offset_angle);
  if (std::abs(rb - params.base_radius) > kRadiusTol) {
    throw DomainError("base_radius inconsistent with platform_radius + L*sin(psi)");
  }
  constexpr double kTwoPi = 2.0 * units::kPi;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      double d = std::fmod(params.rail_azimuths[static_cast<std::size_t>(i)] -
                               params.rail_azimuths[static_cast<std::size_t>(j)],
                           kTwoPi);
      if (d < 0.0) d += kTwoPi;
      if (d < 1e-12 || kTwoPi - d < 1e-12) {
        throw DomainError("rail azimuths must be pairwise distinct modulo 360 degrees");
      }
    }
  }
}

}  // namespace deltakit
