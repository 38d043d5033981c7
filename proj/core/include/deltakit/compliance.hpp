#pragma once

#include <span>
#include <vector>

#include "deltakit/geometry.hpp"

namespace deltakit {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

/// Condition-number ceiling for the 6×6 link-wrench solves.
inline constexpr double kDefaultConditionLimit = 1e8;

/// Ball-joint centers of the six links. Links 2i and 2i+1 are the pair of
/// leg i, offset ±w/2 along the tangential direction ẑ×ûᵢ at both ends.
struct LinkGeometry {
  std::array<Vec3, 6> slider_joint;    // C, mm
  std::array<Vec3, 6> platform_joint;  // D, mm
  double link_length = 0.0;            // mm

  Vec3 link_axis(int i) const { return platform_joint[i] - slider_joint[i]; }
};

/// Joint centers of all six links at a pose. Throws ReachabilityError.
LinkGeometry link_endpoints(const DeltaParams& params, const PlatformPose& pose);

/// Column k stacks link k's axis over its moment about P:
/// [D−C ; (D−P)×(D−C)]. (1/L)·M maps axial link forces to the platform
/// wrench; upper block rows carry mm, lower block mm².
Matrix6d link_wrench_matrix(const LinkGeometry& geom, const PlatformPose& pose);

/// Force (N) and torque (N·mm) acting at P, expressed in {b}.
struct Wrench {
  Vec3 force = Vec3::Zero();
  Vec3 torque = Vec3::Zero();
};

/// Axial link forces (N, + = tension) in equilibrium with the wrench at P.
/// Throws SingularityError with a condition estimate when the 6×6 system is
/// ill-conditioned beyond condition_limit.
Vector6d solve_link_forces(const LinkGeometry& geom, const PlatformPose& pose,
                           const Wrench& wrench,
                           double condition_limit = kDefaultConditionLimit);

/// Axial force → axial deflection relation of one link (µm per N).
/// The power form is the experimentally identified production law
/// δL = 3.7·F^0.71; compression uses the odd-symmetric extension.
struct ComplianceLaw {
  enum class Kind { power, linear };

  Kind kind = Kind::power;
  double a = 3.7;   // µm/N^b (power)
  double b = 0.71;  // dimensionless, in (0, 1.5]
  double c = 0.0;   // µm/N (linear)

  static ComplianceLaw power(double a, double b);
  static ComplianceLaw linear(double c);

  /// δL in µm for an axial force in N; odd in the force.
  double deflection_um(double force_N) const;
};

/// Applies the law elementwise; returns µm.
Vector6d link_deflections(const Vector6d& forces_N, const ComplianceLaw& law);

/// Linear and angular deflection of P with solver intermediates attached.
struct DeflectionResult {
  Vec3 linear_um = Vec3::Zero();
  Vec3 angular_deg = Vec3::Zero();
  Vector6d link_forces_N = Vector6d::Zero();
  Vector6d link_deflections_um = Vector6d::Zero();
};

/// Platform deflection produced by the given axial link deflections (µm).
DeflectionResult platform_deflection(const LinkGeometry& geom,
                                     const PlatformPose& pose,
                                     const Vector6d& deflections_um,
                                     double condition_limit = kDefaultConditionLimit);

/// Full pipeline: wrench → link forces → link deflections → deflection of P.
DeflectionResult solve_deflection(const DeltaParams& params,
                                  const PlatformPose& pose,
                                  const ComplianceLaw& law, const Wrench& wrench,
                                  double condition_limit = kDefaultConditionLimit);

/// Platform twist about Z per unit applied torsion, deg/(N·m), evaluated at
/// the reference torque (secant value; the law makes it torque-dependent).
/// tau_z_ref_Nm = 0 throws DomainError.
double torsional_compliance(const DeltaParams& params, const PlatformPose& pose,
                            const ComplianceLaw& law, double tau_z_ref_Nm,
                            double condition_limit = kDefaultConditionLimit);

/// One benchtop torsion sample: applied torque and measured platform twist.
struct TorsionSample {
  double tau_z_Nmm = 0.0;
  double dtheta_z_deg = 0.0;
};

struct TorsionExperiment {
  std::vector<TorsionSample> samples;
  bool spring_preload = false;
};

/// One reduced observation of a single link.
struct ForceDeflectionPair {
  double force_N = 0.0;
  double deflection_um = 0.0;
};

/// Maps each torsion sample through the rigid-link model: torque → six axial
/// forces, measured twist → six axial deflections. Emits 6 pairs per sample
/// in link order. The pose is where the rig held the platform.
std::vector<ForceDeflectionPair> reduce_torsion_experiment(
    const TorsionExperiment& experiment, const DeltaParams& params,
    const PlatformPose& pose, double condition_limit = kDefaultConditionLimit);

struct FitReport {
  ComplianceLaw law;
  double r_squared = 0.0;
  double rms_error_um = 0.0;
  std::size_t n_points = 0;
  int iterations = 0;
};

/// Least-squares power-law identification δL = a·F^b on magnitudes: log-log
/// linear seed, then damped Gauss-Newton refinement on the original scale.
/// R² and RMS are reported on the non-log residuals. Throws FitError on
/// fewer than 10 usable pairs or degenerate force support.
FitReport fit_compliance_law(std::span<const ForceDeflectionPair> pairs);

}  // namespace deltakit
