#include "deltakit/workspace.hpp"

#include <Eigen/Geometry>
#include <Eigen/SVD>
#include <cmath>
#include <limits>

#include "deltakit/optimizer.hpp"
#include "deltakit/units.hpp"

namespace deltakit {

namespace {

constexpr double kGridEps = 1e-9;

struct WorkspaceSurvey {
  bool reachable = true;
  double worst_overreach_mm = 0.0;  // max(‖gap‖ − L) over failing legs
  double max_travel_mm = 0.0;
  double max_swing_deg = 0.0;
};

WorkspaceSurvey survey(const DeltaParams& params,
                       std::span<const PlatformPose> poses, double home_z) {
  WorkspaceSurvey s;
  std::array<double, 3> lo{}, hi{};
  lo.fill(std::numeric_limits<double>::infinity());
  hi.fill(-std::numeric_limits<double>::infinity());
  for (const PlatformPose& pose : poses) {
    JointPositions q{};
    try {
      q = inverse_kinematics(params, pose);
    } catch (const ReachabilityError&) {
      s.reachable = false;
      for (int leg = 0; leg < 3; ++leg) {
        Vec3 gap = pose + (params.platform_radius - params.base_radius) *
                              params.rail_radial(leg);
        gap.z() = 0.0;
        s.worst_overreach_mm =
            std::max(s.worst_overreach_mm, gap.norm() - params.link_length);
      }
      continue;
    }
    for (std::size_t i = 0; i < 3; ++i) {
      lo[i] = std::min(lo[i], q[i]);
      hi[i] = std::max(hi[i], q[i]);
    }
    for (double angle : joint_swing_angles(params, pose, home_z)) {
      s.max_swing_deg = std::max(s.max_swing_deg, angle);
    }
  }
  if (s.reachable) {
    for (std::size_t i = 0; i < 3; ++i) {
      s.max_travel_mm = std::max(s.max_travel_mm, hi[i] - lo[i]);
    }
  }
  return s;
}

std::vector<Violation> violations_from_survey(const DeltaParams& params,
                                              const WorkspaceSurvey& s,
                                              const ConstraintPolicy& policy) {
  std::vector<Violation> violations;
  if (!s.reachable) {
    violations.push_back({Constraint::workspace_reach,
                          constraint_name(Constraint::workspace_reach),
                          s.worst_overreach_mm, 0.0});
  }
  const double clearance = params.base_radius - params.platform_radius;
  if (!(clearance > policy.ring_clearance_min_mm)) {
    violations.push_back({Constraint::ring_clearance,
                          constraint_name(Constraint::ring_clearance), clearance,
                          policy.ring_clearance_min_mm});
  }
  if (s.reachable && !(s.max_travel_mm < policy.travel_max_mm)) {
    violations.push_back({Constraint::slider_travel,
                          constraint_name(Constraint::slider_travel),
                          s.max_travel_mm, policy.travel_max_mm});
  }
  if (s.reachable && !(s.max_swing_deg < policy.swing_max_deg)) {
    violations.push_back({Constraint::swing_angle,
                          constraint_name(Constraint::swing_angle),
                          s.max_swing_deg, policy.swing_max_deg});
  }
  return violations;
}

}  // namespace

std::vector<PlatformPose> sample_workspace(const WorkspaceSpec& spec) {
  if (!(spec.diameter > 0.0) || !(spec.height > 0.0) || !(spec.step > 0.0)) {
    throw DomainError("workspace diameter, height and step must be positive");
  }
  if (spec.step > std::min(spec.diameter, spec.height)) {
    throw DomainError("workspace step exceeds the cylinder extents; no grid fits");
  }
  const double r = spec.diameter / 2.0;
  const int kxy = static_cast<int>(std::floor(r / spec.step + kGridEps));
  const int kz =
      static_cast<int>(std::floor(spec.height / 2.0 / spec.step + kGridEps));
  const double r2 = r * r;

  std::vector<PlatformPose> poses;
  for (int iz = -kz; iz <= kz; ++iz) {
    for (int iy = -kxy; iy <= kxy; ++iy) {
      for (int ix = -kxy; ix <= kxy; ++ix) {
        const double x = ix * spec.step;
        const double y = iy * spec.step;
        if (x * x + y * y > r2 + kGridEps) continue;
        poses.emplace_back(spec.center + Vec3(x, y, iz * spec.step));
      }
    }
  }
  return poses;
}

double inverse_condition_number(const DeltaParams& params,
                                const PlatformPose& pose) {
  const Eigen::Matrix3d axes = leg_axis_matrix(params, pose);
  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(axes);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(2);
  if (!(smin > 0.0)) {
    throw SingularityError("leg axes are rank-deficient at this pose");
  }
  return smin / smax;
}

double gci(const DeltaParams& params, std::span<const PlatformPose> poses) {
  if (poses.empty()) throw DomainError("gci needs at least one sample pose");
  double sum = 0.0;
  for (const PlatformPose& pose : poses) {
    sum += inverse_condition_number(params, pose);
  }
  return sum / static_cast<double>(poses.size());
}

double gci(const DeltaParams& params, const WorkspaceSpec& spec) {
  const std::vector<PlatformPose> poses = sample_workspace(spec);
  return gci(params, std::span<const PlatformPose>(poses));
}

double slider_travel(const DeltaParams& params, const WorkspaceSpec& spec) {
  const std::vector<PlatformPose> poses = sample_workspace(spec);
  return slider_travel(params, std::span<const PlatformPose>(poses));
}

double average_torsional_compliance(const DeltaParams& params,
                                    std::span<const PlatformPose> poses,
                                    const ComplianceLaw& law,
                                    double tau_z_ref_Nm) {
  if (poses.empty()) {
    throw DomainError("compliance average needs at least one sample pose");
  }
  double sum = 0.0;
  for (const PlatformPose& pose : poses) {
    sum += torsional_compliance(params, pose, law, tau_z_ref_Nm);
  }
  return sum / static_cast<double>(poses.size());
}

double average_torsional_compliance(const DeltaParams& params,
                                    const WorkspaceSpec& spec,
                                    const ComplianceLaw& law,
                                    double tau_z_ref_Nm) {
  const std::vector<PlatformPose> poses = sample_workspace(spec);
  return average_torsional_compliance(params,
                                      std::span<const PlatformPose>(poses), law,
                                      tau_z_ref_Nm);
}

const char* constraint_name(Constraint c) {
  switch (c) {
    case Constraint::workspace_reach: return "workspace_reach";
    case Constraint::ring_clearance: return "ring_clearance";
    case Constraint::slider_travel: return "slider_travel";
    case Constraint::swing_angle: return "swing_angle";
  }
  return "unknown";
}

std::vector<Violation> constraint_check(const DeltaParams& params,
                                        const WorkspaceSpec& spec,
                                        const ConstraintPolicy& policy) {
  const std::vector<PlatformPose> poses = sample_workspace(spec);
  const WorkspaceSurvey s = survey(params, poses, spec.center.z());
  return violations_from_survey(params, s, policy);
}

DesignScore evaluate_design(const DeltaParams& params, const WorkspaceSpec& spec,
                            const ComplianceLaw& law, double tau_z_ref_Nm,
                            const ConstraintPolicy& policy) {
  const std::vector<PlatformPose> poses = sample_workspace(spec);
  const WorkspaceSurvey s = survey(params, poses, spec.center.z());

  DesignScore score;
  score.violations = violations_from_survey(params, s, policy);
  score.feasible = score.violations.empty();
  if (s.reachable) {
    score.max_travel_mm = s.max_travel_mm;
    score.max_swing_deg = s.max_swing_deg;
  }
  if (score.feasible) {
    try {
      score.gci = gci(params, std::span<const PlatformPose>(poses));
      score.avg_torsional_compliance = average_torsional_compliance(
          params, std::span<const PlatformPose>(poses), law, tau_z_ref_Nm);
    } catch (const SingularityError& e) {
      // A singular sample makes the design unusable, not the sweep.
      score.feasible = false;
      score.gci.reset();
      score.avg_torsional_compliance.reset();
      score.violations.push_back({Constraint::workspace_reach, "singular_sample",
                                  e.condition(), 0.0});
    }
  }
  return score;
}

}  // namespace deltakit
