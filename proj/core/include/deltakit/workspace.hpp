#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "deltakit/compliance.hpp"
#include "deltakit/kinematics.hpp"

namespace deltakit {

/// Cylindrical target workspace of the platform center.
struct WorkspaceSpec {
  double diameter = 55.0;      // mm
  double height = 60.0;        // mm
  Vec3 center = Vec3::Zero();  // mm, in {b}
  double step = 5.0;           // mm, sampling step
};

/// Regular grid anchored at the cylinder center, filtered to the cylinder,
/// ordered z-major, then y, then x. Throws DomainError on an invalid spec
/// (non-positive extents, or step larger than diameter or height).
std::vector<PlatformPose> sample_workspace(const WorkspaceSpec& spec);

/// 1/κ at one pose: σ_min/σ_max of the unit leg-axis matrix. In (0, 1].
double inverse_condition_number(const DeltaParams& params,
                                const PlatformPose& pose);

/// Global Conditioning Index: mean of inverse_condition_number over the
/// sampled workspace (or an explicit pose set). Propagates
/// ReachabilityError/SingularityError from unreachable or singular samples.
double gci(const DeltaParams& params, const WorkspaceSpec& spec);
double gci(const DeltaParams& params, std::span<const PlatformPose> poses);

/// Max per-rail slider span over the sampled workspace, mm.
double slider_travel(const DeltaParams& params, const WorkspaceSpec& spec);

/// Mean of torsional_compliance over the sampled workspace, deg/(N·m).
double average_torsional_compliance(const DeltaParams& params,
                                    const WorkspaceSpec& spec,
                                    const ComplianceLaw& law,
                                    double tau_z_ref_Nm);
double average_torsional_compliance(const DeltaParams& params,
                                    std::span<const PlatformPose> poses,
                                    const ComplianceLaw& law,
                                    double tau_z_ref_Nm);

enum class Constraint {
  workspace_reach,  // every cylinder sample reachable
  ring_clearance,   // r_b − r_p above the collision margin
  slider_travel,    // per-rail travel span below the stroke limit
  swing_angle,      // ball-joint swing from the home-pose leg axis
};

/// Feasibility thresholds. Defaults are the design rules as written; each is
/// overridable from the run configuration.
struct ConstraintPolicy {
  double ring_clearance_min_mm = 30.0;
  double travel_max_mm = 90.0;
  double swing_max_deg = 30.0;
};

struct Violation {
  Constraint constraint;
  std::string name;          // stable identifier, e.g. "ring_clearance"
  double worst_value = 0.0;  // worst offending value observed
  double limit = 0.0;        // the threshold it broke
};

const char* constraint_name(Constraint c);

/// Evaluates all four feasibility constraints over the sampled workspace.
/// Violations are data, not errors; the list is deterministic.
std::vector<Violation> constraint_check(const DeltaParams& params,
                                        const WorkspaceSpec& spec,
                                        const ConstraintPolicy& policy = {});

/// Feasibility verdict plus objectives for one design. Objectives are only
/// present for feasible designs; travel/swing are present whenever the
/// workspace is reachable.
struct DesignScore {
  bool feasible = false;
  std::vector<Violation> violations;
  std::optional<double> gci;
  std::optional<double> avg_torsional_compliance;  // deg/(N·m)
  std::optional<double> max_travel_mm;
  std::optional<double> max_swing_deg;
};

}  // namespace deltakit
