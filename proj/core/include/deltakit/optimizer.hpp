#pragma once

#include <cstddef>
#include <span>

#include "deltakit/workspace.hpp"

namespace deltakit {

/// Inclusive arithmetic range start:step:stop.
struct GridRange {
  double start = 0.0;
  double step = 1.0;
  double stop = 0.0;

  int count() const;
  double at(int i) const;
};

/// Exhaustive design grid over (L, w, psi) with a fixed ball-joint radius.
/// Defaults are the production search ranges.
struct ParameterGrid {
  GridRange link_length{60.0, 2.0, 90.0};       // mm
  GridRange leg_width{25.0, 5.0, 40.0};         // mm
  GridRange offset_angle_deg{18.0, 1.0, 32.0};  // deg
  double sr_joint_radius = 12.4;                // mm
  std::array<double, 3> rail_azimuths_deg = kDefaultRailAzimuthsDeg;
};

/// Cartesian product in deterministic (L-major, then w, then psi) order,
/// radii derived per design. Throws ConfigError on an invalid range.
std::vector<DeltaParams> enumerate_grid(const ParameterGrid& grid);

/// Constraint check first; objectives only when feasible. A singular sample
/// during objective evaluation is reported as an infeasibility, not thrown.
DesignScore evaluate_design(const DeltaParams& params, const WorkspaceSpec& spec,
                            const ComplianceLaw& law, double tau_z_ref_Nm,
                            const ConstraintPolicy& policy = {});

struct SweepEntry {
  DeltaParams params;
  DesignScore score;
};

/// Indices of the non-dominated feasible entries (gci up, compliance down),
/// ties kept, in enumeration order. Empty when nothing is feasible.
std::vector<std::size_t> pareto_filter(std::span<const SweepEntry> entries);

/// Convex weights for scalarized selection over min-max normalized
/// objectives; must be non-negative and sum to 1.
struct ScalarizationWeights {
  double gci = 0.5;
  double compliance = 0.5;
};

/// Front member maximizing gci_w·ĝci − compliance_w·t̂c on objectives
/// normalized over the feasible set (degenerate objectives normalize to 0.5).
/// Ties break toward higher gci, then lower link length. Throws DomainError
/// on an empty front or invalid weights.
std::size_t select_design(std::span<const SweepEntry> entries,
                          std::span<const std::size_t> front,
                          const ScalarizationWeights& weights);

struct SweepOptions {
  /// Worker count for the parallel design evaluation; <= 0 picks the
  /// hardware concurrency. Results are independent of this value.
  int threads = 0;
};

struct SweepResult {
  std::vector<SweepEntry> entries;   // enumeration order
  std::vector<std::size_t> pareto;   // indices into entries
  std::optional<std::size_t> selected;

  // Provenance: everything needed to reproduce the sweep.
  ParameterGrid grid;
  WorkspaceSpec workspace;
  ComplianceLaw law;
  double tau_z_ref_Nm = 1.0;
  ConstraintPolicy policy;
  ScalarizationWeights weights;
};

/// Full exhaustive sweep: enumerate, evaluate (parallel map, deterministic
/// collection order), Pareto-filter, select.
SweepResult run_sweep(const ParameterGrid& grid, const WorkspaceSpec& spec,
                      const ComplianceLaw& law, double tau_z_ref_Nm,
                      const ConstraintPolicy& policy = {},
                      const ScalarizationWeights& weights = {},
                      const SweepOptions& options = {});

}  // namespace deltakit
