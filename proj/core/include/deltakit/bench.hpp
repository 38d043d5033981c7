#pragma once

#include <Eigen/Core>
#include <array>
#include <optional>
#include <string>
#include <vector>

namespace deltakit::bench {

/// Which pair of axes a camera measures. A plane tag determines which two of
/// the three axes exist in a record; reports never fabricate the third.
enum class CameraPlane { xz, yz, xy };

/// Axis indices (0=x, 1=y, 2=z) measured by a plane, in (m1, m2) order.
std::array<int, 2> plane_axes(CameraPlane plane);

/// One measured visit of a commanded target.
struct GridRecord {
  std::string target_id;
  Eigen::Vector3d commanded_mm = Eigen::Vector3d::Zero();
  CameraPlane plane = CameraPlane::xz;
  double m1_um = 0.0;  // first plane axis, µm
  double m2_um = 0.0;  // second plane axis, µm
  int repeat = 0;
};

struct GridLog {
  std::vector<GridRecord> records;
};

/// Standard-deviation convention. The repeat counts are small (typically 5),
/// so the choice is material; population is the default.
enum class StdMode { population, sample };

struct AccuracyCell {
  double mean_um = 0.0;
  double std_um = 0.0;
  int pair_count = 0;
};

/// Relative positioning error per (motion axis, measured axis). A cell exists
/// only when some camera plane covered that combination.
struct AccuracyReport {
  std::array<std::array<std::optional<AccuracyCell>, 3>, 3> cells;  // [motion][measured]
  double nominal_step_mm = 0.0;
};

/// For every same-plane, same-repeat record pair whose commanded positions
/// differ by exactly the nominal step along one axis, the error per measured
/// axis is |measured displacement − intended displacement| (intended = step
/// along the motion axis, 0 across). Throws InputError when no aligned pair
/// exists.
AccuracyReport grid_accuracy(const GridLog& log, double nominal_step_mm,
                             StdMode mode = StdMode::population);

struct RepeatabilityReport {
  std::array<std::optional<double>, 3> per_axis_um;  // absent without coverage
  /// Conservative distinguishable-step verdict: the commanded grid pitch when
  /// it clears twice the worst repeatability, else twice that repeatability.
  double resolution_um = 0.0;
  std::vector<std::string> skipped_targets;  // fewer than 2 visits
};

/// Per-axis standard deviation of the measured visits of each target,
/// averaged over targets with at least two visits.
RepeatabilityReport repeatability(const GridLog& log,
                                  StdMode mode = StdMode::population);

/// Force/deflection time series recorded at one tool-point position.
struct ForceDeflectionLog {
  std::vector<double> t_s;
  std::vector<Eigen::Vector3d> force_N;
  std::vector<Eigen::Vector3d> deflection_um;
  double pos_x_mm = 0.0;
  double pos_y_mm = 0.0;
};

struct TraceCompliance {
  std::array<double, 3> c_um_per_N{};  // positive magnitudes
};

/// Per axis, the least-squares slope of deflection vs force over the whole
/// trace (offset-tolerant). Throws FitError naming the axis when the force
/// excursion is below min_force_range_N.
TraceCompliance compliance_from_trace(const ForceDeflectionLog& log,
                                      double min_force_range_N = 1.0);

}  // namespace deltakit::bench
