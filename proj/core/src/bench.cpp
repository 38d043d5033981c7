#include "deltakit/bench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "deltakit/errors.hpp"

namespace deltakit::bench {

namespace {

constexpr double kAlignTolMm = 1e-9;
constexpr const char* kAxisNames = "xyz";

double deviation(const std::vector<double>& values, double mean, StdMode mode) {
  if (values.size() < 2) return 0.0;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double n = static_cast<double>(values.size());
  return std::sqrt(ss / (mode == StdMode::population ? n : n - 1.0));
}

double mean_of(const std::vector<double>& values) {
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

}  // namespace

std::array<int, 2> plane_axes(CameraPlane plane) {
  switch (plane) {
    case CameraPlane::xz: return {0, 2};
    case CameraPlane::yz: return {1, 2};
    case CameraPlane::xy: return {0, 1};
  }
  return {0, 1};
}

AccuracyReport grid_accuracy(const GridLog& log, double nominal_step_mm,
                             StdMode mode) {
  if (!(nominal_step_mm > 0.0)) {
    throw DomainError("nominal step must be positive");
  }
  const double step_um = nominal_step_mm * 1000.0;

  // errors[motion][measured]
  std::array<std::array<std::vector<double>, 3>, 3> errors;

  const auto& recs = log.records;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    for (std::size_t j = i + 1; j < recs.size(); ++j) {
      const GridRecord& a = recs[i];
      const GridRecord& b = recs[j];
      if (a.plane != b.plane || a.repeat != b.repeat) continue;

      // Aligned pair: commanded positions differ by exactly one nominal step
      // along a single axis.
      int motion = -1;
      for (int axis = 0; axis < 3 && motion != -2; ++axis) {
        const double d = b.commanded_mm[axis] - a.commanded_mm[axis];
        if (std::abs(d) <= kAlignTolMm) continue;
        if (std::abs(std::abs(d) - nominal_step_mm) <= kAlignTolMm) {
          motion = (motion == -1) ? axis : -2;  // -2: moved on two axes
        } else {
          motion = -2;
        }
      }
      if (motion < 0) continue;

      // Orient the pair so the commanded displacement is +step.
      const GridRecord& from =
          (b.commanded_mm[motion] > a.commanded_mm[motion]) ? a : b;
      const GridRecord& to =
          (b.commanded_mm[motion] > a.commanded_mm[motion]) ? b : a;

      const std::array<int, 2> axes = plane_axes(a.plane);
      const std::array<double, 2> measured{to.m1_um - from.m1_um,
                                           to.m2_um - from.m2_um};
      for (int k = 0; k < 2; ++k) {
        const int axis = axes[static_cast<std::size_t>(k)];
        const double intended = (axis == motion) ? step_um : 0.0;
        errors[static_cast<std::size_t>(motion)][static_cast<std::size_t>(axis)]
            .push_back(std::abs(measured[static_cast<std::size_t>(k)] - intended));
      }
    }
  }

  AccuracyReport report;
  report.nominal_step_mm = nominal_step_mm;
  bool any = false;
  for (std::size_t m = 0; m < 3; ++m) {
    for (std::size_t x = 0; x < 3; ++x) {
      if (errors[m][x].empty()) continue;
      const double mean = mean_of(errors[m][x]);
      report.cells[m][x] = AccuracyCell{
          mean, deviation(errors[m][x], mean, mode),
          static_cast<int>(errors[m][x].size())};
      any = true;
    }
  }
  if (!any) {
    throw InputError("no aligned point pairs at a " +
                     std::to_string(nominal_step_mm) + " mm step in the log");
  }
  return report;
}

RepeatabilityReport repeatability(const GridLog& log, StdMode mode) {
  // Pool every measurement of an axis per target, across planes and repeats.
  std::map<std::string, std::array<std::vector<double>, 3>> by_target;
  for (const GridRecord& r : log.records) {
    const std::array<int, 2> axes = plane_axes(r.plane);
    auto& slots = by_target[r.target_id];
    slots[static_cast<std::size_t>(axes[0])].push_back(r.m1_um);
    slots[static_cast<std::size_t>(axes[1])].push_back(r.m2_um);
  }

  RepeatabilityReport report;
  std::array<std::vector<double>, 3> per_target_std;
  for (const auto& [target, slots] : by_target) {
    bool usable = false;
    for (std::size_t axis = 0; axis < 3; ++axis) {
      if (slots[axis].size() < 2) continue;
      per_target_std[axis].push_back(
          deviation(slots[axis], mean_of(slots[axis]), mode));
      usable = true;
    }
    if (!usable) report.skipped_targets.push_back(target);
  }

  double worst = 0.0;
  bool covered = false;
  for (std::size_t axis = 0; axis < 3; ++axis) {
    if (per_target_std[axis].empty()) continue;
    report.per_axis_um[axis] = mean_of(per_target_std[axis]);
    worst = std::max(worst, *report.per_axis_um[axis]);
    covered = true;
  }
  if (!covered) {
    throw InputError("repeatability needs at least one target with 2+ visits");
  }

  // Smallest commanded pitch along any axis, µm.
  double pitch_um = std::numeric_limits<double>::infinity();
  for (const GridRecord& a : log.records) {
    for (const GridRecord& b : log.records) {
      for (int axis = 0; axis < 3; ++axis) {
        const double d =
            std::abs(a.commanded_mm[axis] - b.commanded_mm[axis]) * 1000.0;
        if (d > 1e-6) pitch_um = std::min(pitch_um, d);
      }
    }
  }
  report.resolution_um = std::isfinite(pitch_um)
                             ? std::max(pitch_um, 2.0 * worst)
                             : 2.0 * worst;
  return report;
}

TraceCompliance compliance_from_trace(const ForceDeflectionLog& log,
                                      double min_force_range_N) {
  const std::size_t n = log.force_N.size();
  if (n < 2 || log.deflection_um.size() != n) {
    throw InputError("trace needs matching force/deflection series of length >= 2");
  }
  for (std::size_t i = 1; i < log.t_s.size(); ++i) {
    if (log.t_s[i] < log.t_s[i - 1]) {
      throw InputError("trace timestamps must be monotone");
    }
  }

  TraceCompliance out;
  for (int axis = 0; axis < 3; ++axis) {
    double fmin = std::numeric_limits<double>::infinity(), fmax = -fmin;
    double sf = 0.0, sd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double fv = log.force_N[i][axis];
      fmin = std::min(fmin, fv);
      fmax = std::max(fmax, fv);
      sf += fv;
      sd += log.deflection_um[i][axis];
    }
    if (fmax - fmin < min_force_range_N) {
      throw FitError(std::string("force excursion on ") + kAxisNames[axis] +
                     " below " + std::to_string(min_force_range_N) + " N");
    }
    const double mf = sf / static_cast<double>(n);
    const double md = sd / static_cast<double>(n);
    double sff = 0.0, sfd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double df = log.force_N[i][axis] - mf;
      sff += df * df;
      sfd += df * (log.deflection_um[i][axis] - md);
    }
    out.c_um_per_N[static_cast<std::size_t>(axis)] = std::abs(sfd / sff);
  }
  return out;
}

}  // namespace deltakit::bench
