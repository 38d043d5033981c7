#pragma once

#include <filesystem>
#include <span>

#include "deltakit/bench.hpp"
#include "deltakit/compliance.hpp"
#include "deltakit/optimizer.hpp"

namespace deltakit::io {

// Typed readers/writers for the file schemas the tool speaks. All files are
// comma-separated with a mandatory header row and dot decimals. Writers are
// byte-deterministic (no timestamps in data files).

/// Torsion-test log, columns: tau_z_Nmm,dtheta_z_deg
TorsionExperiment read_torsion_csv(const std::filesystem::path& path);
void write_torsion_csv(const std::filesystem::path& path,
                       const TorsionExperiment& experiment);

/// Reduced force/deflection pairs, columns: F_N,dL_um
std::vector<ForceDeflectionPair> read_pairs_csv(const std::filesystem::path& path);
void write_pairs_csv(const std::filesystem::path& path,
                     std::span<const ForceDeflectionPair> pairs);

/// Grid-touch log, columns: target_id,cx_mm,cy_mm,cz_mm,plane,m1_um,m2_um,repeat
bench::GridLog read_grid_log_csv(const std::filesystem::path& path);
void write_grid_log_csv(const std::filesystem::path& path,
                        const bench::GridLog& log);

/// Force/deflection trace, columns: t_s,fx_N,fy_N,fz_N,dx_um,dy_um,dz_um
bench::ForceDeflectionLog read_trace_csv(const std::filesystem::path& path);
void write_trace_csv(const std::filesystem::path& path,
                     const bench::ForceDeflectionLog& log);

/// One sweep row per design, enumeration order. Columns:
/// L,w,psi,r_p,r_b,feasible,violations,gci,tc_avg,max_travel_mm,max_swing_deg
/// (psi in degrees; objective cells empty for infeasible designs; violations
/// joined by ';').
void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result);

/// Typed view of a sweep CSV row as written by write_sweep_csv.
struct SweepRow {
  double link_length = 0.0;
  double leg_width = 0.0;
  double offset_angle_deg = 0.0;
  double platform_radius = 0.0;
  double base_radius = 0.0;
  bool feasible = false;
  std::vector<std::string> violations;
  std::optional<double> gci;
  std::optional<double> tc_avg;
  std::optional<double> max_travel_mm;
  std::optional<double> max_swing_deg;
};
std::vector<SweepRow> read_sweep_rows(const std::filesystem::path& path);

/// Plot-ready exports. "sweep" writes one (psi, L, gci, tc_avg) slice file
/// per leg-width value; "fit" writes the observation scatter plus a
/// 100-point sampled fitted curve. A kind that does not match the supplied
/// data throws DomainError.
struct PlotData {
  const SweepResult* sweep = nullptr;
  const FitReport* fit = nullptr;
  std::vector<ForceDeflectionPair> pairs;  // scatter behind the fit
};
std::vector<std::filesystem::path> emit_plot_data(
    const PlotData& data, std::string_view kind,
    const std::filesystem::path& out_dir);

}  // namespace deltakit::io
