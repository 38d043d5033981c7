#include "deltakit/io.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <string>

#include "deltakit/csv.hpp"
#include "deltakit/units.hpp"

namespace deltakit::io {

namespace {

using csv::format_double;

bench::CameraPlane plane_from_string(std::string_view s, std::string_view ctx) {
  if (s == "xz") return bench::CameraPlane::xz;
  if (s == "yz") return bench::CameraPlane::yz;
  if (s == "xy") return bench::CameraPlane::xy;
  throw InputError(std::string(ctx) + ": unknown camera plane '" +
                   std::string(s) + "' (expected xz, yz or xy)");
}

const char* plane_to_string(bench::CameraPlane plane) {
  switch (plane) {
    case bench::CameraPlane::xz: return "xz";
    case bench::CameraPlane::yz: return "yz";
    case bench::CameraPlane::xy: return "xy";
  }
  return "xy";
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

TorsionExperiment read_torsion_csv(const std::filesystem::path& path) {
  const csv::Table t = csv::read(path);
  const auto tau = static_cast<std::size_t>(
      t.require_column("tau_z_Nmm", path.string()));
  const auto dth = static_cast<std::size_t>(
      t.require_column("dtheta_z_deg", path.string()));
  TorsionExperiment exp;
  exp.samples.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    exp.samples.push_back({csv::parse_double(row[tau], "tau_z_Nmm"),
                           csv::parse_double(row[dth], "dtheta_z_deg")});
  }
  return exp;
}

void write_torsion_csv(const std::filesystem::path& path,
                       const TorsionExperiment& experiment) {
  csv::Table t;
  t.header = {"tau_z_Nmm", "dtheta_z_deg"};
  for (const TorsionSample& s : experiment.samples) {
    t.rows.push_back({format_double(s.tau_z_Nmm), format_double(s.dtheta_z_deg)});
  }
  csv::write(path, t);
}

std::vector<ForceDeflectionPair> read_pairs_csv(const std::filesystem::path& path) {
  const csv::Table t = csv::read(path);
  const auto f = static_cast<std::size_t>(t.require_column("F_N", path.string()));
  const auto d = static_cast<std::size_t>(t.require_column("dL_um", path.string()));
  std::vector<ForceDeflectionPair> pairs;
  pairs.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    pairs.push_back({csv::parse_double(row[f], "F_N"),
                     csv::parse_double(row[d], "dL_um")});
  }
  return pairs;
}

void write_pairs_csv(const std::filesystem::path& path,
                     std::span<const ForceDeflectionPair> pairs) {
  csv::Table t;
  t.header = {"F_N", "dL_um"};
  for (const ForceDeflectionPair& p : pairs) {
    t.rows.push_back({format_double(p.force_N), format_double(p.deflection_um)});
  }
  csv::write(path, t);
}

bench::GridLog read_grid_log_csv(const std::filesystem::path& path) {
  const csv::Table t = csv::read(path);
  const std::string f = path.string();
  const auto id = static_cast<std::size_t>(t.require_column("target_id", f));
  const auto cx = static_cast<std::size_t>(t.require_column("cx_mm", f));
  const auto cy = static_cast<std::size_t>(t.require_column("cy_mm", f));
  const auto cz = static_cast<std::size_t>(t.require_column("cz_mm", f));
  const auto pl = static_cast<std::size_t>(t.require_column("plane", f));
  const auto m1 = static_cast<std::size_t>(t.require_column("m1_um", f));
  const auto m2 = static_cast<std::size_t>(t.require_column("m2_um", f));
  const auto rp = static_cast<std::size_t>(t.require_column("repeat", f));

  bench::GridLog log;
  log.records.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    bench::GridRecord rec;
    rec.target_id = row[id];
    rec.commanded_mm = {csv::parse_double(row[cx], "cx_mm"),
                        csv::parse_double(row[cy], "cy_mm"),
                        csv::parse_double(row[cz], "cz_mm")};
    rec.plane = plane_from_string(row[pl], f);
    rec.m1_um = csv::parse_double(row[m1], "m1_um");
    rec.m2_um = csv::parse_double(row[m2], "m2_um");
    rec.repeat = static_cast<int>(csv::parse_long(row[rp], "repeat"));
    log.records.push_back(std::move(rec));
  }
  return log;
}

void write_grid_log_csv(const std::filesystem::path& path,
                        const bench::GridLog& log) {
  csv::Table t;
  t.header = {"target_id", "cx_mm", "cy_mm", "cz_mm",
              "plane",     "m1_um", "m2_um", "repeat"};
  for (const bench::GridRecord& r : log.records) {
    t.rows.push_back({r.target_id, format_double(r.commanded_mm.x()),
                      format_double(r.commanded_mm.y()),
                      format_double(r.commanded_mm.z()), plane_to_string(r.plane),
                      format_double(r.m1_um), format_double(r.m2_um),
                      std::to_string(r.repeat)});
  }
  csv::write(path, t);
}

bench::ForceDeflectionLog read_trace_csv(const std::filesystem::path& path) {
  const csv::Table t = csv::read(path);
  const std::string f = path.string();
  const auto ts = static_cast<std::size_t>(t.require_column("t_s", f));
  const std::array<std::size_t, 3> fc{
      static_cast<std::size_t>(t.require_column("fx_N", f)),
      static_cast<std::size_t>(t.require_column("fy_N", f)),
      static_cast<std::size_t>(t.require_column("fz_N", f))};
  const std::array<std::size_t, 3> dc{
      static_cast<std::size_t>(t.require_column("dx_um", f)),
      static_cast<std::size_t>(t.require_column("dy_um", f)),
      static_cast<std::size_t>(t.require_column("dz_um", f))};

  bench::ForceDeflectionLog log;
  for (const auto& row : t.rows) {
    log.t_s.push_back(csv::parse_double(row[ts], "t_s"));
    log.force_N.emplace_back(csv::parse_double(row[fc[0]], "fx_N"),
                             csv::parse_double(row[fc[1]], "fy_N"),
                             csv::parse_double(row[fc[2]], "fz_N"));
    log.deflection_um.emplace_back(csv::parse_double(row[dc[0]], "dx_um"),
                                   csv::parse_double(row[dc[1]], "dy_um"),
                                   csv::parse_double(row[dc[2]], "dz_um"));
  }
  return log;
}

void write_trace_csv(const std::filesystem::path& path,
                     const bench::ForceDeflectionLog& log) {
  csv::Table t;
  t.header = {"t_s", "fx_N", "fy_N", "fz_N", "dx_um", "dy_um", "dz_um"};
  for (std::size_t i = 0; i < log.t_s.size(); ++i) {
    t.rows.push_back({format_double(log.t_s[i]),
                      format_double(log.force_N[i].x()),
                      format_double(log.force_N[i].y()),
                      format_double(log.force_N[i].z()),
                      format_double(log.deflection_um[i].x()),
                      format_double(log.deflection_um[i].y()),
                      format_double(log.deflection_um[i].z())});
  }
  csv::write(path, t);
}

void write_sweep_csv(const std::filesystem::path& path,
                     const SweepResult& result) {
  csv::Table t;
  t.header = {"L",   "w",       "psi",        "r_p",
              "r_b", "feasible", "violations", "gci",
              "tc_avg", "max_travel_mm", "max_swing_deg"};
  for (const SweepEntry& e : result.entries) {
    const DeltaParams& p = e.params;
    const DesignScore& s = e.score;
    std::vector<std::string> names;
    names.reserve(s.violations.size());
    for (const Violation& v : s.violations) names.push_back(v.name);
    t.rows.push_back(
        {format_double(p.link_length), format_double(p.leg_width),
         format_double(units::rad_to_deg(p.offset_angle)),
         format_double(p.platform_radius), format_double(p.base_radius),
         s.feasible ? "true" : "false", join(names, ';'),
         s.gci ? format_double(*s.gci) : "",
         s.avg_torsional_compliance ? format_double(*s.avg_torsional_compliance)
                                    : "",
         s.max_travel_mm ? format_double(*s.max_travel_mm) : "",
         s.max_swing_deg ? format_double(*s.max_swing_deg) : ""});
  }
  csv::write(path, t);
}

std::vector<SweepRow> read_sweep_rows(const std::filesystem::path& path) {
  const csv::Table t = csv::read(path);
  const std::string f = path.string();
  const auto col = [&](const char* name) {
    return static_cast<std::size_t>(t.require_column(name, f));
  };
  const auto l = col("L"), w = col("w"), psi = col("psi"), rp = col("r_p"),
             rb = col("r_b"), fe = col("feasible"), vi = col("violations"),
             g = col("gci"), tc = col("tc_avg"), tr = col("max_travel_mm"),
             sw = col("max_swing_deg");

  const auto opt = [](const std::string& cell,
                      const char* ctx) -> std::optional<double> {
    if (cell.empty()) return std::nullopt;
    return csv::parse_double(cell, ctx);
  };

  std::vector<SweepRow> rows;
  rows.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    SweepRow r;
    r.link_length = csv::parse_double(row[l], "L");
    r.leg_width = csv::parse_double(row[w], "w");
    r.offset_angle_deg = csv::parse_double(row[psi], "psi");
    r.platform_radius = csv::parse_double(row[rp], "r_p");
    r.base_radius = csv::parse_double(row[rb], "r_b");
    if (row[fe] == "true") {
      r.feasible = true;
    } else if (row[fe] == "false") {
      r.feasible = false;
    } else {
      throw InputError(f + ": feasible must be true/false, got '" + row[fe] + "'");
    }
    if (!row[vi].empty()) {
      std::size_t begin = 0;
      while (begin <= row[vi].size()) {
        const std::size_t semi = row[vi].find(';', begin);
        if (semi == std::string::npos) {
          r.violations.push_back(row[vi].substr(begin));
          break;
        }
        r.violations.push_back(row[vi].substr(begin, semi - begin));
        begin = semi + 1;
      }
    }
    r.gci = opt(row[g], "gci");
    r.tc_avg = opt(row[tc], "tc_avg");
    r.max_travel_mm = opt(row[tr], "max_travel_mm");
    r.max_swing_deg = opt(row[sw], "max_swing_deg");
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<std::filesystem::path> emit_plot_data(
    const PlotData& data, std::string_view kind,
    const std::filesystem::path& out_dir) {
  std::vector<std::filesystem::path> written;
  if (kind == "sweep") {
    if (data.sweep == nullptr) {
      throw DomainError("plot kind 'sweep' needs a sweep result");
    }
    const SweepResult& sweep = *data.sweep;

    // One slice file per leg-width value, rows ordered by psi then L,
    // feasible (scored) designs only.
    std::map<double, std::vector<const SweepEntry*>> by_width;
    for (const SweepEntry& e : sweep.entries) {
      by_width[e.params.leg_width].push_back(&e);
    }
    for (auto& [width, entries] : by_width) {
      std::stable_sort(entries.begin(), entries.end(),
                       [](const SweepEntry* a, const SweepEntry* b) {
                         const double pa = a->params.offset_angle;
                         const double pb = b->params.offset_angle;
                         if (pa != pb) return pa < pb;
                         return a->params.link_length < b->params.link_length;
                       });
      csv::Table t;
      t.header = {"psi_deg", "L_mm", "gci", "tc_avg"};
      for (const SweepEntry* e : entries) {
        if (!e->score.gci || !e->score.avg_torsional_compliance) continue;
        t.rows.push_back(
            {format_double(units::rad_to_deg(e->params.offset_angle)),
             format_double(e->params.link_length), format_double(*e->score.gci),
             format_double(*e->score.avg_torsional_compliance)});
      }
      char name[48];
      std::snprintf(name, sizeof(name), "fig_gci_tc_w%g.csv", width);
      const std::filesystem::path path = out_dir / name;
      csv::write(path, t,
                 "workspace metrics per design at fixed leg width; "
                 "feasible designs only");
      written.push_back(path);
    }
    return written;
  }
  if (kind == "fit") {
    if (data.fit == nullptr) {
      throw DomainError("plot kind 'fit' needs a fit report");
    }
    csv::Table scatter;
    scatter.header = {"F_N", "dL_um"};
    double fmin = std::numeric_limits<double>::infinity(), fmax = 0.0;
    for (const ForceDeflectionPair& p : data.pairs) {
      const double fm = std::abs(p.force_N);
      scatter.rows.push_back(
          {format_double(fm), format_double(std::abs(p.deflection_um))});
      if (fm > 0.0) {
        fmin = std::min(fmin, fm);
        fmax = std::max(fmax, fm);
      }
    }
    const std::filesystem::path scatter_path = out_dir / "fit_scatter.csv";
    csv::write(scatter_path, scatter, "observed |force| vs |deflection| pairs");
    written.push_back(scatter_path);

    csv::Table curve;
    curve.header = {"F_N", "dL_um"};
    if (fmax > 0.0 && std::isfinite(fmin)) {
      for (int i = 0; i < 100; ++i) {
        const double fv = fmin + (fmax - fmin) * i / 99.0;
        curve.rows.push_back(
            {format_double(fv), format_double(data.fit->law.deflection_um(fv))});
      }
    }
    const std::filesystem::path curve_path = out_dir / "fit_curve.csv";
    csv::write(curve_path, curve, "identified law sampled over the data range");
    written.push_back(curve_path);
    return written;
  }
  throw DomainError("unknown plot kind '" + std::string(kind) +
                    "' (expected 'sweep' or 'fit')");
}

}  // namespace deltakit::io
