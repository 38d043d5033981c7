#include "deltakit/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "deltakit/csv.hpp"
#include "deltakit/io.hpp"
#include "deltakit/units.hpp"
#include "deltakit/version.hpp"

namespace deltakit::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kAxes = "xyz";

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

const DesignSpec& require_design(const RunConfig& config, const char* sub) {
  if (!config.design) {
    throw ConfigError(std::string(sub) +
                      " needs a single design (config 'design' block or the "
                      "--L/--w/--psi/--r-sr flags)");
  }
  return *config.design;
}

json params_json(const DeltaParams& p) {
  return {{"link_length_mm", p.link_length},
          {"leg_width_mm", p.leg_width},
          {"offset_angle_deg", units::rad_to_deg(p.offset_angle)},
          {"sr_joint_radius_mm", p.sr_joint_radius},
          {"platform_radius_mm", p.platform_radius},
          {"base_radius_mm", p.base_radius}};
}

json law_json(const ComplianceLaw& law) {
  if (law.kind == ComplianceLaw::Kind::power) {
    return {{"kind", "power"}, {"a", law.a}, {"b", law.b}};
  }
  return {{"kind", "linear"}, {"c", law.c}};
}

struct RunContext {
  const Request& request;
  std::filesystem::path out_dir;
  json results;
  std::vector<std::filesystem::path> artifacts;

  void add_artifact(const std::filesystem::path& p) { artifacts.push_back(p); }
  void add_artifacts(const std::vector<std::filesystem::path>& ps) {
    artifacts.insert(artifacts.end(), ps.begin(), ps.end());
  }
  std::filesystem::path file(const char* name) const { return out_dir / name; }
};

void cmd_ik(RunContext& ctx) {
  const Request& req = ctx.request;
  if (!req.pose_mm) throw ConfigError("ik needs --pose X,Y,Z (mm)");
  const DeltaParams params = make_params(require_design(req.config, "ik"),
                                         req.config.rail_azimuths_deg);
  const JointPositions q = inverse_kinematics(params, *req.pose_mm);

  csv::Table t;
  t.header = {"q1_mm", "q2_mm", "q3_mm"};
  t.rows.push_back({csv::format_double(q[0]), csv::format_double(q[1]),
                    csv::format_double(q[2])});
  csv::write(ctx.file("ik.csv"), t);
  ctx.add_artifact(ctx.file("ik.csv"));

  ctx.results["params"] = params_json(params);
  ctx.results["pose_mm"] = {req.pose_mm->x(), req.pose_mm->y(), req.pose_mm->z()};
  ctx.results["q_mm"] = {q[0], q[1], q[2]};
}

void cmd_fk(RunContext& ctx) {
  const Request& req = ctx.request;
  if (!req.joints_mm) throw ConfigError("fk needs --joints Q1,Q2,Q3 (mm)");
  const DeltaParams params = make_params(require_design(req.config, "fk"),
                                         req.config.rail_azimuths_deg);
  const PlatformPose pose = forward_kinematics(params, *req.joints_mm);

  csv::Table t;
  t.header = {"x_mm", "y_mm", "z_mm"};
  t.rows.push_back({csv::format_double(pose.x()), csv::format_double(pose.y()),
                    csv::format_double(pose.z())});
  csv::write(ctx.file("fk.csv"), t);
  ctx.add_artifact(ctx.file("fk.csv"));

  ctx.results["params"] = params_json(params);
  ctx.results["pose_mm"] = {pose.x(), pose.y(), pose.z()};
}

void cmd_gci(RunContext& ctx) {
  const Request& req = ctx.request;
  const DeltaParams params = make_params(require_design(req.config, "gci"),
                                         req.config.rail_azimuths_deg);
  const std::vector<PlatformPose> poses = sample_workspace(req.config.workspace);

  csv::Table t;
  t.header = {"x_mm", "y_mm", "z_mm", "inv_cond"};
  double sum = 0.0;
  for (const PlatformPose& pose : poses) {
    const double icn = inverse_condition_number(params, pose);
    sum += icn;
    t.rows.push_back({csv::format_double(pose.x()), csv::format_double(pose.y()),
                      csv::format_double(pose.z()), csv::format_double(icn)});
  }
  csv::write(ctx.file("gci_samples.csv"), t);
  ctx.add_artifact(ctx.file("gci_samples.csv"));

  ctx.results["params"] = params_json(params);
  ctx.results["samples"] = poses.size();
  ctx.results["gci"] = sum / static_cast<double>(poses.size());
}

void cmd_deflect(RunContext& ctx) {
  const Request& req = ctx.request;
  const DeltaParams params = make_params(require_design(req.config, "deflect"),
                                         req.config.rail_azimuths_deg);
  const ComplianceLaw law = resolve_law(req.config.law);
  const PlatformPose pose =
      req.pose_mm ? *req.pose_mm : PlatformPose(req.config.workspace.center);
  Wrench wrench;
  wrench.force = req.force_N;
  wrench.torque = req.torque_Nm.unaryExpr(
      [](double t) { return units::newton_m_to_newton_mm(t); });
  const DeflectionResult d = solve_deflection(params, pose, law, wrench);

  csv::Table t;
  t.header = {"dx_um", "dy_um", "dz_um", "rx_deg", "ry_deg", "rz_deg"};
  t.rows.push_back({csv::format_double(d.linear_um.x()),
                    csv::format_double(d.linear_um.y()),
                    csv::format_double(d.linear_um.z()),
                    csv::format_double(d.angular_deg.x()),
                    csv::format_double(d.angular_deg.y()),
                    csv::format_double(d.angular_deg.z())});
  csv::write(ctx.file("deflection.csv"), t);
  ctx.add_artifact(ctx.file("deflection.csv"));

  csv::Table links;
  links.header = {"link", "F_N", "dL_um"};
  for (int k = 0; k < 6; ++k) {
    links.rows.push_back({std::to_string(k + 1),
                          csv::format_double(d.link_forces_N[k]),
                          csv::format_double(d.link_deflections_um[k])});
  }
  csv::write(ctx.file("links.csv"), links);
  ctx.add_artifact(ctx.file("links.csv"));

  ctx.results["params"] = params_json(params);
  ctx.results["law"] = law_json(law);
  ctx.results["pose_mm"] = {pose.x(), pose.y(), pose.z()};
  ctx.results["deflection_um"] = {d.linear_um.x(), d.linear_um.y(),
                                  d.linear_um.z()};
  ctx.results["rotation_deg"] = {d.angular_deg.x(), d.angular_deg.y(),
                                 d.angular_deg.z()};
}

void cmd_reduce(RunContext& ctx) {
  const Request& req = ctx.request;
  if (!req.input) throw ConfigError("reduce needs --input <torsion log csv>");
  const DeltaParams params = make_params(require_design(req.config, "reduce"),
                                         req.config.rail_azimuths_deg);
  const TorsionExperiment exp = io::read_torsion_csv(*req.input);
  const std::vector<ForceDeflectionPair> pairs = reduce_torsion_experiment(
      exp, params, PlatformPose(req.config.workspace.center));
  io::write_pairs_csv(ctx.file("pairs.csv"), pairs);
  ctx.add_artifact(ctx.file("pairs.csv"));

  ctx.results["params"] = params_json(params);
  ctx.results["samples"] = exp.samples.size();
  ctx.results["pairs"] = pairs.size();
}

void cmd_fit(RunContext& ctx) {
  const Request& req = ctx.request;
  if (!req.input) throw ConfigError("fit needs --input <pairs csv>");
  const std::vector<ForceDeflectionPair> pairs = io::read_pairs_csv(*req.input);
  const FitReport fit = fit_compliance_law(pairs);

  io::PlotData plot;
  plot.fit = &fit;
  plot.pairs = pairs;
  ctx.add_artifacts(io::emit_plot_data(plot, "fit", ctx.out_dir));

  ctx.results["law"] = law_json(fit.law);
  ctx.results["r_squared"] = fit.r_squared;
  ctx.results["rms_error_um"] = fit.rms_error_um;
  ctx.results["n_points"] = fit.n_points;
}

void cmd_sweep(RunContext& ctx) {
  const Request& req = ctx.request;
  if (!req.config.grid) {
    throw ConfigError("sweep needs a parameter grid (the default config has one)");
  }
  const ComplianceLaw law = resolve_law(req.config.law);
  SweepOptions options;
  options.threads = req.threads;
  const SweepResult sweep =
      run_sweep(*req.config.grid, req.config.workspace, law,
                req.config.tau_z_ref_Nm, req.config.constraints,
                req.config.weights, options);

  io::write_sweep_csv(ctx.file("sweep.csv"), sweep);
  ctx.add_artifact(ctx.file("sweep.csv"));
  io::PlotData plot;
  plot.sweep = &sweep;
  ctx.add_artifacts(io::emit_plot_data(plot, "sweep", ctx.out_dir));

  std::size_t feasible = 0;
  for (const SweepEntry& e : sweep.entries) {
    if (e.score.feasible) ++feasible;
  }
  ctx.results["designs"] = sweep.entries.size();
  ctx.results["feasible"] = feasible;
  ctx.results["law"] = law_json(law);
  json front = json::array();
  for (std::size_t i : sweep.pareto) {
    const SweepEntry& e = sweep.entries[i];
    json member = params_json(e.params);
    member["gci"] = *e.score.gci;
    member["tc_avg_deg_per_Nm"] = *e.score.avg_torsional_compliance;
    front.push_back(member);
  }
  ctx.results["pareto_front"] = front;
  if (sweep.selected) {
    const SweepEntry& e = sweep.entries[*sweep.selected];
    json sel = params_json(e.params);
    sel["gci"] = *e.score.gci;
    sel["tc_avg_deg_per_Nm"] = *e.score.avg_torsional_compliance;
    ctx.results["selected"] = sel;
  } else {
    ctx.results["warning"] =
        "no feasible design in the grid; front and selection are empty";
  }
}

void cmd_bench_accuracy(RunContext& ctx) {
  const Request& req = ctx.request;
  if (!req.input) throw ConfigError("bench-accuracy needs --input <grid log csv>");
  const bench::GridLog log = io::read_grid_log_csv(*req.input);
  const bench::AccuracyReport report =
      bench::grid_accuracy(log, req.nominal_step_mm);

  csv::Table t;
  t.header = {"motion", "measured", "mean_um", "std_um", "pairs"};
  json cells = json::array();
  for (int m = 0; m < 3; ++m) {
    for (int x = 0; x < 3; ++x) {
      const auto& cell = report.cells[static_cast<std::size_t>(m)]
                                     [static_cast<std::size_t>(x)];
      if (!cell) continue;
      t.rows.push_back({std::string(1, kAxes[m]), std::string(1, kAxes[x]),
                        csv::format_double(cell->mean_um),
                        csv::format_double(cell->std_um),
                        std::to_string(cell->pair_count)});
      cells.push_back({{"motion", std::string(1, kAxes[m])},
                       {"measured", std::string(1, kAxes[x])},
                       {"mean_um", cell->mean_um},
                       {"std_um", cell->std_um},
                       {"pairs", cell->pair_count}});
    }
  }
  csv::write(ctx.file("accuracy.csv"), t);
  ctx.add_artifact(ctx.file("accuracy.csv"));
  ctx.results["nominal_step_mm"] = req.nominal_step_mm;
  ctx.results["cells"] = cells;
}

void cmd_bench_repeat(RunContext& ctx) {
  const Request& req = ctx.request;
  if (!req.input) throw ConfigError("bench-repeat needs --input <grid log csv>");
  const bench::GridLog log = io::read_grid_log_csv(*req.input);
  const bench::RepeatabilityReport report = bench::repeatability(log);

  csv::Table t;
  t.header = {"axis", "repeatability_um"};
  json per_axis;
  for (int axis = 0; axis < 3; ++axis) {
    const auto& value = report.per_axis_um[static_cast<std::size_t>(axis)];
    if (!value) continue;
    t.rows.push_back({std::string(1, kAxes[axis]), csv::format_double(*value)});
    per_axis[std::string(1, kAxes[axis])] = *value;
  }
  csv::write(ctx.file("repeatability.csv"), t);
  ctx.add_artifact(ctx.file("repeatability.csv"));

  ctx.results["repeatability_um"] = per_axis;
  ctx.results["resolution_um"] = report.resolution_um;
  if (!report.skipped_targets.empty()) {
    ctx.results["skipped_targets"] = report.skipped_targets;
  }
}

void cmd_bench_compliance(RunContext& ctx) {
  const Request& req = ctx.request;
  if (!req.input) throw ConfigError("bench-compliance needs --input <trace csv>");
  const bench::ForceDeflectionLog log = io::read_trace_csv(*req.input);
  const bench::TraceCompliance compliance = bench::compliance_from_trace(log);

  csv::Table t;
  t.header = {"axis", "c_um_per_N"};
  json values;
  for (int axis = 0; axis < 3; ++axis) {
    t.rows.push_back(
        {std::string(1, kAxes[axis]),
         csv::format_double(compliance.c_um_per_N[static_cast<std::size_t>(axis)])});
    values[std::string(1, kAxes[axis])] =
        compliance.c_um_per_N[static_cast<std::size_t>(axis)];
  }
  csv::write(ctx.file("compliance.csv"), t);
  ctx.add_artifact(ctx.file("compliance.csv"));
  ctx.results["compliance_um_per_N"] = values;
}

}  // namespace

Report dispatch(const Request& request) {
  RunContext ctx{request, std::filesystem::path(request.config.out_dir), {}, {}};
  std::filesystem::create_directories(ctx.out_dir);

  if (request.subcommand == "ik") {
    cmd_ik(ctx);
  } else if (request.subcommand == "fk") {
    cmd_fk(ctx);
  } else if (request.subcommand == "gci") {
    cmd_gci(ctx);
  } else if (request.subcommand == "deflect") {
    cmd_deflect(ctx);
  } else if (request.subcommand == "reduce") {
    cmd_reduce(ctx);
  } else if (request.subcommand == "fit") {
    cmd_fit(ctx);
  } else if (request.subcommand == "sweep") {
    cmd_sweep(ctx);
  } else if (request.subcommand == "bench-accuracy") {
    cmd_bench_accuracy(ctx);
  } else if (request.subcommand == "bench-repeat") {
    cmd_bench_repeat(ctx);
  } else if (request.subcommand == "bench-compliance") {
    cmd_bench_compliance(ctx);
  } else {
    throw Error("unknown subcommand '" + request.subcommand + "'");
  }

  json summary;
  summary["tool"] = "deltakit";
  summary["version"] = kVersion;
  summary["subcommand"] = request.subcommand;
  if (request.stamp) summary["timestamp"] = iso_timestamp();
  summary["config"] = json::parse(dump_config(request.config));
  summary["results"] = ctx.results;
  json names = json::array();
  for (const std::filesystem::path& p : ctx.artifacts) {
    names.push_back(p.filename().string());
  }
  summary["artifacts"] = names;

  Report report;
  report.summary_json = summary.dump(2) + "\n";
  const std::filesystem::path summary_path = ctx.out_dir / "summary.json";
  {
    std::ofstream out(summary_path, std::ios::trunc);
    if (!out) throw InputError("cannot write " + summary_path.string());
    out << report.summary_json;
  }
  report.artifacts = ctx.artifacts;
  report.artifacts.push_back(summary_path);
  return report;
}

ExitCode exit_code_for(const std::exception& error) {
  if (dynamic_cast<const ConfigError*>(&error)) return ExitCode::config;
  if (dynamic_cast<const InputError*>(&error)) return ExitCode::input;
  if (dynamic_cast<const FitError*>(&error)) return ExitCode::input;
  if (dynamic_cast<const SingularityError*>(&error)) return ExitCode::singular;
  if (dynamic_cast<const ReachabilityError*>(&error)) return ExitCode::infeasible;
  if (dynamic_cast<const DomainError*>(&error)) return ExitCode::config;
  return ExitCode::usage;
}

int run(int argc, const char* const* argv) {
  CLI::App app{"linear-rail delta stage: kinematics, compliance model, "
               "workspace metrics, design sweep and benchtop log reduction"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  app.set_version_flag("--version", kVersion);

  std::string config_path;
  std::string out_dir;
  int threads = 0;
  bool stamp = false;
  double flag_L = 0, flag_w = 0, flag_psi = 0, flag_rsr = 0;
  app.add_option("--config", config_path, "run configuration (JSON)");
  app.add_option("--out-dir", out_dir, "artifact directory (overrides config)");
  app.add_option("--threads", threads,
                 "parallelism hint; never changes results");
  app.add_flag("--stamp", stamp, "add a provenance timestamp to the summary");
  auto* oL = app.add_option("--L", flag_L, "link length, mm (single design)");
  auto* ow = app.add_option("--w", flag_w, "leg width, mm (single design)");
  auto* opsi = app.add_option("--psi", flag_psi, "offset angle, deg (single design)");
  auto* orsr = app.add_option("--r-sr", flag_rsr, "ball-joint radius, mm");

  std::vector<double> pose_vals, joint_vals, force_vals, torque_vals;
  std::string input_path;
  double nominal_step_mm = 5.0;

  CLI::App* ik = app.add_subcommand("ik", "slider heights for a platform position");
  ik->add_option("--pose", pose_vals, "platform position X,Y,Z (mm)")
      ->delimiter(',')
      ->expected(3)
      ->required();
  CLI::App* fk = app.add_subcommand("fk", "platform position for slider heights");
  fk->add_option("--joints", joint_vals, "slider heights Q1,Q2,Q3 (mm)")
      ->delimiter(',')
      ->expected(3)
      ->required();
  app.add_subcommand("gci", "global conditioning index over the workspace");
  CLI::App* deflect =
      app.add_subcommand("deflect", "platform deflection under a wrench");
  deflect->add_option("--force", force_vals, "force FX,FY,FZ (N)")
      ->delimiter(',')
      ->expected(3);
  deflect->add_option("--torque", torque_vals, "torque TX,TY,TZ (N·m)")
      ->delimiter(',')
      ->expected(3);
  deflect->add_option("--pose", pose_vals, "platform position X,Y,Z (mm)")
      ->delimiter(',')
      ->expected(3);
  CLI::App* reduce =
      app.add_subcommand("reduce", "torsion log to per-link force/deflection pairs");
  reduce->add_option("--input", input_path, "torsion log CSV")->required();
  CLI::App* fit = app.add_subcommand("fit", "identify the link compliance law");
  fit->add_option("--input", input_path, "pairs CSV")->required();
  app.add_subcommand("sweep", "exhaustive design optimization over the grid");
  CLI::App* bacc = app.add_subcommand("bench-accuracy", "grid-touch accuracy table");
  bacc->add_option("--input", input_path, "grid log CSV")->required();
  bacc->add_option("--step", nominal_step_mm, "commanded step between targets, mm");
  CLI::App* brep = app.add_subcommand("bench-repeat", "per-axis repeatability");
  brep->add_option("--input", input_path, "grid log CSV")->required();
  CLI::App* bcom =
      app.add_subcommand("bench-compliance", "per-axis compliance from a trace");
  bcom->add_option("--input", input_path, "force/deflection trace CSV")->required();

  for (CLI::App* sub : app.get_subcommands({})) {
    sub->add_option("config", config_path, "run configuration (JSON)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::usage);
  }

  try {
    Request req;
    req.subcommand = app.get_subcommands().front()->get_name();
    req.config = config_path.empty() ? default_config()
                                     : parse_config(config_path);
    if (*oL || *ow || *opsi || *orsr) {
      DesignSpec d = req.config.design.value_or(DesignSpec{});
      if (*oL) d.link_length = flag_L;
      if (*ow) d.leg_width = flag_w;
      if (*opsi) d.offset_angle_deg = flag_psi;
      if (*orsr) d.sr_joint_radius = flag_rsr;
      req.config.design = d;
      req.config.grid.reset();
    }
    if (!out_dir.empty()) req.config.out_dir = out_dir;
    if (pose_vals.size() == 3) {
      req.pose_mm = Vec3(pose_vals[0], pose_vals[1], pose_vals[2]);
    }
    if (joint_vals.size() == 3) {
      req.joints_mm = JointPositions{joint_vals[0], joint_vals[1], joint_vals[2]};
    }
    if (force_vals.size() == 3) {
      req.force_N = Vec3(force_vals[0], force_vals[1], force_vals[2]);
    }
    if (torque_vals.size() == 3) {
      req.torque_Nm = Vec3(torque_vals[0], torque_vals[1], torque_vals[2]);
    }
    if (!input_path.empty()) req.input = input_path;
    req.nominal_step_mm = nominal_step_mm;
    req.threads = threads;
    req.stamp = stamp;

    const Report report = dispatch(req);
    std::cout << report.summary_json;
    return static_cast<int>(ExitCode::ok);
  } catch (const std::exception& e) {
    std::cerr << "deltakit: error: " << e.what() << "\n";
    return static_cast<int>(exit_code_for(e));
  }
}

}  // namespace deltakit::cli
