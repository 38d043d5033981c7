#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>

#include "deltakit/cli.hpp"
#include "deltakit/io.hpp"
#include "deltakit/kinematics.hpp"

using namespace deltakit;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("deltakit_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

cli::Request base_request(const TempDir& tmp, const std::string& sub) {
  cli::Request req;
  req.subcommand = sub;
  req.config = default_config();
  req.config.design = DesignSpec{};  // the production design
  req.config.grid.reset();
  req.config.out_dir = (tmp.path / sub).string();
  return req;
}

}  // namespace

TEST_CASE("ik and fk dispatch round-trip through files") {
  TempDir tmp;
  cli::Request ik = base_request(tmp, "ik");
  ik.pose_mm = Vec3(5.0, -3.0, 80.0);
  const cli::Report ikr = cli::dispatch(ik);

  const json summary = json::parse(ikr.summary_json);
  CHECK(summary["tool"] == "deltakit");
  CHECK(summary["subcommand"] == "ik");
  CHECK(summary.contains("version"));
  CHECK(summary.contains("config"));
  CHECK(!summary.contains("timestamp"));  // stamp defaults off
  REQUIRE(summary["results"]["q_mm"].size() == 3);

  cli::Request fk = base_request(tmp, "fk");
  fk.joints_mm = JointPositions{summary["results"]["q_mm"][0].get<double>(),
                                summary["results"]["q_mm"][1].get<double>(),
                                summary["results"]["q_mm"][2].get<double>()};
  const cli::Report fkr = cli::dispatch(fk);
  const json fks = json::parse(fkr.summary_json);
  CHECK(fks["results"]["pose_mm"][0].get<double>() ==
        doctest::Approx(5.0).epsilon(1e-9));
  CHECK(fks["results"]["pose_mm"][1].get<double>() ==
        doctest::Approx(-3.0).epsilon(1e-9));
  CHECK(fks["results"]["pose_mm"][2].get<double>() ==
        doctest::Approx(80.0).epsilon(1e-9));

  // Artifacts land in the run directory, summary included.
  CHECK(fs::exists(tmp.path / "ik" / "ik.csv"));
  CHECK(fs::exists(tmp.path / "ik" / "summary.json"));
}

TEST_CASE("deflect with a zero wrench reports zero deflection") {
  TempDir tmp;
  cli::Request req = base_request(tmp, "deflect");
  const cli::Report report = cli::dispatch(req);
  const json summary = json::parse(report.summary_json);
  for (int i = 0; i < 3; ++i) {
    CHECK(summary["results"]["deflection_um"][static_cast<std::size_t>(i)]
              .get<double>() == 0.0);
    CHECK(summary["results"]["rotation_deg"][static_cast<std::size_t>(i)]
              .get<double>() == 0.0);
  }
}

TEST_CASE("reduce then fit recovers the law end to end") {
  TempDir tmp;

  // Forward-simulate a torsion test of the production design.
  const DeltaParams params = make_params(DesignSpec{}, kDefaultRailAzimuthsDeg);
  const ComplianceLaw law = ComplianceLaw::power(3.7, 0.71);
  TorsionExperiment exp;
  for (int i = -12; i <= 12; ++i) {
    if (i == 0) continue;
    Wrench w;
    w.torque = Vec3(0.0, 0.0, 120.0 * i);
    const double dtheta =
        solve_deflection(params, {0.0, 0.0, 0.0}, law, w).angular_deg.z();
    exp.samples.push_back({120.0 * i, dtheta});
  }
  io::write_torsion_csv(tmp.path / "torsion.csv", exp);

  cli::Request reduce = base_request(tmp, "reduce");
  reduce.input = tmp.path / "torsion.csv";
  cli::dispatch(reduce);
  const fs::path pairs_path = tmp.path / "reduce" / "pairs.csv";
  REQUIRE(fs::exists(pairs_path));

  cli::Request fit = base_request(tmp, "fit");
  fit.input = pairs_path;
  const cli::Report fitr = cli::dispatch(fit);
  const json summary = json::parse(fitr.summary_json);
  CHECK(summary["results"]["law"]["a"].get<double>() ==
        doctest::Approx(3.7).epsilon(1e-6));
  CHECK(summary["results"]["law"]["b"].get<double>() ==
        doctest::Approx(0.71).epsilon(1e-6));
  CHECK(summary["results"]["r_squared"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fs::exists(tmp.path / "fit" / "fit_curve.csv"));
}

TEST_CASE("bench subcommands run from files") {
  TempDir tmp;
  bench::GridLog log;
  int id = 0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      bench::GridRecord r;
      r.target_id = "t" + std::to_string(id++);
      r.commanded_mm = {i * 5.0, 0.0, j * 5.0};
      r.plane = bench::CameraPlane::xz;
      r.m1_um = i * 5000.0;
      r.m2_um = j * 5000.0;
      for (int rep = 0; rep < 2; ++rep) {
        r.repeat = rep;
        log.records.push_back(r);
      }
    }
  }
  io::write_grid_log_csv(tmp.path / "grid.csv", log);

  cli::Request acc = base_request(tmp, "bench-accuracy");
  acc.input = tmp.path / "grid.csv";
  acc.nominal_step_mm = 5.0;
  const json asum = json::parse(cli::dispatch(acc).summary_json);
  CHECK(asum["results"]["cells"].size() == 4);
  for (const auto& cell : asum["results"]["cells"]) {
    CHECK(cell["mean_um"].get<double>() == 0.0);
  }

  cli::Request rep = base_request(tmp, "bench-repeat");
  rep.input = tmp.path / "grid.csv";
  const json rsum = json::parse(cli::dispatch(rep).summary_json);
  CHECK(rsum["results"]["repeatability_um"]["x"].get<double>() == 0.0);

  bench::ForceDeflectionLog trace;
  for (int i = 0; i <= 100; ++i) {
    const double f = -6.0 + 14.0 * i / 100.0;
    trace.t_s.push_back(i * 0.05);
    trace.force_N.emplace_back(f, f, f);
    trace.deflection_um.emplace_back(20.0 * f, 270.0 * f, 180.0 * f);
  }
  io::write_trace_csv(tmp.path / "trace.csv", trace);
  cli::Request com = base_request(tmp, "bench-compliance");
  com.input = tmp.path / "trace.csv";
  const json csum = json::parse(cli::dispatch(com).summary_json);
  CHECK(csum["results"]["compliance_um_per_N"]["x"].get<double>() ==
        doctest::Approx(20.0).epsilon(1e-9));
  CHECK(csum["results"]["compliance_um_per_N"]["y"].get<double>() ==
        doctest::Approx(270.0).epsilon(1e-9));
}

TEST_CASE("sweep artifacts are byte-identical across runs and thread counts") {
  TempDir tmp;
  cli::Request req;
  req.subcommand = "sweep";
  req.config = default_config();
  ParameterGrid grid;
  grid.link_length = {78.0, 2.0, 84.0};
  grid.leg_width = {40.0, 5.0, 40.0};
  grid.offset_angle_deg = {26.0, 1.0, 28.0};
  req.config.grid = grid;
  req.config.workspace.step = 10.0;

  req.config.out_dir = (tmp.path / "a").string();
  req.threads = 1;
  const cli::Report a = cli::dispatch(req);
  req.config.out_dir = (tmp.path / "b").string();
  req.threads = 3;
  const cli::Report b = cli::dispatch(req);

  CHECK(slurp(tmp.path / "a" / "sweep.csv") == slurp(tmp.path / "b" / "sweep.csv"));
  // Summaries differ only through out_dir, which we normalize crudely here.
  std::string sa = a.summary_json, sb = b.summary_json;
  const auto scrub = [](std::string s, const std::string& needle) {
    for (std::size_t at = s.find(needle); at != std::string::npos;
         at = s.find(needle, at)) {
      s.erase(at, needle.size());
    }
    return s;
  };
  CHECK(scrub(sa, (tmp.path / "a").string()) ==
        scrub(sb, (tmp.path / "b").string()));

  const json summary = json::parse(a.summary_json);
  CHECK(summary["results"]["designs"] == 12);
}

TEST_CASE("a fully infeasible sweep reports a warning and header-only plots") {
  TempDir tmp;
  cli::Request req;
  req.subcommand = "sweep";
  req.config = default_config();
  ParameterGrid grid;  // short links cannot reach the cylinder at all
  grid.link_length = {30.0, 2.0, 34.0};
  grid.leg_width = {25.0, 5.0, 25.0};
  grid.offset_angle_deg = {20.0, 1.0, 21.0};
  req.config.grid = grid;
  req.config.workspace.step = 10.0;
  req.config.out_dir = (tmp.path / "none").string();
  const cli::Report report = cli::dispatch(req);
  const json summary = json::parse(report.summary_json);
  CHECK(summary["results"]["feasible"] == 0);
  CHECK(summary["results"].contains("warning"));
  CHECK(summary["results"]["pareto_front"].empty());
  // Slice files exist but carry no data rows.
  bool found_slice = false;
  for (const auto& entry : fs::directory_iterator(tmp.path / "none")) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("fig_", 0) == 0) {
      found_slice = true;
      std::ifstream in(entry.path());
      std::string line;
      int data_rows = 0;
      while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#' && line.find("psi_deg") != 0) {
          ++data_rows;
        }
      }
      CHECK(data_rows == 0);
    }
  }
  CHECK(found_slice);
}

TEST_CASE("unknown subcommands and error classes map to exit codes") {
  TempDir tmp;
  cli::Request req = base_request(tmp, "no-such-command");
  CHECK_THROWS_AS(cli::dispatch(req), Error);

  CHECK(cli::exit_code_for(ConfigError("x")) == cli::ExitCode::config);
  CHECK(cli::exit_code_for(InputError("x")) == cli::ExitCode::input);
  CHECK(cli::exit_code_for(FitError("x")) == cli::ExitCode::input);
  CHECK(cli::exit_code_for(SingularityError("x")) == cli::ExitCode::singular);
  CHECK(cli::exit_code_for(ReachabilityError("x")) == cli::ExitCode::infeasible);
  CHECK(cli::exit_code_for(DomainError("x")) == cli::ExitCode::config);
  CHECK(cli::exit_code_for(Error("x")) == cli::ExitCode::usage);
}

TEST_CASE("ik on an unreachable pose surfaces the reachability error") {
  TempDir tmp;
  cli::Request req = base_request(tmp, "ik");
  req.pose_mm = Vec3(500.0, 0.0, 0.0);
  CHECK_THROWS_AS(cli::dispatch(req), ReachabilityError);
}

TEST_CASE("run() parses arguments end to end") {
  TempDir tmp;
  const std::string out = (tmp.path / "cli_out").string();
  const char* argv[] = {"deltakit", "--out-dir", out.c_str(),   "--L", "64",
                        "--w",      "40",        "--psi", "27", "--r-sr",
                        "12.4",     "ik",        "--pose", "0,0,100"};
  CHECK(cli::run(14, argv) == 0);
  CHECK(fs::exists(fs::path(out) / "ik.csv"));

  const char* bad[] = {"deltakit", "bogus"};
  CHECK(cli::run(2, bad) != 0);
}
