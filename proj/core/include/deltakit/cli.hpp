#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "deltakit/config.hpp"

namespace deltakit::cli {

/// Process exit codes, one per error class.
enum class ExitCode : int {
  ok = 0,
  usage = 1,       // unknown subcommand / bad flags
  config = 2,      // configuration parse or validation failure
  input = 3,       // missing or malformed input data
  singular = 4,    // numerical singularity
  infeasible = 5,  // unreachable pose / infeasible request
};

/// One fully resolved invocation of a subcommand.
struct Request {
  std::string subcommand;
  RunConfig config;

  std::optional<Vec3> pose_mm;              // ik
  std::optional<JointPositions> joints_mm;  // fk
  Vec3 force_N = Vec3::Zero();              // deflect
  Vec3 torque_Nm = Vec3::Zero();            // deflect (N·m at the interface)
  std::optional<std::filesystem::path> input;  // reduce / fit / bench-*
  double nominal_step_mm = 5.0;             // bench-accuracy
  int threads = 0;                          // sweep parallelism hint
  bool stamp = false;  // add a provenance timestamp to the summary
};

/// Artifacts of one run: the machine-readable summary (JSON text, also
/// written to <out_dir>/summary.json) and every file the run produced.
struct Report {
  std::string summary_json;
  std::vector<std::filesystem::path> artifacts;
};

/// Runs one subcommand: ik, fk, gci, deflect, reduce, fit, sweep,
/// bench-accuracy, bench-repeat, bench-compliance. Writes artifacts under
/// the config's out_dir. Throws the module error types; main() maps them to
/// exit codes via exit_code_for.
Report dispatch(const Request& request);

ExitCode exit_code_for(const std::exception& error);

/// Full command-line entry point (argument parsing, dispatch, error
/// reporting). Returns the process exit code.
int run(int argc, const char* const* argv);

}  // namespace deltakit::cli
