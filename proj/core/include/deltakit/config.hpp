#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "deltakit/optimizer.hpp"

namespace deltakit {

/// A single design point as it appears at external interfaces (degrees).
struct DesignSpec {
  double link_length = 64.0;       // mm
  double leg_width = 40.0;         // mm
  double offset_angle_deg = 27.0;  // deg
  double sr_joint_radius = 12.4;   // mm
};

/// Either an explicit compliance law or a pairs file to identify one from.
struct LawSpec {
  ComplianceLaw law;  // used when fit_from is absent
  std::optional<std::filesystem::path> fit_from;
};

/// Fully resolved run configuration. Exactly one of {design, grid} is
/// present; with an empty config file the defaults leave the grid present.
struct RunConfig {
  std::optional<DesignSpec> design;
  std::optional<ParameterGrid> grid = ParameterGrid{};
  WorkspaceSpec workspace;
  LawSpec law;
  double tau_z_ref_Nm = 1.0;
  ScalarizationWeights weights;
  ConstraintPolicy constraints;
  std::array<double, 3> rail_azimuths_deg = kDefaultRailAzimuthsDeg;
  std::string out_dir = "out";
};

/// All defaults (identical to parsing an empty JSON object).
RunConfig default_config();

/// Parses and validates a JSON config file. Unknown keys, malformed values
/// and semantic violations are all collected and reported together in one
/// ConfigError. Relative fit_from paths resolve against the config file's
/// directory and must exist at load time.
RunConfig parse_config(const std::filesystem::path& path);

/// Same, for in-memory text (base_dir resolves relative paths).
RunConfig parse_config_text(std::string_view json_text,
                            const std::filesystem::path& base_dir = {});

/// Serializes the resolved config as JSON; parse_config_text(dump_config(c))
/// reproduces c exactly.
std::string dump_config(const RunConfig& config);

/// The law to use for a run: the explicit one, or the one identified from
/// the referenced pairs file.
ComplianceLaw resolve_law(const LawSpec& law);

/// DeltaParams for a single-design config.
DeltaParams make_params(const DesignSpec& design,
                        const std::array<double, 3>& rail_azimuths_deg);

}  // namespace deltakit
