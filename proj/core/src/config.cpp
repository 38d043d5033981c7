#include "deltakit/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "deltakit/io.hpp"

namespace deltakit {

namespace {

using json = nlohmann::ordered_json;

/// Collects every problem before throwing so a bad config reports all of its
/// defects at once.
struct Issues {
  std::vector<std::string> messages;

  void add(const std::string& msg) { messages.push_back(msg); }
  void raise_if_any() const {
    if (messages.empty()) return;
    std::string all = "invalid configuration:";
    for (const std::string& m : messages) all += "\n  - " + m;
    throw ConfigError(all);
  }
};

double number_at(const json& obj, const char* key, double fallback, Issues& issues,
                 const std::string& scope) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) {
    issues.add(scope + "." + key + ": expected a number");
    return fallback;
  }
  return obj[key].get<double>();
}

void check_known_keys(const json& obj, std::initializer_list<const char*> known,
                      Issues& issues, const std::string& scope) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool ok = false;
    for (const char* k : known) {
      if (key == k) { ok = true; break; }
    }
    if (!ok) issues.add(scope + ": unknown key '" + key + "'");
  }
}

GridRange range_at(const json& obj, const char* key, const GridRange& fallback,
                   Issues& issues, const std::string& scope) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj[key];
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() ||
      !v[1].is_number() || !v[2].is_number()) {
    issues.add(scope + "." + key + ": expected [start, step, stop]");
    return fallback;
  }
  return GridRange{v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

std::array<double, 3> triple_at(const json& obj, const char* key,
                                const std::array<double, 3>& fallback,
                                Issues& issues, const std::string& scope) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj[key];
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() ||
      !v[1].is_number() || !v[2].is_number()) {
    issues.add(scope + "." + key + ": expected 3 numbers");
    return fallback;
  }
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

void require_positive(double v, const char* what, Issues& issues) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    issues.add(std::string(what) + ": must be positive, got " +
               std::to_string(v));
  }
}

RunConfig parse_json(const json& root, const std::filesystem::path& base_dir) {
  Issues issues;
  check_known_keys(root,
                   {"design", "grid", "workspace", "law", "tau_z_ref_Nm",
                    "weights", "constraints", "rail_azimuths_deg", "out_dir"},
                   issues, "config");

  RunConfig cfg = RunConfig{};
  const bool has_design = root.contains("design");
  const bool has_grid = root.contains("grid");
  if (has_design && has_grid) {
    issues.add("config: give either 'design' or 'grid', not both");
  }

  if (has_design) {
    cfg.grid.reset();
    const json& d = root["design"];
    if (!d.is_object()) {
      issues.add("design: expected an object");
    } else {
      check_known_keys(d,
                       {"link_length_mm", "leg_width_mm", "offset_angle_deg",
                        "sr_joint_radius_mm"},
                       issues, "design");
      DesignSpec spec;
      spec.link_length = number_at(d, "link_length_mm", spec.link_length, issues,
                                   "design");
      spec.leg_width = number_at(d, "leg_width_mm", spec.leg_width, issues,
                                 "design");
      spec.offset_angle_deg = number_at(d, "offset_angle_deg",
                                        spec.offset_angle_deg, issues, "design");
      spec.sr_joint_radius = number_at(d, "sr_joint_radius_mm",
                                       spec.sr_joint_radius, issues, "design");
      require_positive(spec.link_length, "design.link_length_mm", issues);
      require_positive(spec.leg_width, "design.leg_width_mm", issues);
      require_positive(spec.sr_joint_radius, "design.sr_joint_radius_mm", issues);
      if (!(spec.offset_angle_deg > 0.0 && spec.offset_angle_deg < 90.0)) {
        issues.add("design.offset_angle_deg: must lie in (0, 90)");
      }
      cfg.design = spec;
    }
  } else if (has_grid) {
    const json& g = root["grid"];
    if (!g.is_object()) {
      issues.add("grid: expected an object");
    } else {
      check_known_keys(g,
                       {"link_length_mm", "leg_width_mm", "offset_angle_deg",
                        "sr_joint_radius_mm"},
                       issues, "grid");
      ParameterGrid grid;
      grid.link_length = range_at(g, "link_length_mm", grid.link_length, issues,
                                  "grid");
      grid.leg_width = range_at(g, "leg_width_mm", grid.leg_width, issues, "grid");
      grid.offset_angle_deg = range_at(g, "offset_angle_deg",
                                       grid.offset_angle_deg, issues, "grid");
      grid.sr_joint_radius = number_at(g, "sr_joint_radius_mm",
                                       grid.sr_joint_radius, issues, "grid");
      require_positive(grid.sr_joint_radius, "grid.sr_joint_radius_mm", issues);
      const auto check_range = [&](const char* name, const GridRange& r) {
        if (!(r.step > 0.0) || !(r.start <= r.stop)) {
          issues.add(std::string("grid.") + name +
                     ": needs positive step and start <= stop");
        }
      };
      check_range("link_length_mm", grid.link_length);
      check_range("leg_width_mm", grid.leg_width);
      check_range("offset_angle_deg", grid.offset_angle_deg);
      cfg.grid = grid;
    }
  }

  if (root.contains("workspace")) {
    const json& w = root["workspace"];
    if (!w.is_object()) {
      issues.add("workspace: expected an object");
    } else {
      check_known_keys(w, {"diameter_mm", "height_mm", "center_mm", "step_mm"},
                       issues, "workspace");
      cfg.workspace.diameter = number_at(w, "diameter_mm",
                                         cfg.workspace.diameter, issues,
                                         "workspace");
      cfg.workspace.height = number_at(w, "height_mm", cfg.workspace.height,
                                       issues, "workspace");
      const auto c = triple_at(w, "center_mm",
                               {cfg.workspace.center.x(), cfg.workspace.center.y(),
                                cfg.workspace.center.z()},
                               issues, "workspace");
      cfg.workspace.center = Vec3(c[0], c[1], c[2]);
      cfg.workspace.step = number_at(w, "step_mm", cfg.workspace.step, issues,
                                     "workspace");
      require_positive(cfg.workspace.diameter, "workspace.diameter_mm", issues);
      require_positive(cfg.workspace.height, "workspace.height_mm", issues);
      require_positive(cfg.workspace.step, "workspace.step_mm", issues);
      if (cfg.workspace.step >
          std::min(cfg.workspace.diameter, cfg.workspace.height)) {
        issues.add("workspace.step_mm: exceeds the cylinder extents");
      }
    }
  }

  if (root.contains("law")) {
    const json& l = root["law"];
    if (!l.is_object()) {
      issues.add("law: expected an object");
    } else {
      check_known_keys(l, {"kind", "a", "b", "c", "fit_from"}, issues, "law");
      if (l.contains("fit_from")) {
        if (!l["fit_from"].is_string()) {
          issues.add("law.fit_from: expected a path string");
        } else {
          std::filesystem::path p = l["fit_from"].get<std::string>();
          if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
          if (!std::filesystem::exists(p)) {
            issues.add("law.fit_from: file does not exist: " + p.string());
          }
          cfg.law.fit_from = p;
        }
      } else {
        const std::string kind =
            l.contains("kind") && l["kind"].is_string()
                ? l["kind"].get<std::string>()
                : "power";
        try {
          if (kind == "power") {
            cfg.law.law = ComplianceLaw::power(
                number_at(l, "a", 3.7, issues, "law"),
                number_at(l, "b", 0.71, issues, "law"));
          } else if (kind == "linear") {
            cfg.law.law =
                ComplianceLaw::linear(number_at(l, "c", 1.0, issues, "law"));
          } else {
            issues.add("law.kind: expected 'power' or 'linear', got '" + kind +
                       "'");
          }
        } catch (const DomainError& e) {
          issues.add(std::string("law: ") + e.what());
        }
      }
    }
  }

  cfg.tau_z_ref_Nm = number_at(root, "tau_z_ref_Nm", cfg.tau_z_ref_Nm, issues,
                               "config");
  if (cfg.tau_z_ref_Nm == 0.0 || !std::isfinite(cfg.tau_z_ref_Nm)) {
    issues.add("tau_z_ref_Nm: must be a non-zero torque");
  }

  if (root.contains("weights")) {
    const json& w = root["weights"];
    if (!w.is_object()) {
      issues.add("weights: expected an object");
    } else {
      check_known_keys(w, {"gci", "compliance"}, issues, "weights");
      cfg.weights.gci = number_at(w, "gci", cfg.weights.gci, issues, "weights");
      cfg.weights.compliance = number_at(w, "compliance", cfg.weights.compliance,
                                         issues, "weights");
      if (!(cfg.weights.gci >= 0.0) || !(cfg.weights.compliance >= 0.0) ||
          std::abs(cfg.weights.gci + cfg.weights.compliance - 1.0) > 1e-9) {
        issues.add("weights: must be non-negative and sum to 1");
      }
    }
  }

  if (root.contains("constraints")) {
    const json& c = root["constraints"];
    if (!c.is_object()) {
      issues.add("constraints: expected an object");
    } else {
      check_known_keys(c, {"ring_clearance_min_mm", "travel_max_mm",
                           "swing_max_deg"},
                       issues, "constraints");
      cfg.constraints.ring_clearance_min_mm =
          number_at(c, "ring_clearance_min_mm",
                    cfg.constraints.ring_clearance_min_mm, issues, "constraints");
      cfg.constraints.travel_max_mm = number_at(
          c, "travel_max_mm", cfg.constraints.travel_max_mm, issues,
          "constraints");
      cfg.constraints.swing_max_deg = number_at(
          c, "swing_max_deg", cfg.constraints.swing_max_deg, issues,
          "constraints");
    }
  }

  cfg.rail_azimuths_deg = triple_at(root, "rail_azimuths_deg",
                                    cfg.rail_azimuths_deg, issues, "config");

  if (root.contains("out_dir")) {
    if (!root["out_dir"].is_string()) {
      issues.add("out_dir: expected a string");
    } else {
      cfg.out_dir = root["out_dir"].get<std::string>();
    }
  }

  if (cfg.grid) cfg.grid->rail_azimuths_deg = cfg.rail_azimuths_deg;
  issues.raise_if_any();
  return cfg;
}

}  // namespace

RunConfig default_config() { return RunConfig{}; }

RunConfig parse_config_text(std::string_view json_text,
                            const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");
  return parse_json(root, base_dir);
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.parent_path());
}

std::string dump_config(const RunConfig& config) {
  json root;
  if (config.design) {
    root["design"] = {{"link_length_mm", config.design->link_length},
                      {"leg_width_mm", config.design->leg_width},
                      {"offset_angle_deg", config.design->offset_angle_deg},
                      {"sr_joint_radius_mm", config.design->sr_joint_radius}};
  }
  if (config.grid) {
    const auto range = [](const GridRange& r) {
      return json::array({r.start, r.step, r.stop});
    };
    root["grid"] = {{"link_length_mm", range(config.grid->link_length)},
                    {"leg_width_mm", range(config.grid->leg_width)},
                    {"offset_angle_deg", range(config.grid->offset_angle_deg)},
                    {"sr_joint_radius_mm", config.grid->sr_joint_radius}};
  }
  root["workspace"] = {
      {"diameter_mm", config.workspace.diameter},
      {"height_mm", config.workspace.height},
      {"center_mm", json::array({config.workspace.center.x(),
                                 config.workspace.center.y(),
                                 config.workspace.center.z()})},
      {"step_mm", config.workspace.step}};
  if (config.law.fit_from) {
    root["law"] = {{"fit_from", config.law.fit_from->string()}};
  } else if (config.law.law.kind == ComplianceLaw::Kind::power) {
    root["law"] = {{"kind", "power"}, {"a", config.law.law.a},
                   {"b", config.law.law.b}};
  } else {
    root["law"] = {{"kind", "linear"}, {"c", config.law.law.c}};
  }
  root["tau_z_ref_Nm"] = config.tau_z_ref_Nm;
  root["weights"] = {{"gci", config.weights.gci},
                     {"compliance", config.weights.compliance}};
  root["constraints"] = {
      {"ring_clearance_min_mm", config.constraints.ring_clearance_min_mm},
      {"travel_max_mm", config.constraints.travel_max_mm},
      {"swing_max_deg", config.constraints.swing_max_deg}};
  root["rail_azimuths_deg"] = json::array({config.rail_azimuths_deg[0],
                                           config.rail_azimuths_deg[1],
                                           config.rail_azimuths_deg[2]});
  root["out_dir"] = config.out_dir;
  return root.dump(2) + "\n";
}

ComplianceLaw resolve_law(const LawSpec& law) {
  if (!law.fit_from) return law.law;
  const std::vector<ForceDeflectionPair> pairs = io::read_pairs_csv(*law.fit_from);
  return fit_compliance_law(pairs).law;
}

DeltaParams make_params(const DesignSpec& design,
                        const std::array<double, 3>& rail_azimuths_deg) {
  return derive_radii(design.link_length, design.leg_width,
                      design.offset_angle_deg, design.sr_joint_radius,
                      rail_azimuths_deg);
}

}  // namespace deltakit
