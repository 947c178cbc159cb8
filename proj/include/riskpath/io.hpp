#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "riskpath/env.hpp"
#include "riskpath/planner.hpp"
#include "riskpath/sim.hpp"

namespace riskpath {

// Environment document:
//   { "nodes": <count> | [ {"label": str, "xy": [x, y]}, ... ],
//     "risk_table": { "<Class>": [p_success, p_retry], ... },   (optional)
//     "edges": [ [a, b, distance, "<Class>"], ... ] }
// Unknown fields are rejected. Without a risk_table the tool defaults apply.

EnvironmentGraph parse_environment(std::string_view json_text);
EnvironmentGraph load_environment_file(const std::filesystem::path& path);
/// Canonical document; parse_environment(save_environment(g)) == g.
std::string save_environment(const EnvironmentGraph& graph);

/// The bundled 30-node care-home environment.
std::string_view default_environment_json();
std::shared_ptr<const EnvironmentGraph> default_environment();

// Mission document:
//   { "start": <node> | "random", "tasks": [...], "end": <node>,
//     "safe_locations": [...], "threshold": p, "hold_limit": n }
// safe_locations, threshold (0.9) and hold_limit (10) are optional.

MissionSpec parse_mission(std::string_view json_text, const EnvironmentGraph& graph);
MissionSpec load_mission_file(const std::filesystem::path& path, const EnvironmentGraph& graph);

/// Surveillance mission of the case study on the default environment.
MissionSpec case_study_mission();

// Sweep configuration document:
//   { "environment": <path> | "default", "mission": <path> | "case-study",
//     "heat": {"path_heat": h, "neighbor_heat": h, "neighbor_reach": n},
//     "threshold": p, "hold_limit": n, "redirect_after_holds": n,
//     "max_steps": n, "levels": [...], "episodes_per_level": n, "seed": s,
//     "workers": n }
// Only "environment" and "mission" are required; relative paths resolve
// against `base_dir`. threshold/hold_limit override the mission file.

SweepConfig parse_sweep_config(std::string_view json_text,
                               const std::filesystem::path& base_dir);
SweepConfig load_sweep_config_file(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
/// Writes via a temporary sibling and rename, so readers never observe a
/// partially written file.
void write_text_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace riskpath
