#pragma once

#include <string>

#include <json.hpp>

#include "moprox/criticality.hpp"
#include "moprox/ppa.hpp"
#include "moprox/problem_io.hpp"

namespace moprox {

// Run artifacts: JSON for structure, CSV for per-iteration data. CSV uses
// %.17g so replays compare byte-identical.

ordered_json serialize_config(const PpaConfig& cfg);  // throws on callbacks
PpaConfig parse_config(const ordered_json& j);

ordered_json serialize_criticality(const CriticalityCertificate& cert);
ordered_json serialize_fritz_john(const FritzJohnCertificate& cert);
ordered_json serialize_hull_stationarity(const HullStationarityCertificate& cert);
ordered_json serialize_trajectory(const Trajectory& traj,
                                  const std::string& problem_name);

// columns: k, x0.., f0.., step_norm, dominance_defect, fj_residual
std::string trajectory_csv(const Trajectory& traj);

struct RunManifest {
  std::string tool_version;
  std::string timestamp;  // informational, excluded from replay comparison
  std::uint64_t seed = 0;
  ProblemFile problem;    // embedded, replay is self-contained
  PpaConfig config;
  std::string trajectory_json_path;
  std::string trajectory_csv_path;
  std::string certificates_json_path;
};

ordered_json serialize_manifest(const RunManifest& m);
RunManifest parse_manifest(const ordered_json& j);

std::string format_double(double v);  // %.17g
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace moprox
