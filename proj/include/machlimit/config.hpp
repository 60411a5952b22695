#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "machlimit/compressible.hpp"
#include "machlimit/sweep.hpp"

namespace machlimit {

inline constexpr const char* kToolVersion = "0.1.0";

// Single-run configuration (CLI `run`).
struct RunConfig {
  std::string mode = "compressible";  // or "incompressible"
  Grid grid;
  EquationOfState eos;
  BackgroundDeformation fbar = BackgroundDeformation::defaults(2);
  double eps = 0.5;
  double cfl = 0.4;
  double t_end = 0.5;
  Preparedness prepared = Preparedness::Ill;
  unsigned long long seed = 1234;
  int snapshot_stride = 16;
  int history_depth = 5;
  double boundary_tolerance = 1e-12;
  bool clean_F = false;
  int n_out = 8;
  DataParams data;

  bool wavepacket_enabled = false;
  double wavepacket_tau_max = 4.0;
  int wavepacket_n_tau = 128;

  CompressibleConfig solver_config() const;
  void validate() const;
};

// Parses and validates a JSON config file.  Unknown keys are rejected,
// defaults are materialized, cross-field checks run; errors carry the key
// name or the line/column of the syntax error.
RunConfig parse_run_config(const std::filesystem::path& path);
SweepConfig parse_sweep_config(const std::filesystem::path& path);

// Resolved-config JSON (all defaults filled); re-parsing it yields the same
// configuration.
std::string dump_run_config(const RunConfig& cfg);
std::string dump_sweep_config(const SweepConfig& cfg);

RunConfig parse_run_config_str(const std::string& text);
SweepConfig parse_sweep_config_str(const std::string& text);

// Written atomically at the end of a CLI invocation.
struct RunManifest {
  int schema_version = 1;
  std::string tool_version = kToolVersion;
  std::string command;
  std::string resolved_config;  // JSON text
  std::string started_utc;
  std::string finished_utc;
  std::vector<std::string> outputs;
  std::vector<std::pair<std::string, bool>> checks;
  std::string run_hash;

  void write(const std::filesystem::path& path) const;
};

std::string utc_now();

}  // namespace machlimit
