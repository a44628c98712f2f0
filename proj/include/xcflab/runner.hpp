#pragma once

// Run configuration and the scenario commands behind the CLI.

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"
#include "xcflab/flow.hpp"
#include "xcflab/frame.hpp"
#include "xcflab/grid.hpp"

namespace xcf {

enum class Backend { Grid, Frame };

struct RunConfig {
  Backend backend = Backend::Grid;
  // grid backend
  MetricGrid grid;  // initial data, built from family + grid params or a snapshot
  // frame backend
  FrameMetric frame;

  FlowSpec flow;
  double t_end = 0.0;
  std::optional<double> dt, cfl;
  long snapshot_cadence = 0;

  std::string monitor_csv, snapshot_dir;
  std::array<int, 3> path_order{0, 1, 2};
  std::uint64_t seed = 0;
};

/// Throws ConfigError whose message names the offending field.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

struct RunOutcome {
  RunStatus status = RunStatus::Completed;
  double stop_time = 0.0;
  long rows = 0;
  std::string status_line;  // completed | ein-degenerate(t=…) | cfl-stall
};

/// Writes the monitor CSV (if configured) and snapshots (if a directory is configured).
/// Grid monitors are only evaluated when a CSV is requested.
RunOutcome execute_run(const RunConfig& c);

/// Embedding of the configured grid at its initial time, as JSON.
nlohmann::json embed_command(const RunConfig& c);
/// Curvature pack over the interior nodes plus algebraic residuals, as JSON.
nlohmann::json curvature_command(const RunConfig& c);

}  // namespace xcf
