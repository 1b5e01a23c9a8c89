#pragma once

#include <ostream>

#include "frik/config.hpp"

namespace frik {

/// Process exit codes shared by every command.
enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitNotConverged = 2 };

/// Solves the toolpath in the configured mode(s) and writes
/// trajectory_<mode>.csv, travel.csv and solve_summary.json to out_dir.
int cmdSolve(const RunConfig& config, std::ostream& log);

/// Writes toolpath.json for the configured cone.
int cmdGenerate(const RunConfig& config, std::ostream& log);

/// Workpiece placement sweep; writes workspace.csv and workspace_summary.json.
int cmdWorkspace(const RunConfig& config, std::ostream& log);

/// cmdSolve with both modes and the side-by-side travel report.
int cmdCompare(const RunConfig& config, std::ostream& log);

}  // namespace frik
