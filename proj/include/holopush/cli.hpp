#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace holopush {

enum ExitCode { kExitPass = 0, kExitStage = 1, kExitClause = 2 };

// Writes config.echo.json, report.json, solver_trace.csv, curves.csv,
// boundary.csv, map.json and (on success) figures/*.svg into out_dir.
int cmd_run(const std::string& config_path, const std::string& out_dir, const std::vector<std::string>& overrides,
            std::ostream& log);

// Prints a fresh report for a stored map to `out`.
int cmd_verify(const std::string& map_path, const std::string& config_path, std::ostream& out, std::ostream& log);

// Regenerates figures/*.svg from the CSVs of a run directory.
int cmd_figures(const std::string& dir, std::ostream& log);

}  // namespace holopush
