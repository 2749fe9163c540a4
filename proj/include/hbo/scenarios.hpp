#pragma once
// Scenario runner: executes a configured experiment, writes its artifacts
// (resolved config, diagnostics CSV, plot data, JSON summary with one entry
// per pass/fail metric), and reports the outcome through the exit code.
#include "hbo/config.hpp"

#include <filesystem>
#include <ostream>
#include <utility>
#include <vector>

namespace hbo {

// Output directory: $HBO_OUTPUT_ROOT (when set) joined with cfg.output_dir.
std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg);

// Two-column plot data, "# <header>" first line, %.17g rows.
// Throws std::invalid_argument on an empty series.
void emit_plot_data(const std::filesystem::path& path, const std::string& header,
                    const std::vector<std::pair<double, double>>& series);

// Runs the scenario named by cfg, writing artifacts under resolve_output_dir.
// Returns 0 when every metric passes, 1 when one fails, 3 on solver blow-up
// (a partial summary is still written). Progress goes to log.
int run_scenario(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace hbo
