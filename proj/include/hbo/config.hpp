#pragma once
// Experiment configuration: strict INI-style parsing with per-scenario
// defaults, exact serialization for reproducibility, and the initial-data
// dispatch shared by every scenario.
#include "hbo/fields.hpp"
#include "hbo/solver.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hbo {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InitialData {
    std::string type = "gaussian";  // gaussian | dx1_gaussian | soliton | custom_file
    std::array<double, 3> center{0.0, 0.0, 0.0};
    double width = 1.0;
    double amplitude = 1.0;
    double c = 1.0;    // soliton speed
    double x0 = 0.0;   // soliton offset
    std::string path;  // custom_file source
};

struct ExperimentConfig {
    std::string scenario;
    int d = 2;
    int n = 128;
    double L = 0.0;
    SolverConfig solver;
    InitialData initial_data;
    std::vector<double> decay_exponents;
    std::vector<double> weight_N_list;
    std::uint64_t seed = 1;
    std::string output_dir;
};

// Registered scenario names with one-line descriptions, in listing order.
const std::vector<std::pair<std::string, std::string>>& scenario_catalog();

// Baseline config for a registered scenario; throws ConfigError otherwise.
ExperimentConfig scenario_defaults(const std::string& scenario);

// Strict parse: sections [experiment] [grid] [solver] [initial_data], unknown
// sections/keys and malformed values rejected with line numbers, duplicates
// rejected. Defaults come from the scenario named in the document; solver
// snapshot cadence defaults to about 200 snapshots.
ExperimentConfig parse_config(const std::string& text);

// Inverse of parse_config up to exact field equality (%.17g numerals).
std::string serialize_config(const ExperimentConfig& cfg);

bool config_equal(const ExperimentConfig& a, const ExperimentConfig& b);

// Realizes initial_data on the grid; reads custom_file from disk.
RealField build_initial_data(const ExperimentConfig& cfg, const Grid& g);

}  // namespace hbo
