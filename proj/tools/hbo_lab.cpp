// Experiment driver. Exit codes: 0 all scenario metrics pass, 1 a metric
// failed, 2 usage or configuration error, 3 solver blow-up.
#include "hbo/config.hpp"
#include "hbo/scenarios.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw hbo::ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Pseudo-spectral laboratory for u_t - R_1(Laplace u) + u u_x1 = 0 on a periodic "
        "box. Output lands under the config's output_dir, prefixed by $HBO_OUTPUT_ROOT "
        "when that is set."};
    app.require_subcommand(1);

    std::string config_path, scenario_name;
    CLI::App* run = app.add_subcommand("run", "execute a scenario and write its artifacts");
    run->add_option("-c,--config", config_path, "INI-style config document");
    run->add_option("-s,--scenario", scenario_name, "registered scenario, default settings");
    CLI::App* validate =
        app.add_subcommand("validate", "parse a config and print its resolved form");
    validate->add_option("-c,--config", config_path, "INI-style config document")->required();
    CLI::App* list = app.add_subcommand("list-scenarios", "print the registered scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (list->parsed()) {
            for (const auto& [name, blurb] : hbo::scenario_catalog())
                std::cout << name << "  " << blurb << "\n";
            return 0;
        }
        if (validate->parsed()) {
            std::cout << hbo::serialize_config(hbo::parse_config(read_file(config_path)));
            return 0;
        }
        if (config_path.empty() == scenario_name.empty()) {
            std::cerr << "run takes exactly one of --config or --scenario\n";
            return 2;
        }
        hbo::ExperimentConfig cfg = config_path.empty()
                                        ? hbo::scenario_defaults(scenario_name)
                                        : hbo::parse_config(read_file(config_path));
        return hbo::run_scenario(cfg, std::cout);
    } catch (const hbo::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
