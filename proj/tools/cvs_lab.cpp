#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cvs/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"cvs_lab: criticality-based varying stepnumber experiments"};
    app.require_subcommand(1);

    std::string config;
    std::string out_dir = "results";
    std::optional<std::uint64_t> seed;
    auto* run = app.add_subcommand("run", "Run an experiment config (file path or preset name)");
    run->add_option("config", config, "Config JSON file or preset name")->required();
    run->add_option("--out", out_dir, "Output directory")->capture_default_str();
    run->add_option("--seed", seed, "Override the config seed");

    std::string spec;
    auto* plot = app.add_subcommand("plot", "Render a plot spec to SVG");
    plot->add_option("spec", spec, "Plot spec JSON")->required();

    auto* list = app.add_subcommand("list", "List environments, algorithms and presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cvs::cli::kExitConfig;
    }

    if (*run) return cvs::cli::cmd_run(config, out_dir, seed, std::cout, std::cerr);
    if (*plot) return cvs::cli::cmd_plot(spec, std::cout, std::cerr);
    if (*list) return cvs::cli::cmd_list(std::cout);
    return cvs::cli::kExitConfig;
}
