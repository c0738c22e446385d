// Command-line front end: run <config>, list-presets, print-expected <kind> <p> <q>.
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "diskflow/analysis.hpp"
#include "diskflow/error.hpp"
#include "diskflow/presets.hpp"
#include "diskflow/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Spectral simulator for a rigid disk in a 2D viscous fluid"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
    run->add_option("config", config_path, "Config file (key = value with [section] headers)")->required();

    auto* list = app.add_subcommand("list-presets", "List the built-in initial-data presets");

    std::string kind, regime = "long";
    double p = 2.0, q = 1.0;
    auto* expected = app.add_subcommand("print-expected", "Print the theoretical decay exponent");
    expected->add_option("kind", kind, "semigroup | gradient | div_forcing | ell_decay | ns_diff")->required();
    expected->add_option("p", p, "Target integrability index")->required();
    expected->add_option("q", q, "Data integrability index")->required();
    expected->add_option("--regime", regime, "short | long")->check(CLI::IsMember({"short", "long"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (*run) return diskflow::run_config_file(config_path, std::cout, std::cerr);

    if (*list) {
        for (const auto& info : diskflow::preset_list()) std::cout << info.name << "\t" << info.description << "\n";
        return 0;
    }

    try {
        const auto r = diskflow::expected_exponent(diskflow::parse_rate_kind(kind), p, q,
                                                   regime == "short" ? diskflow::Regime::short_time
                                                                     : diskflow::Regime::long_time);
        std::printf("%.17e%s\n", r.exponent, r.log_corrected ? " log" : "");
        return 0;
    } catch (const diskflow::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
