// cqed: command-line front end for the circuit QED library

#include "cqed/errors.hpp"
#include "cqed/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    CLI::App app{"circuit QED transmon, resonator and bath calculations"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir = "cqed_out", units_flag;
    bool verbose = false;
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--units", units_flag, "unit system of the config")->check(CLI::IsMember({"si", "natural"}));
    app.add_flag("--verbose", verbose, "progress on stderr");

    const std::pair<const char*, const char*> commands[] = {
        {"transmon", "charge-basis spectrum over an n_g sweep"},
        {"modes", "transmission-line mode table"},
        {"couple", "coupling table and coupled spectrum"},
        {"evolve", "unitary evolution of the coupled system"},
        {"bath", "cavity plus port normal modes and decay"},
        {"check", "run the built-in oracle suites"},
    };
    for (const auto& [name, help] : commands) app.add_subcommand(name, help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cqed::exit_config_error;
    }

    const auto mode = cqed::parse_run_mode(app.get_subcommands().front()->get_name());
    std::optional<cqed::UnitSystem> units;
    if (!units_flag.empty()) units = cqed::parse_unit_system(units_flag);

    cqed::RunConfig cfg;
    try {
        if (!config_path.empty()) {
            std::ifstream f(config_path, std::ios::binary);
            if (!f) throw cqed::ConfigError({"--config: cannot read " + config_path});
            std::stringstream ss;
            ss << f.rdbuf();
            cfg = cqed::parse_config(ss.str());
        } else if (*mode != cqed::RunMode::Check) {
            throw cqed::ConfigError({"--config: required for this command"});
        }
        cfg = cqed::resolve_config(cfg, *mode, units);
    } catch (const cqed::ConfigError& e) {
        std::cerr << "config error:\n";
        for (const auto& v : e.violations()) std::cerr << "  " << v << "\n";
        return cqed::exit_config_error;
    }
    return cqed::run(cfg, out_dir, std::cout, std::cerr, verbose);
}
