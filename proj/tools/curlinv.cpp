#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "curlinv/commands.hpp"

using namespace curlinv;

int main(int argc, char** argv) {
    CLI::App app{"Vector potentials with zero boundary values on star-shaped domains"};
    app.require_subcommand(0, 1);
    app.fallthrough();

    std::string config_path;
    bool dump = false;
    app.add_option("--config", config_path, "INI configuration file");
    app.add_flag("--dump-config", dump, "print the effective configuration and exit");

    // every config key is also a flag (--quad.n_alpha, --grid.counts, ...); values override the file
    std::map<std::string, std::string> overrides;
    const RunConfig defaults;
    for (const auto& key : config_keys()) {
        auto* opt = app.add_option("--" + key, overrides[key], "default: " + get_config_value(defaults, key));
        opt->type_name("VALUE");
    }

    const std::map<std::string, std::string> help{
        {"solve", "evaluate Rg on the grid and export CSV + structured-points volume"},
        {"curl-check", "curl Rg against g through FD and through the analytic gradient"},
        {"grad-check", "analytic gradient of Rg against its FD Jacobian"},
        {"eps-study", "|R^eps g - Rg| for a decreasing eps list"},
        {"equiv-check", "agreement of the alpha, xi and r kernel forms"},
        {"boundary-check", "exterior zeros and decay of |Rg| toward the boundary"},
        {"div-solve", "FD divergence of the Bogovskii solution against F"},
        {"dini", "sampled modulus of continuity and Dini integral"},
        {"validate-domain", "sampled star-shape check w.r.t. the unit ball"},
    };
    for (const auto& [name, text] : help) app.add_subcommand(name, text);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = load_config(config_path);
        for (const auto& [key, value] : overrides)
            if (app.count("--" + key) > 0) set_config_value(cfg, key, value);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    }
    if (dump) {
        std::cout << dump_config(cfg);
        return exit_pass;
    }

    if (app.get_subcommands().empty()) {
        std::cerr << "error: a subcommand is required\n" << app.help();
        return exit_config;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    const CommandResult r = run_command(command, cfg, std::cerr);
    if (!r.summary.empty()) std::cout << r.summary << '\n';
    return r.exit_code;
}
