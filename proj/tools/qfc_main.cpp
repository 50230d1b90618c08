#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qfc/config.hpp"
#include "qfc/errors.hpp"
#include "qfc/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "qfc: microring frequency-conversion design and simulation toolkit"};
    app.require_subcommand(0, 1);

    std::string config_path;
    std::string out_dir = ".";
    app.add_option("--config", config_path, "JSON configuration file")
        ->required();
    app.add_option("--out", out_dir, "output directory (default: .)");

    const std::vector<std::pair<std::string, std::string>> subcommands = {
        {"design", "QPM order, poling period, and eta_max calculators"},
        {"simulate", "g calibration and conversion-efficiency curve"},
        {"sweep", "eta_max over one coupling or loss parameter"},
        {"fit", "synthesize and fit resonance spectra"},
        {"bend", "Euler bend and taper geometry"},
        {"budget", "pump power budget, loss chain, DFB tuning"},
    };
    for (const auto& [name, description] : subcommands) {
        app.add_subcommand(name, description)->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const qfc::Config cfg = qfc::load_config(config_path);
        std::vector<qfc::Task> tasks = cfg.tasks;
        for (const auto& [name, description] : subcommands) {
            if (app.got_subcommand(name)) {
                tasks = {qfc::task_from_string(name)};
            }
        }
        const qfc::RunResult result = qfc::run_config(cfg, tasks, out_dir);
        std::cout << result.summary;
        return 0;
    } catch (const qfc::Error& e) {
        std::cerr << "qfc error: " << e.what() << "\n";
        return e.code() == qfc::errc::config ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "qfc error: " << e.what() << "\n";
        return 1;
    }
}
