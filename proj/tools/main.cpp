#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lowres/errors.hpp"
#include "lowres/runner.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

int guarded(const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const lowres::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const lowres::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const lowres::NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Low-resolution-weight training experiments"};
    app.require_subcommand(1);

    std::string run_config_path;
    CLI::App* run = app.add_subcommand("run", "Execute the sweep described by a config file");
    run->add_option("config", run_config_path, "Path to the run config")->required();

    std::string validate_config_path;
    CLI::App* validate =
        app.add_subcommand("validate", "Schema-check a config file without running it");
    validate->add_option("config", validate_config_path, "Path to the run config")->required();

    CLI::App* version = app.add_subcommand("version", "Print the tool version");

    CLI11_PARSE(app, argc, argv);

    if (version->parsed()) {
        std::cout << "lowres " << kVersion << "\n";
        return 0;
    }
    if (validate->parsed()) {
        return guarded([&] {
            lowres::RunConfig cfg = lowres::read_run_config(validate_config_path);
            std::cout << "config OK (hash " << cfg.config_hash << ")\n";
        });
    }
    return guarded([&] {
        lowres::RunConfig cfg = lowres::read_run_config(run_config_path);
        lowres::run_experiment(cfg);
    });
}
