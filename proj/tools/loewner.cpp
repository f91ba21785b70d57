#include <iostream>

#include <CLI11.hpp>

#include "loewner/errors.hpp"
#include "runner.hpp"

int main(int argc, char** argv) {
    using namespace loewner::cli;

    CLI::App app{"Simulate Loewner evolution families and classify their trajectories"};
    app.require_subcommand(1);

    std::string file;
    std::string out_dir;
    unsigned jobs = 0;

    CLI::App* run = app.add_subcommand("run", "integrate, classify and export every grid point");
    run->add_option("file", file, "scenario file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "output directory")->required();

    CLI::App* validate = app.add_subcommand("validate", "check the family axioms and the field");
    validate->add_option("file", file, "scenario file")->required()->check(CLI::ExistingFile);

    CLI::App* sweep = app.add_subcommand("sweep", "classify a grid in parallel and check uniformity");
    sweep->add_option("file", file, "scenario file")->required()->check(CLI::ExistingFile);
    sweep->add_option("--out", out_dir, "output directory")->required();
    sweep->add_option("--jobs", jobs, "worker threads (LOEWNER_JOBS overrides)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    }

    try {
        const Scenario sc = load_scenario(file);
        if (*run) return run_command(sc, out_dir, std::cout);
        if (*validate) return validate_command(sc, std::cout);
        return sweep_command(sc, out_dir, jobs, std::cout);
    } catch (const loewner::ParseError& e) {
        std::cerr << file << ": parse error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
    }
    return kExitError;
}
