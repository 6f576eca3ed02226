#include "kgraph/runner.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Prescribed mean curvature graphs over warped-product "
                 "leaves: solver, verification, and profile tools"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int grid = 0;
    bool require_hypotheses = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "run configuration file")
            ->required();
        sub->add_option("--out", out_dir,
                        "output directory (overrides [output] directory)");
        sub->add_option("--grid", grid, "grid row count override");
    };

    CLI::App* solve =
        app.add_subcommand("solve", "solve the Dirichlet problem and write "
                                    "the solution and verification reports");
    add_common(solve);
    solve->add_flag("--require-hypotheses", require_hypotheses,
                    "exit 1 without solving when the theorem hypotheses fail");

    CLI::App* check = app.add_subcommand(
        "check", "evaluate the solvability theorem hypotheses");
    add_common(check);

    CLI::App* rotational = app.add_subcommand(
        "rotational", "integrate the rotationally invariant sphere profile");
    add_common(rotational);

    CLI::App* mms = app.add_subcommand(
        "mms", "manufactured-solution convergence ladder");
    add_common(mms);

    CLI::App* flux =
        app.add_subcommand("flux", "solve and report the flux balance");
    add_common(flux);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 3;
    }

    try {
        const kgraph::RunConfig config = kgraph::load_config(config_path);
        const kgraph::RunOptions options{out_dir, grid, require_hypotheses};
        if (solve->parsed()) return kgraph::run_solve(config, options);
        if (check->parsed()) return kgraph::run_check(config, options);
        if (rotational->parsed()) {
            return kgraph::run_rotational(config, options);
        }
        if (mms->parsed()) return kgraph::run_mms(config, options);
        if (flux->parsed()) return kgraph::run_flux(config, options);
    } catch (const kgraph::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const kgraph::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
