#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dpo/figures.hpp"
#include "dpo/output.hpp"
#include "dpo/params.hpp"
#include "dpo/verify.hpp"
#include "dpo/version.hpp"

namespace {

std::filesystem::path default_out_dir() {
    if (const char* env = std::getenv("DPOATOM_OUT")) {
        if (*env != '\0') {
            return env;
        }
    }
    return ".";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Below-threshold parametric oscillator with an intracavity two-level atom: "
                 "closed-form spectra, correlations and moments, checked against an exact "
                 "master-equation solver"};
    app.set_version_flag("--version", dpo::kArtifactVersion);
    app.require_subcommand(1);

    std::string out_dir = default_out_dir().string();
    std::string format_name = "csv";

    // figure
    auto* figure_cmd = app.add_subcommand("figure", "Write one reference figure as data files");
    std::string figure_name;
    figure_cmd->add_option("name", figure_name, "fig2 .. fig9")->required();
    double grid_min = 0.0, grid_max = 0.0;
    int grid_points = 0;
    auto* opt_min = figure_cmd->add_option("--grid-min", grid_min, "Override grid minimum");
    auto* opt_max = figure_cmd->add_option("--grid-max", grid_max, "Override grid maximum");
    auto* opt_points = figure_cmd->add_option("--points", grid_points, "Override grid point count");
    figure_cmd->add_option("--out", out_dir, "Output directory (default $DPOATOM_OUT or .)");
    figure_cmd->add_option("--format", format_name, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Sweep a steady-state quantity over the pump");
    std::string quantity;
    sweep_cmd->add_option("quantity", quantity, "Quantity id (see README)")->required();
    dpo::SweepOptions sweep_options;
    sweep_cmd->add_option("--epsilon-min", sweep_options.epsilon_min, "Pump ratio sweep start");
    sweep_cmd->add_option("--epsilon-max", sweep_options.epsilon_max, "Pump ratio sweep end");
    sweep_cmd->add_option("--points", sweep_options.points, "Number of sweep points (>= 3)");
    auto* sweep_gc = sweep_cmd->add_option("--gamma-c-over-kappa",
                                           sweep_options.gamma_c_over_kappa, "Atomic decay ratio");
    std::string sweep_config;
    sweep_cmd->add_option("--config", sweep_config, "JSON parameter file");
    sweep_cmd->add_option("--out", out_dir, "Output directory (default $DPOATOM_OUT or .)");
    sweep_cmd->add_option("--format", format_name, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    // verify
    auto* verify_cmd =
        app.add_subcommand("verify", "Run the oracle-vs-analytic verification suite");
    dpo::VerifyOptions verify_options;
    verify_cmd->add_option("--fock-cutoff", verify_options.fock_cutoff, "Fock truncation");
    auto* verify_gc = verify_cmd->add_option(
        "--gamma-c-over-kappa", verify_options.gamma_c_over_kappa, "Atomic decay ratio");
    verify_cmd
        ->add_option("--points", verify_options.epsilon_points,
                     "Comma-separated pump ratios to check")
        ->delimiter(',');
    std::string verify_config;
    verify_cmd->add_option("--config", verify_config, "JSON parameter file");
    std::string report_path;
    verify_cmd->add_option("--out", report_path, "Also write the JSON report to this file");
    bool serial = false;
    verify_cmd->add_flag("--serial", serial, "Evaluate points sequentially");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (figure_cmd->parsed()) {
            dpo::FigureOptions options;
            options.out_dir = out_dir;
            options.format = dpo::output_format_from_string(format_name);
            if (opt_min->count()) options.grid_min = grid_min;
            if (opt_max->count()) options.grid_max = grid_max;
            if (opt_points->count()) options.points = grid_points;
            const auto result = dpo::write_figure(figure_name, options);
            for (const auto& file : result.data_files) {
                std::cout << file.string() << "\n";
            }
            std::cout << result.sidecar.string() << "\n";
            return 0;
        }

        if (sweep_cmd->parsed()) {
            if (!sweep_config.empty() && sweep_gc->count() == 0) {
                sweep_options.gamma_c_over_kappa =
                    dpo::params_from_file(sweep_config).gamma_c_over_kappa;
            }
            sweep_options.out_dir = out_dir;
            sweep_options.format = dpo::output_format_from_string(format_name);
            std::cout << dpo::write_sweep(quantity, sweep_options).string() << "\n";
            return 0;
        }

        // verify
        if (!verify_config.empty() && verify_gc->count() == 0) {
            verify_options.gamma_c_over_kappa =
                dpo::params_from_file(verify_config).gamma_c_over_kappa;
        }
        verify_options.parallel = !serial;
        const dpo::VerifyReport report = dpo::run_verify(verify_options);
        const std::string rendered = dpo::report_to_json(report).dump(2) + "\n";
        std::cout << rendered;
        if (!report_path.empty()) {
            dpo::write_text_atomic(report_path, rendered);
        }
        std::cerr << (report.overall_pass ? "verify: PASS" : "verify: FAIL") << "\n";
        return report.overall_pass ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
