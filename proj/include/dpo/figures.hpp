#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dpo/output.hpp"

namespace dpo {

struct FigureOptions {
    std::filesystem::path out_dir = ".";
    OutputFormat format = OutputFormat::Csv;
    std::optional<double> grid_min;
    std::optional<double> grid_max;
    std::optional<int> points;
};

struct FigureResult {
    std::vector<std::filesystem::path> data_files;
    std::filesystem::path sidecar;
};

// fig2 .. fig9.
const std::vector<std::string>& figure_names();

// Emits one data file per curve plus a "<name>_meta.json" sidecar recording
// parameters, grid and computed half-widths where applicable.
FigureResult write_figure(const std::string& name, const FigureOptions& options);

struct SweepOptions {
    double epsilon_min = 0.0;
    double epsilon_max = 0.45;
    int points = 91;
    double gamma_c_over_kappa = 0.01;
    std::filesystem::path out_dir = ".";
    OutputFormat format = OutputFormat::Csv;
};

// Photon numbers, the six quadrature variances, the three spectral
// half-widths and the steady upper-level population.
const std::vector<std::string>& sweep_quantities();

// Writes "<quantity>.csv" (or .json). Photon-number and variance sweeps get
// a second column evaluated at gamma_c = 0, the bare-oscillator reference.
std::filesystem::path write_sweep(const std::string& quantity, const SweepOptions& options);

}  // namespace dpo
