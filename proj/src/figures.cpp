#include "dpo/figures.hpp"

#include <functional>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "dpo/analytic.hpp"
#include "dpo/params.hpp"
#include "dpo/version.hpp"

namespace dpo {

namespace {

using nlohmann::ordered_json;

constexpr double kFigureGammaC = 0.01;  // every figure uses this decay ratio

struct Curve {
    std::string label;
    ordered_json meta;
    std::vector<double> values;
};

struct FigureData {
    std::string x_name;
    std::vector<double> x;
    std::vector<Curve> curves;
};

struct GridSpec {
    double min;
    double max;
    int points;
};

GridSpec apply_overrides(GridSpec grid, const FigureOptions& options) {
    if (options.grid_min) grid.min = *options.grid_min;
    if (options.grid_max) grid.max = *options.grid_max;
    if (options.points) grid.points = *options.points;
    if (grid.points < 3) {
        throw std::invalid_argument("grid points must be >= 3");
    }
    if (!(grid.min < grid.max)) {
        throw std::invalid_argument("grid min must be below grid max");
    }
    return grid;
}

ordered_json curve_params(double epsilon, double gamma_c) {
    ordered_json meta;
    meta["epsilon_over_kappa"] = epsilon;
    meta["gamma_c_over_kappa"] = gamma_c;
    return meta;
}

Curve spectrum_curve(LightKind kind, double epsilon, const std::string& label,
                     const std::vector<double>& grid) {
    const SystemParams params(epsilon, kFigureGammaC);
    const DerivedRates rates = derive_rates(params);
    SpectrumCurve curve;
    switch (kind) {
        case LightKind::Fluorescent: curve = fluorescent_spectrum(rates, grid); break;
        case LightKind::Cavity: curve = cavity_spectrum(params, rates, grid); break;
        case LightKind::Signal: curve = signal_spectrum(params, grid); break;
    }
    Curve out{label, curve_params(epsilon, kFigureGammaC), std::move(curve.values)};
    out.meta["half_width_over_kappa"] = half_width(kind, params);
    return out;
}

FigureData spectrum_figure(LightKind kind, GridSpec grid) {
    FigureData fig;
    fig.x_name = "omega_over_kappa";
    fig.x = linear_grid(grid.min, grid.max, static_cast<std::size_t>(grid.points));
    fig.curves.push_back(spectrum_curve(kind, 0.25, "solid", fig.x));
    fig.curves.push_back(spectrum_curve(kind, 0.35, "dotted", fig.x));
    return fig;
}

FigureData g2_figure(GridSpec grid) {
    FigureData fig;
    fig.x_name = "tau_kappa";
    fig.x = linear_grid(grid.min, grid.max, static_cast<std::size_t>(grid.points));
    for (auto [epsilon, label] : {std::pair{0.10, "solid"}, std::pair{0.35, "dotted"}}) {
        const SystemParams params(epsilon, kFigureGammaC);
        Curve curve{label, curve_params(epsilon, kFigureGammaC),
                    g2(derive_rates(params), fig.x).values};
        fig.curves.push_back(std::move(curve));
    }
    return fig;
}

FigureData population_figure(GridSpec grid) {
    FigureData fig;
    fig.x_name = "gamma_c_t";
    fig.x = linear_grid(grid.min, grid.max, static_cast<std::size_t>(grid.points));
    std::vector<double> t_kappa(fig.x.size());
    for (std::size_t i = 0; i < fig.x.size(); ++i) {
        t_kappa[i] = fig.x[i] / kFigureGammaC;
    }
    for (auto [epsilon, label] : {std::pair{0.30, "solid"}, std::pair{0.0, "dotted"}}) {
        const SystemParams params(epsilon, kFigureGammaC);
        Curve curve{label, curve_params(epsilon, kFigureGammaC),
                    upper_level_population(params, derive_rates(params), 1.0, t_kappa).values};
        curve.meta["rho_aa_initial"] = 1.0;
        fig.curves.push_back(std::move(curve));
    }
    return fig;
}

FigureData variance_sweep_figure(LightKind kind, GridSpec grid, bool with_bare_reference) {
    FigureData fig;
    fig.x_name = "epsilon_over_kappa";
    fig.x = linear_grid(grid.min, grid.max, static_cast<std::size_t>(grid.points));

    const auto sweep = [&](double gamma_c, const std::string& label) {
        Curve curve;
        curve.label = label;
        curve.meta["gamma_c_over_kappa"] = gamma_c;
        curve.meta["variance"] = "var_minus_" + to_string(kind);
        curve.values.reserve(fig.x.size());
        for (double epsilon : fig.x) {
            curve.values.push_back(moments_from_ratios(epsilon, gamma_c).variance(kind).var_minus);
        }
        return curve;
    };

    fig.curves.push_back(sweep(kFigureGammaC, "solid"));
    if (with_bare_reference) {
        fig.curves.push_back(sweep(0.0, "dotted"));
    }
    return fig;
}

FigureData build_figure(const std::string& name, const FigureOptions& options) {
    if (name == "fig2") {
        return spectrum_figure(LightKind::Fluorescent,
                               apply_overrides({-0.1, 0.1, 2001}, options));
    }
    if (name == "fig3") {
        return g2_figure(apply_overrides({0.0, 500.0, 1001}, options));
    }
    if (name == "fig4") {
        return population_figure(apply_overrides({0.0, 6.0, 1201}, options));
    }
    if (name == "fig5") {
        return variance_sweep_figure(LightKind::Cavity, apply_overrides({0.0, 0.45, 91}, options),
                                     false);
    }
    if (name == "fig6") {
        return variance_sweep_figure(LightKind::Signal, apply_overrides({0.0, 0.45, 91}, options),
                                     true);
    }
    if (name == "fig7") {
        return variance_sweep_figure(LightKind::Fluorescent,
                                     apply_overrides({0.0, 0.45, 91}, options), false);
    }
    if (name == "fig8") {
        return spectrum_figure(LightKind::Cavity, apply_overrides({-0.1, 0.1, 2001}, options));
    }
    if (name == "fig9") {
        return spectrum_figure(LightKind::Signal, apply_overrides({-2.0, 2.0, 2001}, options));
    }
    throw std::invalid_argument("unknown figure name: " + name);
}

}  // namespace

const std::vector<std::string>& figure_names() {
    static const std::vector<std::string> names{"fig2", "fig3", "fig4", "fig5",
                                                "fig6", "fig7", "fig8", "fig9"};
    return names;
}

FigureResult write_figure(const std::string& name, const FigureOptions& options) {
    const FigureData fig = build_figure(name, options);

    FigureResult result;
    ordered_json sidecar;
    sidecar["figure"] = name;
    sidecar["artifact_version"] = kArtifactVersion;
    sidecar["format"] = to_string(options.format);
    sidecar["grid"] = {{"x_name", fig.x_name},
                       {"min", fig.x.front()},
                       {"max", fig.x.back()},
                       {"points", fig.x.size()}};
    sidecar["curves"] = ordered_json::array();

    for (const auto& curve : fig.curves) {
        const std::string stem =
            fig.curves.size() > 1 ? name + "_" + curve.label : name;
        Table table;
        table.x_name = fig.x_name;
        table.value_names = {"value"};
        table.x = fig.x;
        table.columns = {curve.values};
        const auto path = write_table(table, options.out_dir, stem, options.format);

        ordered_json entry = curve.meta;
        entry["label"] = curve.label;
        entry["file"] = path.filename().string();
        sidecar["curves"].push_back(std::move(entry));
        result.data_files.push_back(path);
    }

    result.sidecar = options.out_dir / (name + "_meta.json");
    write_text_atomic(result.sidecar, sidecar.dump(2) + "\n");
    return result;
}

const std::vector<std::string>& sweep_quantities() {
    static const std::vector<std::string> names{
        "mean_photon_cavity",     "mean_photon_signal",   "mean_photon_fluorescent",
        "var_plus_cavity",        "var_minus_cavity",     "var_plus_signal",
        "var_minus_signal",       "var_plus_fluorescent", "var_minus_fluorescent",
        "half_width_fluorescent", "half_width_cavity",    "half_width_signal",
        "rho_aa_ss"};
    return names;
}

std::filesystem::path write_sweep(const std::string& quantity, const SweepOptions& options) {
    if (options.points < 3) {
        throw std::invalid_argument("sweep: points must be >= 3");
    }
    if (!(options.epsilon_min <= options.epsilon_max)) {
        throw std::invalid_argument("sweep: epsilon_min must be <= epsilon_max");
    }

    // Moment-like quantities carry a gamma_c = 0 reference column.
    std::function<double(const SteadyStateMoments&)> moment;
    if (quantity == "mean_photon_cavity") moment = [](const auto& m) { return m.mean_photon_cavity; };
    else if (quantity == "mean_photon_signal") moment = [](const auto& m) { return m.mean_photon_signal; };
    else if (quantity == "mean_photon_fluorescent") moment = [](const auto& m) { return m.mean_photon_fluorescent; };
    else if (quantity == "var_plus_cavity") moment = [](const auto& m) { return m.cavity.var_plus; };
    else if (quantity == "var_minus_cavity") moment = [](const auto& m) { return m.cavity.var_minus; };
    else if (quantity == "var_plus_signal") moment = [](const auto& m) { return m.signal.var_plus; };
    else if (quantity == "var_minus_signal") moment = [](const auto& m) { return m.signal.var_minus; };
    else if (quantity == "var_plus_fluorescent") moment = [](const auto& m) { return m.fluorescent.var_plus; };
    else if (quantity == "var_minus_fluorescent") moment = [](const auto& m) { return m.fluorescent.var_minus; };

    std::function<double(double)> single;
    if (quantity == "half_width_fluorescent") {
        single = [&](double e) { return half_width(LightKind::Fluorescent, SystemParams(e, options.gamma_c_over_kappa)); };
    } else if (quantity == "half_width_cavity") {
        single = [&](double e) { return half_width(LightKind::Cavity, SystemParams(e, options.gamma_c_over_kappa)); };
    } else if (quantity == "half_width_signal") {
        single = [&](double e) { return half_width(LightKind::Signal, SystemParams(e, options.gamma_c_over_kappa)); };
    } else if (quantity == "rho_aa_ss") {
        single = [&](double e) {
            const SystemParams params(e, options.gamma_c_over_kappa);
            return steady_state_atom(params, derive_rates(params)).rho_aa;
        };
    }

    if (!moment && !single) {
        throw std::invalid_argument("unknown sweep quantity: " + quantity);
    }

    Table table;
    table.x_name = "epsilon_over_kappa";
    table.x = (options.epsilon_min == options.epsilon_max)
                  ? std::vector<double>{options.epsilon_min}
                  : linear_grid(options.epsilon_min, options.epsilon_max,
                                static_cast<std::size_t>(options.points));

    if (moment) {
        std::vector<double> with_atom, bare;
        with_atom.reserve(table.x.size());
        bare.reserve(table.x.size());
        for (double e : table.x) {
            with_atom.push_back(moment(moments_from_ratios(e, options.gamma_c_over_kappa)));
            bare.push_back(moment(moments_from_ratios(e, 0.0)));
        }
        table.value_names = {"value", "value2"};
        table.columns = {std::move(with_atom), std::move(bare)};
    } else {
        std::vector<double> values;
        values.reserve(table.x.size());
        for (double e : table.x) {
            values.push_back(single(e));
        }
        table.value_names = {"value"};
        table.columns = {std::move(values)};
    }

    return write_table(table, options.out_dir, quantity, options.format);
}

}  // namespace dpo
