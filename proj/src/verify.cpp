#include "dpo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

#include "dpo/analytic.hpp"
#include "dpo/oracle.hpp"
#include "dpo/version.hpp"

namespace dpo {

namespace {

VerifyEntry relative_entry(std::string name, double analytic, double oracle_value,
                           double tolerance) {
    VerifyEntry entry;
    entry.name = std::move(name);
    entry.analytic = analytic;
    entry.oracle = oracle_value;
    entry.deviation = std::abs(oracle_value - analytic) / std::abs(analytic);
    entry.tolerance = tolerance;
    entry.tolerance_kind = "relative";
    entry.pass = entry.deviation <= tolerance;
    return entry;
}

VerifyEntry absolute_entry(std::string name, double analytic, double oracle_value,
                           double tolerance) {
    VerifyEntry entry;
    entry.name = std::move(name);
    entry.analytic = analytic;
    entry.oracle = oracle_value;
    entry.deviation = std::abs(oracle_value - analytic);
    entry.tolerance = tolerance;
    entry.tolerance_kind = "absolute";
    entry.pass = entry.deviation <= tolerance;
    return entry;
}

// Atomic correlation with a window that is grown until the tail has decayed
// below the transform's 1e-8 requirement.
ComplexCorrelationSeries decayed_atomic_correlation(const oracle::Liouvillian& liouvillian,
                                                    const oracle::DensityMatrix& rho,
                                                    double lambda_minus) {
    double window = 30.0 / lambda_minus;
    const double dt = 0.25;
    for (int attempt = 0; attempt < 4; ++attempt) {
        const auto n_samples = static_cast<std::size_t>(std::ceil(window / dt)) + 1;
        const auto grid = linear_grid(0.0, dt * static_cast<double>(n_samples - 1), n_samples);
        auto series =
            oracle::two_time_correlation(liouvillian, rho, oracle::CorrelationKind::Atomic, grid);
        const double c0 = std::abs(series.values.front());
        const double tail = std::abs(series.values.back());
        if (tail <= 1e-9 * c0) {
            return series;
        }
        // Estimate the tail decay rate from the last quarter of the window
        // and extend far enough to reach 1e-9.
        const std::size_t mid = series.values.size() * 3 / 4;
        const double ratio = tail / std::abs(series.values[mid]);
        const double rate = -std::log(std::max(ratio, 1e-300)) / (grid.back() - grid[mid]);
        const double extra = (rate > 0.0) ? std::log(tail / (1e-9 * c0)) / rate : window;
        window += 1.2 * std::max(extra, 0.25 * window);
    }
    throw std::runtime_error("verify: atomic correlation window did not decay");
}

}  // namespace

VerifyPoint verify_point(double epsilon_over_kappa, double gamma_c_over_kappa, int fock_cutoff) {
    VerifyPoint point;
    point.epsilon_over_kappa = epsilon_over_kappa;
    point.gamma_c_over_kappa = gamma_c_over_kappa;
    point.fock_cutoff = fock_cutoff;

    try {
        const SystemParams params(epsilon_over_kappa, gamma_c_over_kappa);
        const DerivedRates rates = derive_rates(params);
        if (params.bad_cavity_warning()) {
            std::ostringstream msg;
            msg << "gamma_c_over_kappa = " << gamma_c_over_kappa
                << " is outside the bad-cavity regime; closed forms are not expected to hold";
            point.warnings.push_back(msg.str());
        }

        const oracle::Liouvillian liouvillian(params, oracle::HilbertSpace(fock_cutoff));
        const oracle::DensityMatrix rho = oracle::steady_state(liouvillian);
        if (!rho.truncation_adequate()) {
            point.warnings.push_back("Fock truncation carries population in the top two levels");
        }

        const SteadyStateMoments moments = steady_state_moments(params, rates);
        const AtomicState atom = steady_state_atom(params, rates);

        const double nbar = std::real(oracle::expectation(rho, oracle::Observable::PhotonNumber));
        const double var_plus = std::real(oracle::expectation(rho, oracle::Observable::VarPlus));
        const double var_minus = std::real(oracle::expectation(rho, oracle::Observable::VarMinus));
        const double excited =
            std::real(oracle::expectation(rho, oracle::Observable::ExcitedPopulation));

        point.entries.push_back(
            relative_entry("mean_photon_cavity", moments.mean_photon_cavity, nbar, 0.05));
        point.entries.push_back(
            absolute_entry("var_minus_cavity", moments.cavity.var_minus, var_minus, 0.01));
        // No acceptance band exists for the stretched quadrature; 5% keeps it
        // gated at a level the steady-state data comfortably meets.
        point.entries.push_back(
            relative_entry("var_plus_cavity", moments.cavity.var_plus, var_plus, 0.05));
        point.entries.push_back(relative_entry("rho_aa", atom.rho_aa, excited, 0.02));
        point.entries.push_back(
            relative_entry("sigma_plus_sigma_minus", atom.rho_aa, excited, 0.02));

        // g2 curve distance over gamma_big * tau in [0, 5].
        {
            const auto tau_grid = linear_grid(0.0, 5.0 / rates.gamma_big, 101);
            const auto oracle_g2 = oracle::two_time_correlation(
                liouvillian, rho, oracle::CorrelationKind::Intensity, tau_grid);
            const auto analytic_g2 = g2(rates, tau_grid);
            double max_dev = 0.0;
            for (std::size_t i = 0; i < tau_grid.size(); ++i) {
                max_dev = std::max(max_dev, std::abs(std::real(oracle_g2.values[i]) -
                                                     analytic_g2.values[i]));
            }
            VerifyEntry entry;
            entry.name = "g2_curve_distance";
            entry.analytic = 0.0;
            entry.oracle = max_dev;
            entry.deviation = max_dev;
            entry.tolerance = 0.05;
            entry.tolerance_kind = "absolute";
            entry.pass = max_dev <= 0.05;
            point.entries.push_back(std::move(entry));
        }

        // Fluorescent spectrum half-width. Reported, not gated: the exact
        // line is systematically narrower than the two-Lorentzian closed form
        // once the pump is strong (squeezing-induced narrowing), and no
        // acceptance band is declared for it.
        {
            const auto correlation = decayed_atomic_correlation(liouvillian, rho,
                                                                rates.lambda_minus);
            const auto spectrum = oracle::spectrum_from_correlation(
                correlation, default_spectrum_grid(LightKind::Fluorescent));
            VerifyEntry entry;
            entry.name = "half_width_fluorescent";
            entry.analytic = half_width(LightKind::Fluorescent, params);
            entry.oracle = half_width_interpolated(spectrum);
            entry.deviation = std::abs(entry.oracle - entry.analytic) / entry.analytic;
            entry.tolerance = 0.0;
            entry.tolerance_kind = "informational";
            entry.gated = false;
            entry.pass = true;
            entry.note = "exact linewidth narrows below the closed form as the pump grows";
            point.entries.push_back(std::move(entry));
        }

        point.pass = std::all_of(point.entries.begin(), point.entries.end(),
                                 [](const VerifyEntry& e) { return !e.gated || e.pass; });
    } catch (const std::exception& ex) {
        point.error = ex.what();
        point.pass = false;
    }
    return point;
}

VerifyReport run_verify(const VerifyOptions& options) {
    VerifyReport report;
    report.options = options;
    report.points.resize(options.epsilon_points.size());

    if (options.parallel && options.epsilon_points.size() > 1) {
        std::vector<std::future<VerifyPoint>> futures;
        futures.reserve(options.epsilon_points.size());
        for (double epsilon : options.epsilon_points) {
            futures.push_back(std::async(std::launch::async, verify_point, epsilon,
                                         options.gamma_c_over_kappa, options.fock_cutoff));
        }
        for (std::size_t i = 0; i < futures.size(); ++i) {
            report.points[i] = futures[i].get();
        }
    } else {
        for (std::size_t i = 0; i < options.epsilon_points.size(); ++i) {
            report.points[i] = verify_point(options.epsilon_points[i],
                                            options.gamma_c_over_kappa, options.fock_cutoff);
        }
    }

    report.overall_pass = std::all_of(report.points.begin(), report.points.end(),
                                      [](const VerifyPoint& p) { return p.pass; });
    return report;
}

nlohmann::ordered_json report_to_json(const VerifyReport& report) {
    nlohmann::ordered_json doc;
    doc["artifact_version"] = kArtifactVersion;
    doc["options"] = {{"epsilon_points", report.options.epsilon_points},
                      {"gamma_c_over_kappa", report.options.gamma_c_over_kappa},
                      {"fock_cutoff", report.options.fock_cutoff}};
    doc["points"] = nlohmann::ordered_json::array();
    for (const auto& point : report.points) {
        nlohmann::ordered_json p;
        p["epsilon_over_kappa"] = point.epsilon_over_kappa;
        p["gamma_c_over_kappa"] = point.gamma_c_over_kappa;
        p["fock_cutoff"] = point.fock_cutoff;
        p["pass"] = point.pass;
        if (!point.error.empty()) {
            p["error"] = point.error;
        }
        if (!point.warnings.empty()) {
            p["warnings"] = point.warnings;
        }
        p["entries"] = nlohmann::ordered_json::array();
        for (const auto& entry : point.entries) {
            nlohmann::ordered_json e;
            e["name"] = entry.name;
            e["analytic"] = entry.analytic;
            e["oracle"] = entry.oracle;
            e["deviation"] = entry.deviation;
            e["tolerance"] = entry.tolerance;
            e["tolerance_kind"] = entry.tolerance_kind;
            e["gated"] = entry.gated;
            e["pass"] = entry.pass;
            if (!entry.note.empty()) {
                e["note"] = entry.note;
            }
            p["entries"].push_back(std::move(e));
        }
        doc["points"].push_back(std::move(p));
    }
    doc["overall_pass"] = report.overall_pass;
    return doc;
}

}  // namespace dpo
