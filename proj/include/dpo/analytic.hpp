#pragma once

#include <complex>
#include <string>
#include <vector>

#include "dpo/params.hpp"

namespace dpo {

enum class LightKind { Fluorescent, Cavity, Signal };

std::string to_string(LightKind kind);

// Power spectral density sampled on a frequency grid, in kappa units.
// Every spectrum here is a sum of zero-centered Lorentzians normalized to
// unit area over the whole frequency axis.
struct SpectrumCurve {
    std::vector<double> omega_over_kappa;
    std::vector<double> values;
    LightKind kind = LightKind::Fluorescent;
};

// Real-valued series over a delay/time grid (kappa units): g2 curves,
// upper-level populations.
struct CorrelationSeries {
    std::vector<double> tau;
    std::vector<double> values;
};

// First-order two-time correlations are complex before Fourier transforming.
struct ComplexCorrelationSeries {
    std::vector<double> tau;
    std::vector<std::complex<double>> values;
};

// Expectation values of the reduced atomic system at one instant.
struct AtomicState {
    std::complex<double> sigma_minus_expect;
    std::complex<double> sigma_plus_expect;  // conjugate of sigma_minus_expect
    double sigma_z_expect = -1.0;
    double rho_aa = 0.0;                     // (sigma_z + 1) / 2

    static AtomicState make(std::complex<double> sigma_minus, double sigma_z);
};

struct QuadratureVariances {
    double var_plus = 1.0;   // amplitude quadrature, >= 1 in this model
    double var_minus = 1.0;  // phase quadrature, <= 1 (squeezed)
};

// Steady-state photon numbers and quadrature variances for the cavity mode
// and its signal/fluorescent components.
struct SteadyStateMoments {
    double mean_photon_cavity = 0.0;
    double mean_photon_signal = 0.0;
    double mean_photon_fluorescent = 0.0;
    double a_squared_expect = 0.0;  // <a^2>_ss, real below threshold

    QuadratureVariances cavity;
    QuadratureVariances signal;
    QuadratureVariances fluorescent;

    const QuadratureVariances& variance(LightKind kind) const;
    double var_plus() const { return cavity.var_plus; }
    double var_minus() const { return cavity.var_minus; }
};

// Uniform grid helpers.
std::vector<double> linear_grid(double min, double max, std::size_t points);
std::vector<double> default_spectrum_grid(LightKind kind);

// Two Lorentzians of half-widths lambda_plus and lambda_minus, weight 1/2
// each; single peak at omega = 0.
SpectrumCurve fluorescent_spectrum(const DerivedRates& rates, std::vector<double> omega_grid);

// Four Lorentzians (mu_plus, mu_minus, lambda_plus, lambda_minus), weight 1/4
// each: pointwise the mean of the signal and fluorescent spectra.
SpectrumCurve cavity_spectrum(const SystemParams& params, const DerivedRates& rates,
                              std::vector<double> omega_grid);

// Two Lorentzians of half-widths mu_plus and mu_minus; independent of the
// atomic decay rate.
SpectrumCurve signal_spectrum(const SystemParams& params, std::vector<double> omega_grid);

// Normalized intensity correlation of the fluorescent light,
// g2(tau) = 1 - exp(-gamma_big * tau). Antibunched: g2(0) = 0.
CorrelationSeries g2(const DerivedRates& rates, std::vector<double> tau_grid);

// Upper-level occupation relaxing from rho_aa_0 toward the pump-sustained
// steady value at rate gamma_big. Time grid in units of 1/kappa.
CorrelationSeries upper_level_population(const SystemParams& params, const DerivedRates& rates,
                                         double rho_aa_0, std::vector<double> t_grid);

// Steady state of the reduced atomic equations: <sigma_z> = -eta/gamma_big,
// coherences vanish.
AtomicState steady_state_atom(const SystemParams& params, const DerivedRates& rates);

SteadyStateMoments steady_state_moments(const SystemParams& params, const DerivedRates& rates);

// Closed forms behind steady_state_moments, callable with gamma_c = 0 to get
// the bare-oscillator reference (no atom in the cavity).
SteadyStateMoments moments_from_ratios(double epsilon_over_kappa, double gamma_c_over_kappa);

// Exact solution of the linear reduced atomic system: the coherence
// combinations <sigma_-> +- <sigma_+> decay at lambda_plus / lambda_minus and
// <sigma_z> relaxes at gamma_big. No numerical stepping involved.
std::vector<AtomicState> reduced_atomic_ode(const DerivedRates& rates, const AtomicState& initial,
                                            const std::vector<double>& t_grid);

// Half-width at half-maximum of the chosen spectrum, found by bisection on
// the closed form to 1e-6 kappa.
double half_width(LightKind kind, const SystemParams& params);

// Half-width of a sampled symmetric curve by linear interpolation; used for
// spectra that exist only on a grid.
double half_width_interpolated(const SpectrumCurve& curve);

}  // namespace dpo
