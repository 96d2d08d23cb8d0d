#include "dpo/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dpo {

namespace {

constexpr double kPi = std::numbers::pi;

struct LorentzianComponent {
    double weight;      // fraction of the total (unit) area
    double half_width;  // kappa units
};

using ComponentList = std::vector<LorentzianComponent>;

double evaluate(const ComponentList& components, double omega) {
    double value = 0.0;
    for (const auto& c : components) {
        value += c.weight * (c.half_width / kPi) / (c.half_width * c.half_width + omega * omega);
    }
    return value;
}

ComponentList components_for(LightKind kind, const SystemParams& params) {
    const DerivedRates rates = derive_rates(params);
    switch (kind) {
        case LightKind::Fluorescent:
            return {{0.5, rates.lambda_plus}, {0.5, rates.lambda_minus}};
        case LightKind::Signal:
            return {{0.5, rates.mu_plus}, {0.5, rates.mu_minus}};
        case LightKind::Cavity:
            return {{0.25, rates.mu_plus},
                    {0.25, rates.mu_minus},
                    {0.25, rates.lambda_plus},
                    {0.25, rates.lambda_minus}};
    }
    throw std::invalid_argument("unknown spectrum kind");
}

void check_frequency_grid(const std::vector<double>& grid) {
    if (grid.empty()) {
        throw std::invalid_argument("spectrum grid must not be empty");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i])) {
            throw std::invalid_argument("spectrum grid must be finite");
        }
        if (i > 0 && grid[i] <= grid[i - 1]) {
            throw std::invalid_argument("spectrum grid must be strictly increasing");
        }
    }
}

void check_delay_grid(const std::vector<double>& grid, const char* what) {
    if (grid.empty()) {
        throw std::invalid_argument(std::string(what) + ": grid must not be empty");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) || grid[i] < 0.0) {
            throw std::invalid_argument(std::string(what) + ": delays must be finite and >= 0");
        }
        if (i > 0 && grid[i] < grid[i - 1]) {
            throw std::invalid_argument(std::string(what) + ": grid must be ordered");
        }
    }
}

SpectrumCurve sample(const ComponentList& components, std::vector<double> grid, LightKind kind) {
    check_frequency_grid(grid);
    SpectrumCurve curve;
    curve.kind = kind;
    curve.values.reserve(grid.size());
    for (double omega : grid) {
        curve.values.push_back(evaluate(components, omega));
    }
    curve.omega_over_kappa = std::move(grid);
    return curve;
}

}  // namespace

std::string to_string(LightKind kind) {
    switch (kind) {
        case LightKind::Fluorescent: return "fluorescent";
        case LightKind::Cavity: return "cavity";
        case LightKind::Signal: return "signal";
    }
    return "unknown";
}

AtomicState AtomicState::make(std::complex<double> sigma_minus, double sigma_z) {
    if (std::abs(sigma_minus) > 1.0 + 1e-12) {
        throw std::invalid_argument("AtomicState: |<sigma_->| must be <= 1");
    }
    if (sigma_z < -1.0 - 1e-12 || sigma_z > 1.0 + 1e-12) {
        throw std::invalid_argument("AtomicState: <sigma_z> must lie in [-1, 1]");
    }
    AtomicState state;
    state.sigma_minus_expect = sigma_minus;
    state.sigma_plus_expect = std::conj(sigma_minus);
    state.sigma_z_expect = sigma_z;
    state.rho_aa = 0.5 * (sigma_z + 1.0);
    return state;
}

const QuadratureVariances& SteadyStateMoments::variance(LightKind kind) const {
    switch (kind) {
        case LightKind::Cavity: return cavity;
        case LightKind::Signal: return signal;
        case LightKind::Fluorescent: return fluorescent;
    }
    throw std::invalid_argument("unknown variance kind");
}

std::vector<double> linear_grid(double min, double max, std::size_t points) {
    if (!std::isfinite(min) || !std::isfinite(max) || min > max) {
        throw std::invalid_argument("linear_grid: need finite min <= max");
    }
    if (points == 0) {
        throw std::invalid_argument("linear_grid: need at least one point");
    }
    if (points == 1 || min == max) {
        return {min};
    }
    std::vector<double> grid(points);
    const double step = (max - min) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        grid[i] = min + step * static_cast<double>(i);
    }
    grid.back() = max;
    return grid;
}

std::vector<double> default_spectrum_grid(LightKind kind) {
    if (kind == LightKind::Signal) {
        return linear_grid(-2.0, 2.0, 2001);
    }
    return linear_grid(-0.1, 0.1, 2001);
}

SpectrumCurve fluorescent_spectrum(const DerivedRates& rates, std::vector<double> omega_grid) {
    ComponentList components{{0.5, rates.lambda_plus}, {0.5, rates.lambda_minus}};
    return sample(components, std::move(omega_grid), LightKind::Fluorescent);
}

SpectrumCurve cavity_spectrum(const SystemParams& params, const DerivedRates& rates,
                              std::vector<double> omega_grid) {
    validate(params);
    ComponentList components{{0.25, rates.mu_plus},
                             {0.25, rates.mu_minus},
                             {0.25, rates.lambda_plus},
                             {0.25, rates.lambda_minus}};
    return sample(components, std::move(omega_grid), LightKind::Cavity);
}

SpectrumCurve signal_spectrum(const SystemParams& params, std::vector<double> omega_grid) {
    validate(params);
    const double e = params.epsilon_over_kappa;
    ComponentList components{{0.5, 0.5 + e}, {0.5, 0.5 - e}};
    return sample(components, std::move(omega_grid), LightKind::Signal);
}

CorrelationSeries g2(const DerivedRates& rates, std::vector<double> tau_grid) {
    check_delay_grid(tau_grid, "g2");
    CorrelationSeries series;
    series.values.reserve(tau_grid.size());
    for (double tau : tau_grid) {
        series.values.push_back(1.0 - std::exp(-rates.gamma_big * tau));
    }
    series.tau = std::move(tau_grid);
    return series;
}

CorrelationSeries upper_level_population(const SystemParams& params, const DerivedRates& rates,
                                         double rho_aa_0, std::vector<double> t_grid) {
    if (!(rho_aa_0 >= 0.0 && rho_aa_0 <= 1.0)) {
        throw std::invalid_argument("upper_level_population: rho_aa(0) must lie in [0, 1]");
    }
    check_delay_grid(t_grid, "upper_level_population");
    const double e = params.epsilon_over_kappa;
    const double x2 = 4.0 * e * e;
    const double steady = x2 / (1.0 + x2);

    CorrelationSeries series;
    series.values.reserve(t_grid.size());
    for (double t : t_grid) {
        const double decay = std::exp(-rates.gamma_big * t);
        series.values.push_back(rho_aa_0 * decay + steady * (1.0 - decay));
    }
    series.tau = std::move(t_grid);
    return series;
}

AtomicState steady_state_atom(const SystemParams& params, const DerivedRates& rates) {
    validate(params);
    return AtomicState::make({0.0, 0.0}, -rates.eta / rates.gamma_big);
}

SteadyStateMoments moments_from_ratios(double epsilon_over_kappa, double gamma_c_over_kappa) {
    const double e = epsilon_over_kappa;
    const double gc = gamma_c_over_kappa;
    if (!std::isfinite(e) || e < 0.0 || !std::isfinite(gc) || gc < 0.0) {
        throw std::invalid_argument("moments_from_ratios: need epsilon >= 0 and gamma_c >= 0");
    }
    if (e >= 0.5) {
        throw ThresholdError("moments_from_ratios: epsilon_over_kappa must be below 0.5");
    }

    const double x = 2.0 * e;           // pump-to-damping ratio 2 eps/kappa
    const double x2 = x * x;
    const double x3 = x2 * x;
    const double x4 = x2 * x2;
    const double om = 1.0 - x2;         // distance below threshold
    const double op = 1.0 + x2;

    SteadyStateMoments m;
    m.mean_photon_cavity = 2.0 * e * e / om - 2.0 * gc * e * e / (om * op);
    m.mean_photon_signal = 2.0 * e * e / om - 4.0 * gc * e * e / (om * om * op);
    m.mean_photon_fluorescent = 2.0 * gc * e * e / (om * om);
    m.a_squared_expect = (e > 0.0) ? m.mean_photon_cavity / (2.0 * e) : 0.0;

    m.cavity.var_plus = 1.0 + (x * (1.0 - gc) + x3) / ((1.0 - x) * op);
    m.cavity.var_minus = 1.0 - (x * (1.0 - gc) + x3) / ((1.0 + x) * op);
    m.signal.var_plus = 1.0 + x * (1.0 - x4 - 2.0 * gc) / ((1.0 - x) * (1.0 - x4));
    m.signal.var_minus = 1.0 - x * (1.0 - x4 - 2.0 * gc) / ((1.0 + x) * (1.0 - x4));
    m.fluorescent.var_plus = 1.0 + gc * x / ((1.0 - x) * om);
    m.fluorescent.var_minus = 1.0 - gc * x / ((1.0 + x) * om);
    return m;
}

SteadyStateMoments steady_state_moments(const SystemParams& params, const DerivedRates& rates) {
    (void)rates;
    validate(params);
    return moments_from_ratios(params.epsilon_over_kappa, params.gamma_c_over_kappa);
}

std::vector<AtomicState> reduced_atomic_ode(const DerivedRates& rates, const AtomicState& initial,
                                            const std::vector<double>& t_grid) {
    check_delay_grid(t_grid, "reduced_atomic_ode");
    const std::complex<double> z_plus_0 = initial.sigma_minus_expect + initial.sigma_plus_expect;
    const std::complex<double> z_minus_0 = initial.sigma_minus_expect - initial.sigma_plus_expect;
    const double sz_steady = -rates.eta / rates.gamma_big;

    std::vector<AtomicState> states;
    states.reserve(t_grid.size());
    for (double t : t_grid) {
        const std::complex<double> z_plus = z_plus_0 * std::exp(-rates.lambda_plus * t);
        const std::complex<double> z_minus = z_minus_0 * std::exp(-rates.lambda_minus * t);
        const double decay = std::exp(-rates.gamma_big * t);
        const double sz = initial.sigma_z_expect * decay + sz_steady * (1.0 - decay);
        states.push_back(AtomicState::make(0.5 * (z_plus + z_minus), sz));
    }
    return states;
}

double half_width(LightKind kind, const SystemParams& params) {
    const ComponentList components = components_for(kind, params);
    const double peak = evaluate(components, 0.0);
    const double half = 0.5 * peak;

    double lo = 0.0;
    double hi = 10.0;
    if (evaluate(components, hi) >= half) {
        throw std::runtime_error("half_width: no bracket within (0, 10] kappa");
    }
    // Monotone decreasing for omega > 0, so plain bisection converges.
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (evaluate(components, mid) > half) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double half_width_interpolated(const SpectrumCurve& curve) {
    const auto& omega = curve.omega_over_kappa;
    const auto& value = curve.values;
    if (omega.size() < 3) {
        throw std::invalid_argument("half_width_interpolated: need at least 3 samples");
    }
    const auto peak_it = std::max_element(value.begin(), value.end());
    const std::size_t peak_idx = static_cast<std::size_t>(peak_it - value.begin());
    const double half = 0.5 * *peak_it;
    for (std::size_t i = peak_idx + 1; i < value.size(); ++i) {
        if (value[i] < half) {
            const double s0 = value[i - 1];
            const double s1 = value[i];
            const double frac = (s0 - half) / (s0 - s1);
            return omega[i - 1] + frac * (omega[i] - omega[i - 1]) - omega[peak_idx];
        }
    }
    throw std::runtime_error("half_width_interpolated: half-maximum not reached within grid");
}

}  // namespace dpo
