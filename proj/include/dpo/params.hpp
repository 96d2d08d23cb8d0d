#pragma once

#include <stdexcept>
#include <string>

namespace dpo {

// Pump strength at or above half the cavity damping rate: every
// below-threshold formula in the model has a pole there.
class ThresholdError : public std::invalid_argument {
public:
    explicit ThresholdError(const std::string& what) : std::invalid_argument(what) {}
};

// Physical inputs, stored as dimensionless ratios plus one angular-frequency
// scale kappa. All derived quantities are reported in units of kappa.
struct SystemParams {
    double epsilon_over_kappa = 0.0;   // pump amplitude / cavity damping, in [0, 0.5)
    double gamma_c_over_kappa = 0.01;  // cavity-enhanced atomic decay / cavity damping, > 0
    double kappa = 1.0;                // absolute scale, > 0

    SystemParams() = default;
    SystemParams(double eps_over_kappa, double gc_over_kappa, double kappa_scale = 1.0);

    // The closed forms assume the cavity decays much faster than the atom.
    bool bad_cavity_warning() const { return gamma_c_over_kappa > 0.1; }

    // Atom-cavity coupling in kappa units, g = sqrt(gamma_c * kappa) / 2.
    double coupling_g() const;
};

// Throws ThresholdError for epsilon_over_kappa >= 0.5, std::invalid_argument
// for any other out-of-range field.
void validate(const SystemParams& params);

// Rates governing the reduced atomic dynamics and the cavity quadratures,
// all in units of kappa.
struct DerivedRates {
    double eta = 0.0;           // saturation rate gamma_c / (1 - 4 eps^2/kappa^2)
    double gamma_big = 0.0;     // pump-enhanced atomic decay rate
    double lambda_plus = 0.0;   // gamma_big * (1/2 + eps/kappa)
    double lambda_minus = 0.0;  // gamma_big * (1/2 - eps/kappa)
    double mu_plus = 0.0;       // kappa-unit quadrature decay, 1/2 + eps/kappa
    double mu_minus = 0.0;      // 1/2 - eps/kappa
};

DerivedRates derive_rates(const SystemParams& params);

// Flat key-value config: keys epsilon_over_kappa, gamma_c_over_kappa and
// optionally kappa (defaults to 1).
SystemParams params_from_json_text(const std::string& text);
SystemParams params_from_file(const std::string& path);

}  // namespace dpo
