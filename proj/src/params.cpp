#include "dpo/params.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace dpo {

SystemParams::SystemParams(double eps_over_kappa, double gc_over_kappa, double kappa_scale)
    : epsilon_over_kappa(eps_over_kappa), gamma_c_over_kappa(gc_over_kappa), kappa(kappa_scale) {
    validate(*this);
}

double SystemParams::coupling_g() const {
    return 0.5 * std::sqrt(gamma_c_over_kappa);
}

void validate(const SystemParams& params) {
    if (!std::isfinite(params.epsilon_over_kappa) || !std::isfinite(params.gamma_c_over_kappa) ||
        !std::isfinite(params.kappa)) {
        throw std::invalid_argument("SystemParams: fields must be finite");
    }
    if (params.epsilon_over_kappa < 0.0) {
        throw std::invalid_argument("SystemParams: epsilon_over_kappa must be >= 0");
    }
    if (params.epsilon_over_kappa >= 0.5) {
        std::ostringstream msg;
        msg << "SystemParams: epsilon_over_kappa = " << params.epsilon_over_kappa
            << " is at or above the oscillation threshold 0.5";
        throw ThresholdError(msg.str());
    }
    if (params.gamma_c_over_kappa <= 0.0) {
        throw std::invalid_argument("SystemParams: gamma_c_over_kappa must be > 0");
    }
    if (params.kappa <= 0.0) {
        throw std::invalid_argument("SystemParams: kappa must be > 0");
    }
}

DerivedRates derive_rates(const SystemParams& params) {
    validate(params);
    const double e = params.epsilon_over_kappa;
    const double gc = params.gamma_c_over_kappa;
    const double x2 = 4.0 * e * e;

    DerivedRates rates;
    rates.eta = gc / (1.0 - x2);
    rates.gamma_big = gc * (1.0 + x2) / ((1.0 - x2) * (1.0 - x2));
    rates.lambda_plus = rates.gamma_big * (0.5 + e);
    rates.lambda_minus = rates.gamma_big * (0.5 - e);
    rates.mu_plus = 0.5 + e;
    rates.mu_minus = 0.5 - e;
    return rates;
}

SystemParams params_from_json_text(const std::string& text) {
    nlohmann::json config = nlohmann::json::parse(text);
    if (!config.is_object()) {
        throw std::invalid_argument("params config: expected a flat key-value object");
    }
    if (!config.contains("epsilon_over_kappa") || !config.contains("gamma_c_over_kappa")) {
        throw std::invalid_argument(
            "params config: keys epsilon_over_kappa and gamma_c_over_kappa are required");
    }
    SystemParams params;
    params.epsilon_over_kappa = config.at("epsilon_over_kappa").get<double>();
    params.gamma_c_over_kappa = config.at("gamma_c_over_kappa").get<double>();
    params.kappa = config.value("kappa", 1.0);
    validate(params);
    return params;
}

SystemParams params_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("params config: cannot open " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return params_from_json_text(buffer.str());
}

}  // namespace dpo
