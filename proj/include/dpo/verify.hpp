#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dpo/params.hpp"

namespace dpo {

// Oracle-vs-analytic comparison suite. Tolerance bands follow the artifact's
// acceptance thresholds; entries outside those declared bands are reported
// as informational (gated = false) and do not drive the exit status.
struct VerifyOptions {
    std::vector<double> epsilon_points{0.1, 0.25, 0.35};
    double gamma_c_over_kappa = 0.01;
    int fock_cutoff = 40;
    bool parallel = true;
};

struct VerifyEntry {
    std::string name;
    double analytic = 0.0;
    double oracle = 0.0;
    double deviation = 0.0;      // interpreted per tolerance_kind
    double tolerance = 0.0;
    std::string tolerance_kind;  // "relative" | "absolute" | "informational"
    bool gated = true;
    bool pass = false;
    std::string note;
};

struct VerifyPoint {
    double epsilon_over_kappa = 0.0;
    double gamma_c_over_kappa = 0.0;
    int fock_cutoff = 0;
    std::vector<VerifyEntry> entries;
    std::vector<std::string> warnings;
    std::string error;  // non-empty when the oracle could not run at this point
    bool pass = false;
};

struct VerifyReport {
    VerifyOptions options;
    std::vector<VerifyPoint> points;
    bool overall_pass = false;
};

VerifyPoint verify_point(double epsilon_over_kappa, double gamma_c_over_kappa, int fock_cutoff);
VerifyReport run_verify(const VerifyOptions& options);
nlohmann::ordered_json report_to_json(const VerifyReport& report);

}  // namespace dpo
