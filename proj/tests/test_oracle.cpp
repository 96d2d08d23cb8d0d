#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "dpo/analytic.hpp"
#include "dpo/oracle.hpp"
#include "dpo/params.hpp"

using namespace dpo;
using oracle::CorrelationKind;
using oracle::DensityMatrix;
using oracle::HilbertSpace;
using oracle::Liouvillian;
using oracle::Observable;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("hilbert space validation") {
    CHECK_THROWS_AS(HilbertSpace(1), std::invalid_argument);
    CHECK(HilbertSpace(2).dimension() == 4);
    CHECK(HilbertSpace(40).dimension() == 80);
}

TEST_CASE("cutoff rule rejects a truncation too small for the pump") {
    CHECK_THROWS_AS(Liouvillian(SystemParams(0.45, 0.01), HilbertSpace(4)),
                    std::invalid_argument);
    CHECK_THROWS_AS(Liouvillian(SystemParams(0.25, 0.01), HilbertSpace(12)),
                    std::invalid_argument);
    CHECK_NOTHROW(Liouvillian(SystemParams(0.25, 0.01), HilbertSpace(14)));
}

TEST_CASE("generator is trace preserving") {
    const Liouvillian liou(SystemParams(0.35, 0.01), HilbertSpace(40));
    CHECK(liou.trace_preservation_residual() < 1e-10);
}

TEST_CASE("generator has exactly one stationary mode below threshold") {
    const Liouvillian liou(SystemParams(0.1, 0.01), HilbertSpace(11));
    const Eigen::MatrixXcd dense(liou.matrix());
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(dense, false);
    int zero_modes = 0;
    for (int i = 0; i < solver.eigenvalues().size(); ++i) {
        const auto lambda = solver.eigenvalues()(i);
        if (std::abs(lambda) < 1e-9) {
            ++zero_modes;
        }
        CHECK(lambda.real() < 1e-10);  // no growing modes
    }
    CHECK(zero_modes == 1);
}

TEST_CASE("bare damped cavity relaxes to vacuum") {
    const Liouvillian liou(0.0, 0.0, HilbertSpace(10));
    const DensityMatrix rho = oracle::steady_state(liou);
    CHECK(std::abs(rho.matrix(0, 0) - 1.0) < 1e-12);
    CHECK(rho.matrix.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(oracle::expectation(rho, Observable::PhotonNumber)) < 1e-12);
    CHECK(std::real(oracle::expectation(rho, Observable::VarPlus)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::real(oracle::expectation(rho, Observable::VarMinus)) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("uncoupled oscillator reproduces the textbook photon number") {
    // coupling switched off, pump at a quarter of threshold
    const Liouvillian liou(0.25, 0.0, HilbertSpace(40));
    const DensityMatrix rho = oracle::steady_state(liou);
    const double nbar = std::real(oracle::expectation(rho, Observable::PhotonNumber));
    CHECK(nbar == doctest::Approx(0.16666666666666666).epsilon(1e-9));
}

TEST_CASE("steady state invariants at the reference point") {
    const SystemParams params(0.3, 0.01);
    const Liouvillian liou(params, HilbertSpace(30));
    const DensityMatrix rho = oracle::steady_state(liou);

    CHECK(rho.hermiticity_error() < 1e-12);
    CHECK(rho.trace_error() < 1e-10);
    CHECK(rho.min_eigenvalue() > -1e-9);
    CHECK(rho.truncation_adequate());
    CHECK(std::abs(oracle::expectation(rho, Observable::Annihilation)) < 1e-9);
    CHECK(std::abs(oracle::expectation(rho, Observable::SigmaMinus)) < 1e-9);

    // upper-level population within twice the decay ratio of the closed form
    const double rho_aa =
        std::real(oracle::expectation(rho, Observable::ExcitedPopulation));
    CHECK(std::abs(rho_aa - 0.2647058823529412) / 0.2647058823529412 < 0.02);

    // hermitian observables have negligible imaginary parts
    CHECK(std::abs(std::imag(oracle::expectation(rho, Observable::PhotonNumber))) < 1e-12);
    CHECK(std::abs(std::imag(oracle::expectation(rho, Observable::SigmaZ))) < 1e-12);
}

TEST_CASE("truncation flag reports a tight cutoff") {
    const Liouvillian liou(0.3, 0.0, HilbertSpace(16));
    const DensityMatrix rho = oracle::steady_state(liou);
    CHECK_FALSE(rho.truncation_adequate());
}

TEST_CASE("cutoff insensitivity once adequate") {
    const SystemParams params(0.25, 0.01);
    const DensityMatrix a = oracle::steady_state(Liouvillian(params, HilbertSpace(14)));
    const DensityMatrix b = oracle::steady_state(Liouvillian(params, HilbertSpace(24)));
    const double nbar_a = std::real(oracle::expectation(a, Observable::PhotonNumber));
    const double nbar_b = std::real(oracle::expectation(b, Observable::PhotonNumber));
    CHECK(std::abs(nbar_a - nbar_b) < 1e-6);
}

TEST_CASE("closed forms converge to the oracle as the cavity gets worse-better") {
    // relative photon-number error must fall as gamma_c/kappa decreases
    double previous = 1.0;
    for (double gc : {0.04, 0.02, 0.01}) {
        const SystemParams params(0.25, gc);
        const DensityMatrix rho = oracle::steady_state(Liouvillian(params, HilbertSpace(14)));
        const double nbar = std::real(oracle::expectation(rho, Observable::PhotonNumber));
        const double analytic = moments_from_ratios(0.25, gc).mean_photon_cavity;
        const double rel = std::abs(nbar - analytic) / analytic;
        CHECK(rel < previous);
        previous = rel;
    }
}

TEST_CASE("unknown observable id is rejected") {
    CHECK_THROWS_AS(oracle::observable_from_string("bogus"), std::invalid_argument);
    CHECK(oracle::observable_from_string("a_dagger_a") == Observable::PhotonNumber);
    CHECK(oracle::observable_from_string("var_minus") == Observable::VarMinus);
}

TEST_CASE("density matrix propagation conserves the trace") {
    const SystemParams params(0.25, 0.01);
    const Liouvillian liou(params, HilbertSpace(14));
    DensityMatrix rho = oracle::steady_state(liou);
    // start away from the steady state
    rho.matrix *= 0.5;
    rho.matrix(0, 0) += 0.5;
    for (int leg = 0; leg < 4; ++leg) {
        rho = oracle::propagate(liou, rho, 50.0);
        CHECK(rho.trace_error() < 1e-8);
    }
}

TEST_CASE("two-time correlations") {
    const SystemParams params(0.25, 0.01);
    const DerivedRates rates = derive_rates(params);
    const Liouvillian liou(params, HilbertSpace(14));
    const DensityMatrix rho = oracle::steady_state(liou);

    SUBCASE("intensity correlation vanishes at zero delay") {
        const auto series =
            oracle::two_time_correlation(liou, rho, CorrelationKind::Intensity, {0.0});
        CHECK(std::real(series.values[0]) == 0.0);
        CHECK(std::imag(series.values[0]) == 0.0);
    }

    SUBCASE("atomic correlation starts at the excited population") {
        const auto series =
            oracle::two_time_correlation(liou, rho, CorrelationKind::Atomic, {0.0});
        const double expected = (rates.gamma_big - rates.eta) / (2.0 * rates.gamma_big);
        CHECK(std::abs(std::real(series.values[0]) - expected) / expected < 0.02);
        CHECK(std::abs(std::imag(series.values[0])) < 1e-12);
    }

    SUBCASE("field correlation starts at the photon number") {
        const auto series =
            oracle::two_time_correlation(liou, rho, CorrelationKind::Field, {0.0});
        const double nbar = std::real(oracle::expectation(rho, Observable::PhotonNumber));
        CHECK(std::real(series.values[0]) == doctest::Approx(nbar).epsilon(1e-10));
    }

    SUBCASE("grid validation") {
        CHECK_THROWS_AS(
            oracle::two_time_correlation(liou, rho, CorrelationKind::Atomic, {-1.0}),
            std::invalid_argument);
        CHECK_THROWS_AS(
            oracle::two_time_correlation(liou, rho, CorrelationKind::Atomic, {1.0, 0.5}),
            std::invalid_argument);
    }
}

TEST_CASE("intensity correlation tracks the closed-form g2") {
    const SystemParams params(0.10, 0.01);
    const DerivedRates rates = derive_rates(params);
    const Liouvillian liou(params, HilbertSpace(14));
    const DensityMatrix rho = oracle::steady_state(liou);

    const auto grid = linear_grid(0.0, 5.0 / rates.gamma_big, 51);
    const auto series =
        oracle::two_time_correlation(liou, rho, CorrelationKind::Intensity, grid);
    const auto reference = g2(rates, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(std::abs(std::real(series.values[i]) - reference.values[i]) < 0.05);
    }
}

TEST_CASE("pure exponential transforms to a lorentzian") {
    const double rate = 0.3;
    const double dt = 0.05;
    const std::size_t n = 1501;  // reaches 75/kappa, decayed to ~2e-10
    ComplexCorrelationSeries series;
    series.tau = linear_grid(0.0, dt * (n - 1), n);
    for (double t : series.tau) {
        series.values.emplace_back(std::exp(-rate * t), 0.0);
    }
    const auto curve =
        oracle::spectrum_from_correlation(series, linear_grid(-2.0, 2.0, 801));
    CHECK(half_width_interpolated(curve) == doctest::Approx(rate).epsilon(1e-3));
}

TEST_CASE("analytic atomic correlation reproduces the closed-form spectrum") {
    const SystemParams params(0.25, 0.01);
    const DerivedRates rates = derive_rates(params);
    const double amplitude = (rates.gamma_big - rates.eta) / (4.0 * rates.gamma_big);

    const double dt = 0.1;
    const double window = 32.0 / rates.lambda_minus;
    const auto n = static_cast<std::size_t>(window / dt) + 1;
    ComplexCorrelationSeries series;
    series.tau = linear_grid(0.0, dt * static_cast<double>(n - 1), n);
    series.values.reserve(n);
    for (double t : series.tau) {
        series.values.emplace_back(amplitude * (std::exp(-rates.lambda_plus * t) +
                                                std::exp(-rates.lambda_minus * t)),
                                   0.0);
    }

    const auto omega_grid = linear_grid(-0.1, 0.1, 401);
    const auto numeric = oracle::spectrum_from_correlation(series, omega_grid);
    const auto closed = fluorescent_spectrum(rates, omega_grid);

    // renormalize the closed form over the same window before comparing
    double area = 0.0;
    for (std::size_t i = 1; i < omega_grid.size(); ++i) {
        area += 0.5 * (closed.values[i] + closed.values[i - 1]) *
                (omega_grid[i] - omega_grid[i - 1]);
    }
    for (std::size_t i = 0; i < omega_grid.size(); ++i) {
        CHECK(std::abs(numeric.values[i] - closed.values[i] / area) < 1e-4);
    }
}

TEST_CASE("spectrum transform input validation") {
    ComplexCorrelationSeries series;
    series.tau = linear_grid(0.0, 10.0, 101);
    for (double t : series.tau) {
        series.values.emplace_back(std::exp(-3.0 * t), 0.0);
    }

    SUBCASE("accepts a decayed uniform series") {
        CHECK_NOTHROW(oracle::spectrum_from_correlation(series, linear_grid(-5.0, 5.0, 101)));
    }
    SUBCASE("rejects an undecayed window") {
        ComplexCorrelationSeries slow;
        slow.tau = linear_grid(0.0, 10.0, 101);
        for (double t : slow.tau) {
            slow.values.emplace_back(std::exp(-0.01 * t), 0.0);
        }
        CHECK_THROWS_AS(oracle::spectrum_from_correlation(slow, {}), std::runtime_error);
    }
    SUBCASE("rejects a non-uniform grid") {
        ComplexCorrelationSeries bad = series;
        bad.tau[50] += 0.2;
        CHECK_THROWS_AS(oracle::spectrum_from_correlation(bad, {}), std::invalid_argument);
    }
    SUBCASE("rejects a grid that does not start at zero") {
        ComplexCorrelationSeries bad = series;
        for (double& t : bad.tau) {
            t += 1.0;
        }
        CHECK_THROWS_AS(oracle::spectrum_from_correlation(bad, {}), std::invalid_argument);
    }
}

TEST_CASE("oracle fluorescent line is narrower than the closed form at strong pump") {
    // The exact slow coherence mode lies well below lambda_minus once the
    // pump is strong; pin the measured narrowing so regressions surface.
    const SystemParams params(0.25, 0.01);
    const DerivedRates rates = derive_rates(params);
    const Liouvillian liou(params, HilbertSpace(14));
    const DensityMatrix rho = oracle::steady_state(liou);

    const double dt = 0.25;
    const double window = 11000.0;
    const auto n = static_cast<std::size_t>(window / dt) + 1;
    const auto series = oracle::two_time_correlation(
        liou, rho, CorrelationKind::Atomic,
        linear_grid(0.0, dt * static_cast<double>(n - 1), n));
    const auto curve = oracle::spectrum_from_correlation(series, {});
    const double hw = half_width_interpolated(curve);

    CHECK(hw == doctest::Approx(0.00251).epsilon(0.08));
    CHECK(hw < 0.6 * half_width(LightKind::Fluorescent, params));
}
