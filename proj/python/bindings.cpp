#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dpo/analytic.hpp"
#include "dpo/oracle.hpp"
#include "dpo/params.hpp"
#include "dpo/verify.hpp"
#include "dpo/version.hpp"

namespace py = pybind11;

namespace {

dpo::oracle::CorrelationKind correlation_kind_from_string(const std::string& name) {
    if (name == "atomic") return dpo::oracle::CorrelationKind::Atomic;
    if (name == "field") return dpo::oracle::CorrelationKind::Field;
    if (name == "intensity") return dpo::oracle::CorrelationKind::Intensity;
    throw std::invalid_argument("unknown correlation kind: " + name);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Below-threshold parametric oscillator with an intracavity two-level atom";
    m.attr("__version__") = dpo::kArtifactVersion;

    py::register_exception<dpo::ThresholdError>(m, "ThresholdError", PyExc_ValueError);

    py::enum_<dpo::LightKind>(m, "LightKind")
        .value("FLUORESCENT", dpo::LightKind::Fluorescent)
        .value("CAVITY", dpo::LightKind::Cavity)
        .value("SIGNAL", dpo::LightKind::Signal);

    py::class_<dpo::SystemParams>(m, "SystemParams")
        .def(py::init<double, double, double>(), py::arg("epsilon_over_kappa"),
             py::arg("gamma_c_over_kappa"), py::arg("kappa") = 1.0)
        .def_readonly("epsilon_over_kappa", &dpo::SystemParams::epsilon_over_kappa)
        .def_readonly("gamma_c_over_kappa", &dpo::SystemParams::gamma_c_over_kappa)
        .def_readonly("kappa", &dpo::SystemParams::kappa)
        .def("bad_cavity_warning", &dpo::SystemParams::bad_cavity_warning)
        .def("coupling_g", &dpo::SystemParams::coupling_g);

    py::class_<dpo::DerivedRates>(m, "DerivedRates")
        .def_readonly("eta", &dpo::DerivedRates::eta)
        .def_readonly("gamma_big", &dpo::DerivedRates::gamma_big)
        .def_readonly("lambda_plus", &dpo::DerivedRates::lambda_plus)
        .def_readonly("lambda_minus", &dpo::DerivedRates::lambda_minus)
        .def_readonly("mu_plus", &dpo::DerivedRates::mu_plus)
        .def_readonly("mu_minus", &dpo::DerivedRates::mu_minus);

    m.def("derive_rates", &dpo::derive_rates, py::arg("params"));
    m.def("params_from_json_text", &dpo::params_from_json_text, py::arg("text"));

    py::class_<dpo::SpectrumCurve>(m, "SpectrumCurve")
        .def_readonly("omega_over_kappa", &dpo::SpectrumCurve::omega_over_kappa)
        .def_readonly("values", &dpo::SpectrumCurve::values)
        .def_readonly("kind", &dpo::SpectrumCurve::kind);

    py::class_<dpo::AtomicState>(m, "AtomicState")
        .def(py::init(&dpo::AtomicState::make), py::arg("sigma_minus"), py::arg("sigma_z"))
        .def_readonly("sigma_minus_expect", &dpo::AtomicState::sigma_minus_expect)
        .def_readonly("sigma_plus_expect", &dpo::AtomicState::sigma_plus_expect)
        .def_readonly("sigma_z_expect", &dpo::AtomicState::sigma_z_expect)
        .def_readonly("rho_aa", &dpo::AtomicState::rho_aa);

    py::class_<dpo::QuadratureVariances>(m, "QuadratureVariances")
        .def_readonly("var_plus", &dpo::QuadratureVariances::var_plus)
        .def_readonly("var_minus", &dpo::QuadratureVariances::var_minus);

    py::class_<dpo::SteadyStateMoments>(m, "SteadyStateMoments")
        .def_readonly("mean_photon_cavity", &dpo::SteadyStateMoments::mean_photon_cavity)
        .def_readonly("mean_photon_signal", &dpo::SteadyStateMoments::mean_photon_signal)
        .def_readonly("mean_photon_fluorescent",
                      &dpo::SteadyStateMoments::mean_photon_fluorescent)
        .def_readonly("a_squared_expect", &dpo::SteadyStateMoments::a_squared_expect)
        .def_readonly("cavity", &dpo::SteadyStateMoments::cavity)
        .def_readonly("signal", &dpo::SteadyStateMoments::signal)
        .def_readonly("fluorescent", &dpo::SteadyStateMoments::fluorescent)
        .def("variance", &dpo::SteadyStateMoments::variance, py::arg("kind"),
             py::return_value_policy::copy);

    m.def(
        "fluorescent_spectrum",
        [](const dpo::SystemParams& p, std::vector<double> grid) {
            return dpo::fluorescent_spectrum(dpo::derive_rates(p), std::move(grid));
        },
        py::arg("params"), py::arg("omega_grid"));
    m.def(
        "cavity_spectrum",
        [](const dpo::SystemParams& p, std::vector<double> grid) {
            return dpo::cavity_spectrum(p, dpo::derive_rates(p), std::move(grid));
        },
        py::arg("params"), py::arg("omega_grid"));
    m.def(
        "signal_spectrum",
        [](const dpo::SystemParams& p, std::vector<double> grid) {
            return dpo::signal_spectrum(p, std::move(grid));
        },
        py::arg("params"), py::arg("omega_grid"));
    m.def(
        "g2",
        [](const dpo::SystemParams& p, std::vector<double> taus) {
            return dpo::g2(dpo::derive_rates(p), std::move(taus)).values;
        },
        py::arg("params"), py::arg("tau_grid"));
    m.def(
        "upper_level_population",
        [](const dpo::SystemParams& p, double rho0, std::vector<double> ts) {
            return dpo::upper_level_population(p, dpo::derive_rates(p), rho0, std::move(ts))
                .values;
        },
        py::arg("params"), py::arg("rho_aa_0"), py::arg("t_grid"));
    m.def(
        "steady_state_atom",
        [](const dpo::SystemParams& p) { return dpo::steady_state_atom(p, dpo::derive_rates(p)); },
        py::arg("params"));
    m.def(
        "steady_state_moments",
        [](const dpo::SystemParams& p) {
            return dpo::steady_state_moments(p, dpo::derive_rates(p));
        },
        py::arg("params"));
    m.def("moments_from_ratios", &dpo::moments_from_ratios, py::arg("epsilon_over_kappa"),
          py::arg("gamma_c_over_kappa"));
    m.def(
        "reduced_atomic_ode",
        [](const dpo::SystemParams& p, const dpo::AtomicState& initial, std::vector<double> ts) {
            return dpo::reduced_atomic_ode(dpo::derive_rates(p), initial, ts);
        },
        py::arg("params"), py::arg("initial"), py::arg("t_grid"));
    m.def("half_width", &dpo::half_width, py::arg("kind"), py::arg("params"));
    m.def("half_width_interpolated", &dpo::half_width_interpolated, py::arg("curve"));
    m.def("linear_grid", &dpo::linear_grid, py::arg("min"), py::arg("max"), py::arg("points"));
    m.def("default_spectrum_grid", &dpo::default_spectrum_grid, py::arg("kind"));

    // Exact master-equation oracle.
    auto oracle = m.def_submodule("oracle", "Exact master-equation ground truth");

    py::class_<dpo::oracle::HilbertSpace>(oracle, "HilbertSpace")
        .def(py::init<int>(), py::arg("fock_cutoff"))
        .def_readonly("fock_cutoff", &dpo::oracle::HilbertSpace::fock_cutoff)
        .def("dimension", &dpo::oracle::HilbertSpace::dimension);

    py::class_<dpo::oracle::DensityMatrix>(oracle, "DensityMatrix")
        .def_readonly("matrix", &dpo::oracle::DensityMatrix::matrix)
        .def("hermiticity_error", &dpo::oracle::DensityMatrix::hermiticity_error)
        .def("trace_error", &dpo::oracle::DensityMatrix::trace_error)
        .def("min_eigenvalue", &dpo::oracle::DensityMatrix::min_eigenvalue)
        .def("fock_populations", &dpo::oracle::DensityMatrix::fock_populations)
        .def("truncation_adequate", &dpo::oracle::DensityMatrix::truncation_adequate);

    py::class_<dpo::oracle::Liouvillian>(oracle, "Liouvillian")
        .def(py::init<const dpo::SystemParams&, const dpo::oracle::HilbertSpace&>(),
             py::arg("params"), py::arg("space"))
        .def(py::init<double, double, const dpo::oracle::HilbertSpace&>(),
             py::arg("epsilon_over_kappa"), py::arg("coupling_g"), py::arg("space"))
        .def("dim", &dpo::oracle::Liouvillian::dim)
        .def("trace_preservation_residual",
             &dpo::oracle::Liouvillian::trace_preservation_residual);

    oracle.def("steady_state", &dpo::oracle::steady_state, py::arg("liouvillian"),
               py::call_guard<py::gil_scoped_release>());
    oracle.def(
        "expectation",
        [](const dpo::oracle::DensityMatrix& rho, const std::string& name) {
            return dpo::oracle::expectation(rho, dpo::oracle::observable_from_string(name));
        },
        py::arg("rho"), py::arg("observable"));
    oracle.def(
        "two_time_correlation",
        [](const dpo::oracle::Liouvillian& liou, const dpo::oracle::DensityMatrix& rho,
           const std::string& kind, std::vector<double> taus) {
            const auto series = dpo::oracle::two_time_correlation(
                liou, rho, correlation_kind_from_string(kind), taus);
            return series.values;
        },
        py::arg("liouvillian"), py::arg("rho_ss"), py::arg("kind"), py::arg("tau_grid"),
        py::call_guard<py::gil_scoped_release>());
    oracle.def(
        "spectrum_from_correlation",
        [](std::vector<double> taus, std::vector<std::complex<double>> values,
           std::vector<double> omegas, dpo::LightKind kind) {
            dpo::ComplexCorrelationSeries series{std::move(taus), std::move(values)};
            return dpo::oracle::spectrum_from_correlation(series, std::move(omegas), kind);
        },
        py::arg("tau_grid"), py::arg("values"), py::arg("omega_grid") = std::vector<double>{},
        py::arg("kind") = dpo::LightKind::Fluorescent);
    oracle.def(
        "propagate",
        [](const dpo::oracle::Liouvillian& liou, const dpo::oracle::DensityMatrix& rho,
           double t) { return dpo::oracle::propagate(liou, rho, t); },
        py::arg("liouvillian"), py::arg("initial"), py::arg("t"),
        py::call_guard<py::gil_scoped_release>());

    m.def(
        "run_verify_json",
        [](std::vector<double> points, double gamma_c, int fock_cutoff, bool parallel) {
            dpo::VerifyOptions options;
            options.epsilon_points = std::move(points);
            options.gamma_c_over_kappa = gamma_c;
            options.fock_cutoff = fock_cutoff;
            options.parallel = parallel;
            return dpo::report_to_json(dpo::run_verify(options)).dump();
        },
        py::arg("epsilon_points") = std::vector<double>{0.1, 0.25, 0.35},
        py::arg("gamma_c_over_kappa") = 0.01, py::arg("fock_cutoff") = 40,
        py::arg("parallel") = true, py::call_guard<py::gil_scoped_release>());
}
