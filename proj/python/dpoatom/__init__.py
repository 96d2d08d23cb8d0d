"""Below-threshold degenerate parametric oscillator with an intracavity two-level atom.

Closed-form spectra, correlation functions, photon numbers and quadrature
variances, plus an exact master-equation oracle for validating them.
"""

import json as _json

from dpoatom._core import (
    AtomicState,
    DerivedRates,
    LightKind,
    QuadratureVariances,
    SpectrumCurve,
    SteadyStateMoments,
    SystemParams,
    ThresholdError,
    __version__,
    cavity_spectrum,
    default_spectrum_grid,
    derive_rates,
    fluorescent_spectrum,
    g2,
    half_width,
    half_width_interpolated,
    linear_grid,
    moments_from_ratios,
    oracle,
    params_from_json_text,
    reduced_atomic_ode,
    run_verify_json,
    signal_spectrum,
    steady_state_atom,
    steady_state_moments,
    upper_level_population,
)

__all__ = [
    "AtomicState",
    "DerivedRates",
    "LightKind",
    "QuadratureVariances",
    "SpectrumCurve",
    "SteadyStateMoments",
    "SystemParams",
    "ThresholdError",
    "__version__",
    "cavity_spectrum",
    "default_spectrum_grid",
    "derive_rates",
    "fluorescent_spectrum",
    "g2",
    "half_width",
    "half_width_interpolated",
    "linear_grid",
    "moments_from_ratios",
    "oracle",
    "params_from_json_text",
    "reduced_atomic_ode",
    "run_verify",
    "run_verify_json",
    "signal_spectrum",
    "steady_state_atom",
    "steady_state_moments",
    "upper_level_population",
]


def run_verify(epsilon_points=(0.1, 0.25, 0.35), gamma_c_over_kappa=0.01, fock_cutoff=40,
               parallel=True):
    """Run the oracle-vs-analytic suite and return the report as a dict."""
    return _json.loads(
        run_verify_json(list(epsilon_points), gamma_c_over_kappa, fock_cutoff, parallel)
    )
