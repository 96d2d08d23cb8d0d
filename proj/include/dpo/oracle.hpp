#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "dpo/analytic.hpp"
#include "dpo/params.hpp"

namespace dpo::oracle {

using Complex = std::complex<double>;
using Sparse = Eigen::SparseMatrix<Complex>;
using SparseRowMajor = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

// Truncated atom (x) Fock space. Basis index = atom * fock_cutoff + n with
// atom 0 = lower level, 1 = upper level, n = photon number.
struct HilbertSpace {
    int fock_cutoff;

    explicit HilbertSpace(int fock);
    int dimension() const { return 2 * fock_cutoff; }
};

// Elementary operators on the product space.
Sparse annihilation_op(const HilbertSpace& space);
Sparse number_op(const HilbertSpace& space);
Sparse sigma_minus_op(const HilbertSpace& space);
Sparse sigma_z_op(const HilbertSpace& space);

struct DensityMatrix {
    Eigen::MatrixXcd matrix;  // dimension 2N x 2N

    int fock_cutoff() const { return static_cast<int>(matrix.rows()) / 2; }
    double hermiticity_error() const;  // max |rho - rho^dagger|
    double trace_error() const;        // |tr(rho) - 1|
    double min_eigenvalue() const;
    // Photon-number distribution, traced over the atom.
    std::vector<double> fock_populations() const;
    // Population of the top two Fock levels below 1e-8.
    bool truncation_adequate() const;
};

// Generator of the vectorized master equation (column stacking): coherent
// part from the pump and atom-coupling Hamiltonian, dissipative part from
// cavity damping into the vacuum at rate kappa. Built in kappa units.
class Liouvillian {
public:
    Liouvillian(const SystemParams& params, const HilbertSpace& space);
    // Raw route with an explicit coupling; lets tests and reference runs use
    // a bare oscillator (coupling_g = 0) without constructing SystemParams.
    Liouvillian(double epsilon_over_kappa, double coupling_g, const HilbertSpace& space);

    const Sparse& matrix() const { return generator_; }
    const SparseRowMajor& matrix_row_major() const { return generator_row_major_; }
    const HilbertSpace& space() const { return space_; }
    int dim() const { return space_.dimension(); }
    double epsilon_over_kappa() const { return epsilon_over_kappa_; }
    double coupling_g() const { return coupling_g_; }

    const Sparse& annihilation() const { return annihilation_; }
    const Sparse& sigma_minus() const { return sigma_minus_; }

    // Max |sum_diag column| of the generator; zero for a trace-preserving map.
    double trace_preservation_residual() const;

private:
    void build();

    double epsilon_over_kappa_;
    double coupling_g_;
    HilbertSpace space_;
    Sparse annihilation_;
    Sparse sigma_minus_;
    Sparse generator_;
    SparseRowMajor generator_row_major_;
};

// Null-space solve with the trace condition replacing one row; falls back to
// time integration if the direct solve leaves a residual above 1e-9.
DensityMatrix steady_state(const Liouvillian& liouvillian);

enum class Observable {
    Annihilation,         // <a>
    PhotonNumber,         // <a^dagger a>
    ASquared,             // <a^2>
    SigmaMinus,           // <sigma_->
    SigmaZ,               // <sigma_z>
    ExcitedPopulation,    // <sigma_+ sigma_->
    VarPlus,              // 1 + 2<a^dagger a> + (<a^dagger^2> + <a^2>)
    VarMinus,             // 1 + 2<a^dagger a> - (<a^dagger^2> + <a^2>)
};

Observable observable_from_string(const std::string& name);
Complex expectation(const DensityMatrix& rho, Observable observable);

// Evolve rho for a time span (kappa units) under the master equation with an
// adaptive embedded Runge-Kutta pair, rtol 1e-10 / atol 1e-12.
DensityMatrix propagate(const Liouvillian& liouvillian, const DensityMatrix& initial, double t);

enum class CorrelationKind {
    Atomic,     // <sigma_+(t) sigma_-(t+tau)>_ss
    Field,      // <a^dagger(t) a(t+tau)>_ss
    Intensity,  // normalized <sigma_+ sigma_+ sigma_- sigma_->, i.e. g2(tau)
};

// Quantum-regression evaluation: seed rho_ss with the earlier-time operator,
// evolve under the Liouvillian, trace against the later-time operator at
// each delay. Intensity results are normalized by <sigma_+ sigma_->_ss^2 and
// carry zero imaginary part up to roundoff.
ComplexCorrelationSeries two_time_correlation(const Liouvillian& liouvillian,
                                              const DensityMatrix& rho_ss, CorrelationKind kind,
                                              const std::vector<double>& tau_grid);

// One-sided Fourier transform of a decayed correlation (trapezoid on a
// uniform delay grid), normalized to unit area over the frequency window.
// Requires |C(tau_end)| <= 1e-8 |C(0)|.
SpectrumCurve spectrum_from_correlation(const ComplexCorrelationSeries& series,
                                        std::vector<double> omega_grid,
                                        LightKind kind = LightKind::Fluorescent);

}  // namespace dpo::oracle
