#include "dpo/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/SparseLU>
#include <unsupported/Eigen/KroneckerProduct>

namespace dpo::oracle {

namespace {

using Eigen::VectorXcd;
using Triplet = Eigen::Triplet<Complex>;

Sparse identity(int dim) {
    Sparse id(dim, dim);
    id.setIdentity();
    return id;
}

// Tr(O X) for sparse O against a column-stacked X.
Complex trace_against(const Sparse& op, const VectorXcd& x_vec, int dim) {
    Complex sum = 0.0;
    for (int k = 0; k < op.outerSize(); ++k) {
        for (Sparse::InnerIterator it(op, k); it; ++it) {
            // O(i,j) * X(j,i); X(j,i) sits at j + i*dim.
            sum += it.value() * x_vec(it.row() * dim + it.col());
        }
    }
    return sum;
}

Complex trace_of_vec(const VectorXcd& x_vec, int dim) {
    Complex sum = 0.0;
    for (int i = 0; i < dim; ++i) {
        sum += x_vec(i * (dim + 1));
    }
    return sum;
}

// Dormand-Prince 5(4) with FSAL and PI-free standard step control. The
// right-hand side is the (autonomous) vectorized master equation.
class Dp5Integrator {
public:
    Dp5Integrator(const SparseRowMajor& generator, double rtol, double atol)
        : L_(generator), rtol_(rtol), atol_(atol) {
        const auto n = L_.rows();
        for (auto* k : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &ytmp_, &yerr_}) {
            k->resize(n);
        }
    }

    // Advance y over a time span, continuing with the current step size.
    void advance(VectorXcd& y, double span) {
        if (span <= 0.0) {
            return;
        }
        double t = 0.0;
        if (!fsal_valid_) {
            k1_.noalias() = L_ * y;
            fsal_valid_ = true;
        }
        int consecutive_rejects = 0;
        while (t < span) {
            const double h = std::min(h_, span - t);
            const double err = attempt_step(y, h);
            if (err <= 1.0) {
                t += h;
                y.swap(ytmp_);
                k1_.swap(k7_);  // FSAL
                consecutive_rejects = 0;
                const double grow = (err == 0.0) ? 5.0 : 0.9 * std::pow(err, -0.2);
                h_ = h * std::clamp(grow, 0.2, 5.0);
            } else {
                ++consecutive_rejects;
                if (consecutive_rejects > 200) {
                    throw std::runtime_error("oracle propagation: step rejection limit reached");
                }
                h_ = h * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
                if (h_ < 1e-13) {
                    throw std::runtime_error("oracle propagation: step size underflow");
                }
            }
        }
    }

private:
    // Returns the scaled error; on success the new state is in ytmp_ and the
    // new derivative in k7_.
    double attempt_step(const VectorXcd& y, double h) {
        ytmp_.noalias() = y + h * (a21 * k1_);
        k2_.noalias() = L_ * ytmp_;
        ytmp_.noalias() = y + h * (a31 * k1_ + a32 * k2_);
        k3_.noalias() = L_ * ytmp_;
        ytmp_.noalias() = y + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
        k4_.noalias() = L_ * ytmp_;
        ytmp_.noalias() = y + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
        k5_.noalias() = L_ * ytmp_;
        ytmp_.noalias() = y + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
        k6_.noalias() = L_ * ytmp_;
        ytmp_.noalias() = y + h * (b1 * k1_ + b3 * k3_ + b4 * k4_ + b5 * k5_ + b6 * k6_);
        k7_.noalias() = L_ * ytmp_;
        yerr_.noalias() =
            h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);

        const auto scale = (atol_ + rtol_ * y.cwiseAbs().cwiseMax(ytmp_.cwiseAbs()).array());
        return std::sqrt((yerr_.cwiseAbs().array() / scale).square().mean());
    }

    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                            a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
    static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                            b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                            e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

    const SparseRowMajor& L_;
    double rtol_;
    double atol_;
    double h_ = 1e-3;
    bool fsal_valid_ = false;
    VectorXcd k1_, k2_, k3_, k4_, k5_, k6_, k7_, ytmp_, yerr_;
};

void check_tau_grid(const std::vector<double>& grid) {
    if (grid.empty()) {
        throw std::invalid_argument("two_time_correlation: delay grid must not be empty");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) || grid[i] < 0.0) {
            throw std::invalid_argument("two_time_correlation: delays must be finite and >= 0");
        }
        if (i > 0 && grid[i] < grid[i - 1]) {
            throw std::invalid_argument("two_time_correlation: delay grid must be ordered");
        }
    }
}

int required_cutoff(double epsilon_over_kappa, double gamma_c_over_kappa) {
    const double nbar =
        moments_from_ratios(epsilon_over_kappa, gamma_c_over_kappa).mean_photon_cavity;
    return static_cast<int>(std::ceil(10.0 + 20.0 * nbar));
}

}  // namespace

HilbertSpace::HilbertSpace(int fock) : fock_cutoff(fock) {
    if (fock < 2) {
        throw std::invalid_argument("HilbertSpace: fock_cutoff must be >= 2");
    }
}

Sparse annihilation_op(const HilbertSpace& space) {
    const int n_fock = space.fock_cutoff;
    std::vector<Triplet> trips;
    trips.reserve(2 * (n_fock - 1));
    for (int atom = 0; atom < 2; ++atom) {
        for (int n = 1; n < n_fock; ++n) {
            trips.emplace_back(atom * n_fock + n - 1, atom * n_fock + n, std::sqrt(double(n)));
        }
    }
    Sparse op(space.dimension(), space.dimension());
    op.setFromTriplets(trips.begin(), trips.end());
    return op;
}

Sparse number_op(const HilbertSpace& space) {
    const int n_fock = space.fock_cutoff;
    std::vector<Triplet> trips;
    trips.reserve(2 * n_fock);
    for (int atom = 0; atom < 2; ++atom) {
        for (int n = 1; n < n_fock; ++n) {
            trips.emplace_back(atom * n_fock + n, atom * n_fock + n, double(n));
        }
    }
    Sparse op(space.dimension(), space.dimension());
    op.setFromTriplets(trips.begin(), trips.end());
    return op;
}

Sparse sigma_minus_op(const HilbertSpace& space) {
    const int n_fock = space.fock_cutoff;
    std::vector<Triplet> trips;
    trips.reserve(n_fock);
    for (int n = 0; n < n_fock; ++n) {
        trips.emplace_back(n, n_fock + n, 1.0);  // |lower, n><upper, n|
    }
    Sparse op(space.dimension(), space.dimension());
    op.setFromTriplets(trips.begin(), trips.end());
    return op;
}

Sparse sigma_z_op(const HilbertSpace& space) {
    const int n_fock = space.fock_cutoff;
    std::vector<Triplet> trips;
    trips.reserve(2 * n_fock);
    for (int n = 0; n < n_fock; ++n) {
        trips.emplace_back(n, n, -1.0);
        trips.emplace_back(n_fock + n, n_fock + n, 1.0);
    }
    Sparse op(space.dimension(), space.dimension());
    op.setFromTriplets(trips.begin(), trips.end());
    return op;
}

double DensityMatrix::hermiticity_error() const {
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::trace_error() const {
    return std::abs(matrix.trace() - Complex(1.0, 0.0));
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
        0.5 * (matrix + matrix.adjoint()), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

std::vector<double> DensityMatrix::fock_populations() const {
    const int n_fock = fock_cutoff();
    std::vector<double> populations(n_fock, 0.0);
    for (int n = 0; n < n_fock; ++n) {
        populations[n] = std::real(matrix(n, n)) + std::real(matrix(n_fock + n, n_fock + n));
    }
    return populations;
}

bool DensityMatrix::truncation_adequate() const {
    const auto populations = fock_populations();
    const std::size_t n = populations.size();
    return populations[n - 1] + populations[n - 2] < 1e-8;
}

Liouvillian::Liouvillian(const SystemParams& params, const HilbertSpace& space)
    : epsilon_over_kappa_(params.epsilon_over_kappa),
      coupling_g_(params.coupling_g()),
      space_(space) {
    validate(params);
    build();
}

Liouvillian::Liouvillian(double epsilon_over_kappa, double coupling_g, const HilbertSpace& space)
    : epsilon_over_kappa_(epsilon_over_kappa), coupling_g_(coupling_g), space_(space) {
    if (!(epsilon_over_kappa >= 0.0) || epsilon_over_kappa >= 0.5) {
        throw ThresholdError("Liouvillian: epsilon_over_kappa must lie in [0, 0.5)");
    }
    if (!(coupling_g >= 0.0)) {
        throw std::invalid_argument("Liouvillian: coupling_g must be >= 0");
    }
    build();
}

void Liouvillian::build() {
    const int needed =
        required_cutoff(epsilon_over_kappa_, 4.0 * coupling_g_ * coupling_g_);
    if (space_.fock_cutoff < needed) {
        std::ostringstream msg;
        msg << "Liouvillian: fock_cutoff " << space_.fock_cutoff
            << " too small for epsilon_over_kappa = " << epsilon_over_kappa_
            << " (need at least " << needed << ")";
        throw std::invalid_argument(msg.str());
    }

    annihilation_ = annihilation_op(space_);
    sigma_minus_ = sigma_minus_op(space_);
    const Sparse num = number_op(space_);
    const Sparse id = identity(space_.dimension());

    const Complex i_unit(0.0, 1.0);
    const Sparse a_dag = annihilation_.adjoint();
    const Sparse sigma_plus = sigma_minus_.adjoint();
    Sparse hamiltonian =
        (i_unit * epsilon_over_kappa_ / 2.0) *
            Sparse(a_dag * a_dag - annihilation_ * annihilation_) +
        (i_unit * coupling_g_) * Sparse(sigma_plus * annihilation_ - a_dag * sigma_minus_);

    // Column-stacked superoperator: A rho B maps to (B^T kron A) vec(rho).
    const Sparse h_t = hamiltonian.transpose();
    const Sparse a_conj = annihilation_.conjugate();
    generator_ = Sparse(-i_unit * (kroneckerProduct(id, hamiltonian) - kroneckerProduct(h_t, id))) +
                 Sparse(kroneckerProduct(a_conj, annihilation_)) -
                 Sparse(0.5 * kroneckerProduct(id, num)) -
                 Sparse(0.5 * kroneckerProduct(num, id));
    generator_.makeCompressed();
    generator_row_major_ = generator_;
}

double Liouvillian::trace_preservation_residual() const {
    const int dim = space_.dimension();
    double residual = 0.0;
    for (int col = 0; col < generator_.outerSize(); ++col) {
        Complex column_sum = 0.0;
        for (Sparse::InnerIterator it(generator_, col); it; ++it) {
            const int row = static_cast<int>(it.row());
            if (row % (dim + 1) == 0) {  // diagonal positions of the stacked matrix
                column_sum += it.value();
            }
        }
        residual = std::max(residual, std::abs(column_sum));
    }
    return residual;
}

DensityMatrix steady_state(const Liouvillian& liouvillian) {
    const int dim = liouvillian.dim();
    const int size = dim * dim;
    const Sparse& generator = liouvillian.matrix();

    // Replace the first row with the trace condition.
    std::vector<Triplet> trips;
    trips.reserve(generator.nonZeros() + dim);
    for (int col = 0; col < generator.outerSize(); ++col) {
        for (Sparse::InnerIterator it(generator, col); it; ++it) {
            if (it.row() != 0) {
                trips.emplace_back(it.row(), it.col(), it.value());
            }
        }
    }
    for (int i = 0; i < dim; ++i) {
        trips.emplace_back(0, i * (dim + 1), 1.0);
    }
    Sparse constrained(size, size);
    constrained.setFromTriplets(trips.begin(), trips.end());
    constrained.makeCompressed();

    Eigen::SparseLU<Sparse> solver;
    solver.compute(constrained);
    bool direct_ok = (solver.info() == Eigen::Success);
    VectorXcd solution;
    if (direct_ok) {
        VectorXcd rhs = VectorXcd::Zero(size);
        rhs(0) = 1.0;
        solution = solver.solve(rhs);
        direct_ok = (solver.info() == Eigen::Success);
    }

    if (direct_ok) {
        const double residual = (generator * solution).cwiseAbs().maxCoeff();
        const Eigen::Map<const Eigen::MatrixXcd> rho_map(solution.data(), dim, dim);
        const double herm = (rho_map - rho_map.adjoint()).cwiseAbs().maxCoeff();
        if (herm > 1e-9) {
            throw std::runtime_error(
                "steady_state: non-Hermitian null vector; degenerate null space suspected");
        }
        if (residual < 1e-9) {
            DensityMatrix rho;
            rho.matrix = 0.5 * (rho_map + rho_map.adjoint());
            return rho;
        }
    }

    // Fallback: relax an initial state until the generator residual is tiny.
    Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(dim, dim);
    rho0(0, 0) = 1.0;
    VectorXcd y = Eigen::Map<VectorXcd>(rho0.data(), size);
    Dp5Integrator integrator(liouvillian.matrix_row_major(), 1e-10, 1e-12);
    const double chunk = 50.0;
    for (int iter = 0; iter < 4000; ++iter) {
        integrator.advance(y, chunk);
        if ((generator * y).cwiseAbs().maxCoeff() < 1e-10) {
            const Eigen::Map<const Eigen::MatrixXcd> rho_map(y.data(), dim, dim);
            DensityMatrix rho;
            rho.matrix = 0.5 * (rho_map + rho_map.adjoint());
            return rho;
        }
    }
    throw std::runtime_error("steady_state: time-integration fallback did not converge");
}

Observable observable_from_string(const std::string& name) {
    if (name == "a") return Observable::Annihilation;
    if (name == "a_dagger_a") return Observable::PhotonNumber;
    if (name == "a_squared") return Observable::ASquared;
    if (name == "sigma_minus") return Observable::SigmaMinus;
    if (name == "sigma_z") return Observable::SigmaZ;
    if (name == "sigma_plus_sigma_minus") return Observable::ExcitedPopulation;
    if (name == "var_plus") return Observable::VarPlus;
    if (name == "var_minus") return Observable::VarMinus;
    throw std::invalid_argument("unknown observable id: " + name);
}

Complex expectation(const DensityMatrix& rho, Observable observable) {
    const HilbertSpace space(rho.fock_cutoff());
    const int dim = space.dimension();

    const auto trace_op = [&](const Sparse& op) {
        Complex sum = 0.0;
        for (int k = 0; k < op.outerSize(); ++k) {
            for (Sparse::InnerIterator it(op, k); it; ++it) {
                sum += it.value() * rho.matrix(it.col(), it.row());
            }
        }
        return sum;
    };

    switch (observable) {
        case Observable::Annihilation:
            return trace_op(annihilation_op(space));
        case Observable::PhotonNumber:
            return trace_op(number_op(space));
        case Observable::ASquared: {
            const Sparse a = annihilation_op(space);
            return trace_op(Sparse(a * a));
        }
        case Observable::SigmaMinus:
            return trace_op(sigma_minus_op(space));
        case Observable::SigmaZ:
            return trace_op(sigma_z_op(space));
        case Observable::ExcitedPopulation: {
            const Sparse sm = sigma_minus_op(space);
            return trace_op(Sparse(Sparse(sm.adjoint()) * sm));
        }
        case Observable::VarPlus:
        case Observable::VarMinus: {
            // 1 + 2<n> +- (<a^dagger^2> + <a^2>), valid because <a>_ss = 0.
            const double n = std::real(expectation(rho, Observable::PhotonNumber));
            const double a2 = std::real(expectation(rho, Observable::ASquared));
            const double sign = (observable == Observable::VarPlus) ? 1.0 : -1.0;
            return Complex(1.0 + 2.0 * n + sign * 2.0 * a2, 0.0);
        }
    }
    throw std::invalid_argument("unknown observable id");
}

DensityMatrix propagate(const Liouvillian& liouvillian, const DensityMatrix& initial, double t) {
    if (initial.matrix.rows() != liouvillian.dim()) {
        throw std::invalid_argument("propagate: state dimension mismatch");
    }
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("propagate: time span must be finite and >= 0");
    }
    Eigen::MatrixXcd state = initial.matrix;
    VectorXcd y = Eigen::Map<VectorXcd>(state.data(), state.size());
    Dp5Integrator integrator(liouvillian.matrix_row_major(), 1e-10, 1e-12);
    integrator.advance(y, t);
    DensityMatrix out;
    out.matrix = Eigen::Map<Eigen::MatrixXcd>(y.data(), state.rows(), state.cols());
    return out;
}

ComplexCorrelationSeries two_time_correlation(const Liouvillian& liouvillian,
                                              const DensityMatrix& rho_ss, CorrelationKind kind,
                                              const std::vector<double>& tau_grid) {
    check_tau_grid(tau_grid);
    const int dim = liouvillian.dim();
    if (rho_ss.matrix.rows() != dim) {
        throw std::invalid_argument("two_time_correlation: state dimension mismatch");
    }

    const Sparse& sm = liouvillian.sigma_minus();
    const Sparse sp = sm.adjoint();
    const Sparse& a = liouvillian.annihilation();

    Eigen::MatrixXcd seed;
    Sparse trace_operator;
    double normalization = 1.0;
    switch (kind) {
        case CorrelationKind::Atomic:
            seed = rho_ss.matrix * sp;
            trace_operator = sm;
            break;
        case CorrelationKind::Field:
            seed = rho_ss.matrix * Sparse(a.adjoint());
            trace_operator = a;
            break;
        case CorrelationKind::Intensity: {
            seed = sm * rho_ss.matrix * sp;
            trace_operator = Sparse(sp * sm);
            const double excited = std::real(expectation(rho_ss, Observable::ExcitedPopulation));
            if (excited <= 0.0) {
                throw std::runtime_error(
                    "two_time_correlation: intensity correlation undefined at zero excitation");
            }
            normalization = excited * excited;
            break;
        }
    }

    VectorXcd y = Eigen::Map<VectorXcd>(seed.data(), seed.size());
    const Complex trace0 = trace_of_vec(y, dim);
    const double trace_budget = 1e-8 * std::max(1.0, std::abs(trace0));

    Dp5Integrator integrator(liouvillian.matrix_row_major(), 1e-10, 1e-12);
    ComplexCorrelationSeries series;
    series.tau = tau_grid;
    series.values.reserve(tau_grid.size());
    double t = 0.0;
    for (double tau : tau_grid) {
        integrator.advance(y, tau - t);
        t = tau;
        if (std::abs(trace_of_vec(y, dim) - trace0) > trace_budget) {
            throw std::runtime_error("two_time_correlation: propagation lost the seed trace");
        }
        series.values.push_back(trace_against(trace_operator, y, dim) / normalization);
    }
    return series;
}

SpectrumCurve spectrum_from_correlation(const ComplexCorrelationSeries& series,
                                        std::vector<double> omega_grid, LightKind kind) {
    const std::size_t n = series.tau.size();
    if (n < 8 || series.values.size() != n) {
        throw std::invalid_argument("spectrum_from_correlation: need >= 8 matched samples");
    }
    if (std::abs(series.tau.front()) > 1e-12) {
        throw std::invalid_argument("spectrum_from_correlation: delay grid must start at 0");
    }
    const double dt = (series.tau.back() - series.tau.front()) / static_cast<double>(n - 1);
    if (!(dt > 0.0)) {
        throw std::invalid_argument("spectrum_from_correlation: degenerate delay grid");
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs(series.tau[i] - series.tau[i - 1] - dt) > 1e-6 * dt) {
            throw std::invalid_argument("spectrum_from_correlation: delay grid must be uniform");
        }
    }
    const double c0 = std::abs(series.values.front());
    if (c0 == 0.0) {
        throw std::runtime_error("spectrum_from_correlation: zero correlation at tau = 0");
    }
    if (std::abs(series.values.back()) > 1e-8 * c0) {
        throw std::runtime_error("spectrum_from_correlation: insufficient decay window");
    }
    if (omega_grid.empty()) {
        omega_grid = default_spectrum_grid(kind);
    }

    SpectrumCurve curve;
    curve.kind = kind;
    curve.values.reserve(omega_grid.size());
    for (double omega : omega_grid) {
        const Complex step = std::polar(1.0, omega * dt);
        Complex phase = step;
        Complex acc = 0.5 * series.values.front();
        for (std::size_t k = 1; k + 1 < n; ++k) {
            acc += series.values[k] * phase;
            phase *= step;
        }
        acc += 0.5 * series.values.back() * phase;
        curve.values.push_back(2.0 * std::real(acc) * dt);
    }
    curve.omega_over_kappa = std::move(omega_grid);

    // Unit area over the sampled window, to compare against the closed forms.
    double area = 0.0;
    for (std::size_t i = 1; i < curve.omega_over_kappa.size(); ++i) {
        area += 0.5 * (curve.values[i] + curve.values[i - 1]) *
                (curve.omega_over_kappa[i] - curve.omega_over_kappa[i - 1]);
    }
    if (!(area > 0.0)) {
        throw std::runtime_error("spectrum_from_correlation: non-positive spectral area");
    }
    for (double& v : curve.values) {
        v /= area;
    }
    return curve;
}

}  // namespace dpo::oracle
