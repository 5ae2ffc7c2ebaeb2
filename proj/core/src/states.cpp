#include "kvnlab/states.hpp"

#include "kvnlab/error.hpp"

#include <cmath>
#include <string>

namespace kvnlab {

namespace {

double sum_abs2(const ComplexField& a) {
    double s = 0.0;
    for (const auto& v : a) {
        s += std::norm(v);
    }
    return s;
}

cplx sum_conj_product(const ComplexField& a, const ComplexField& b) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += std::conj(a[i]) * b[i];
    }
    return s;
}

void scale_to_unit(ComplexField& a, double measure) {
    const double n2 = sum_abs2(a) * measure;
    if (!(n2 > 0.0) || !std::isfinite(n2)) {
        throw NumericalError("normalize: state has zero or non-finite norm");
    }
    const double s = 1.0 / std::sqrt(n2);
    for (auto& v : a) {
        v *= s;
    }
}

constexpr double tol_matrix = 1e-12;
constexpr double eigen_floor = -1e-10;

}  // namespace

QWavefunction::QWavefunction(Grid1D g, ComplexField a, double t)
    : grid(std::move(g)), amplitudes(std::move(a)), time(t) {
    if (amplitudes.size() != grid.n()) {
        throw GridMismatch("QWavefunction: amplitude count " + std::to_string(amplitudes.size()) +
                           " does not match grid size " + std::to_string(grid.n()));
    }
}

KvNWavefunction::KvNWavefunction(PhaseGrid g, ComplexField a, double t)
    : grid(std::move(g)), amplitudes(std::move(a)), time(t) {
    if (amplitudes.size() != grid.size()) {
        throw GridMismatch("KvNWavefunction: amplitude count " + std::to_string(amplitudes.size()) +
                           " does not match phase grid size " + std::to_string(grid.size()));
    }
}

double norm_squared(const QWavefunction& psi) {
    return sum_abs2(psi.amplitudes) * psi.measure();
}

double norm_squared(const KvNWavefunction& psi) {
    return sum_abs2(psi.amplitudes) * psi.measure();
}

QWavefunction normalize(const QWavefunction& psi) {
    QWavefunction out = psi;
    scale_to_unit(out.amplitudes, out.measure());
    return out;
}

KvNWavefunction normalize(const KvNWavefunction& psi) {
    KvNWavefunction out = psi;
    scale_to_unit(out.amplitudes, out.measure());
    return out;
}

cplx inner_product(const QWavefunction& phi, const QWavefunction& psi) {
    if (!(phi.grid == psi.grid)) {
        throw GridMismatch("inner_product: wavefunctions live on different grids");
    }
    return sum_conj_product(phi.amplitudes, psi.amplitudes) * psi.measure();
}

cplx inner_product(const KvNWavefunction& phi, const KvNWavefunction& psi) {
    if (!(phi.grid == psi.grid)) {
        throw GridMismatch("inner_product: wavefunctions live on different phase grids");
    }
    return sum_conj_product(phi.amplitudes, psi.amplitudes) * psi.measure();
}

RealField born_density(const QWavefunction& psi) {
    RealField rho(psi.amplitudes.size());
    for (std::size_t i = 0; i < rho.size(); ++i) {
        rho[i] = std::norm(psi.amplitudes[i]);
    }
    return rho;
}

RealField born_density(const KvNWavefunction& psi) {
    RealField rho(psi.amplitudes.size());
    for (std::size_t i = 0; i < rho.size(); ++i) {
        rho[i] = std::norm(psi.amplitudes[i]);
    }
    return rho;
}

RealField position_marginal(const KvNWavefunction& psi) {
    const std::size_t nq = psi.grid.q.n();
    const std::size_t np = psi.grid.p.n();
    RealField out(nq, 0.0);
    for (std::size_t i = 0; i < nq; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < np; ++j) {
            s += std::norm(psi.amplitudes[i * np + j]);
        }
        out[i] = s * psi.grid.p.dx();
    }
    return out;
}

RealField momentum_marginal(const KvNWavefunction& psi) {
    const std::size_t nq = psi.grid.q.n();
    const std::size_t np = psi.grid.p.n();
    RealField out(np, 0.0);
    for (std::size_t i = 0; i < nq; ++i) {
        for (std::size_t j = 0; j < np; ++j) {
            out[j] += std::norm(psi.amplitudes[i * np + j]);
        }
    }
    for (auto& v : out) {
        v *= psi.grid.q.dx();
    }
    return out;
}

double boundary_mass(const QWavefunction& psi, std::size_t cells) {
    const std::size_t n = psi.grid.n();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i < cells || i + cells >= n) {
            s += std::norm(psi.amplitudes[i]);
        }
    }
    return s * psi.measure();
}

double boundary_mass(const KvNWavefunction& psi, std::size_t cells) {
    const std::size_t nq = psi.grid.q.n();
    const std::size_t np = psi.grid.p.n();
    double s = 0.0;
    for (std::size_t i = 0; i < nq; ++i) {
        const bool edge_q = i < cells || i + cells >= nq;
        for (std::size_t j = 0; j < np; ++j) {
            if (edge_q || j < cells || j + cells >= np) {
                s += std::norm(psi.amplitudes[i * np + j]);
            }
        }
    }
    return s * psi.measure();
}

QWavefunction gaussian_packet(const Grid1D& g, double q0, double p0, double sigma, double hbar) {
    if (!(sigma > 0.0) || !(hbar > 0.0)) {
        throw InvalidArgument("gaussian_packet: sigma and hbar must be positive");
    }
    ComplexField a(g.n());
    const double pref = std::pow(2.0 * pi * sigma * sigma, -0.25);
    for (std::size_t i = 0; i < g.n(); ++i) {
        const double x = g.point(i) - q0;
        a[i] = pref * std::exp(cplx(-x * x / (4.0 * sigma * sigma), p0 * g.point(i) / hbar));
    }
    return normalize(QWavefunction(g, std::move(a)));
}

QWavefunction harmonic_eigenstate(const Grid1D& g, int n, double m, double omega, double hbar) {
    if (n < 0) {
        throw InvalidArgument("harmonic_eigenstate: n must be >= 0");
    }
    if (!(m > 0.0) || !(omega > 0.0) || !(hbar > 0.0)) {
        throw InvalidArgument("harmonic_eigenstate: m, omega, hbar must be positive");
    }
    const double alpha = std::sqrt(m * omega / hbar);
    ComplexField a(g.n());
    for (std::size_t i = 0; i < g.n(); ++i) {
        const double xi = alpha * g.point(i);
        double prev = 0.0;
        double cur = std::pow(pi, -0.25) * std::exp(-0.5 * xi * xi);
        for (int k = 0; k < n; ++k) {
            const double next = std::sqrt(2.0 / (k + 1)) * xi * cur - std::sqrt(double(k) / (k + 1)) * prev;
            prev = cur;
            cur = next;
        }
        a[i] = std::sqrt(alpha) * cur;
    }
    return normalize(QWavefunction(g, std::move(a)));
}

QWavefunction plane_wave(const Grid1D& g, int mode) {
    const double k = 2.0 * pi * mode / g.length();
    ComplexField a(g.n());
    const double amp = 1.0 / std::sqrt(g.length());
    for (std::size_t i = 0; i < g.n(); ++i) {
        a[i] = amp * std::exp(cplx(0.0, k * g.point(i)));
    }
    return QWavefunction(g, std::move(a));
}

KvNWavefunction kvn_gaussian(const PhaseGrid& pg, double q0, double p0, double sigma_q, double sigma_p,
                             const PhaseFunction& phase) {
    if (!(sigma_q > 0.0) || !(sigma_p > 0.0)) {
        throw InvalidArgument("kvn_gaussian: widths must be positive");
    }
    const std::size_t nq = pg.q.n();
    const std::size_t np = pg.p.n();
    ComplexField a(pg.size());
    for (std::size_t i = 0; i < nq; ++i) {
        const double q = pg.q.point(i);
        const double gq = std::exp(-(q - q0) * (q - q0) / (4.0 * sigma_q * sigma_q));
        for (std::size_t j = 0; j < np; ++j) {
            const double p = pg.p.point(j);
            const double gp = std::exp(-(p - p0) * (p - p0) / (4.0 * sigma_p * sigma_p));
            const double g = phase ? phase(q, p) : 0.0;
            a[i * np + j] = gq * gp * std::exp(cplx(0.0, g));
        }
    }
    return normalize(KvNWavefunction(pg, std::move(a)));
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries, double time)
    : entries_(std::move(entries)), time_(time) {
    const auto d = entries_.rows();
    if (d < 1 || d != entries_.cols() || d > max_dim) {
        throw InvalidArgument("DensityMatrix: must be square with 1 <= dim <= 64");
    }
    if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > tol_matrix) {
        throw InvalidArgument("DensityMatrix: not Hermitian");
    }
    if (std::abs(entries_.trace() - cplx(1.0, 0.0)) > tol_matrix) {
        throw InvalidArgument("DensityMatrix: trace differs from 1");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(entries_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < eigen_floor) {
        throw InvalidArgument("DensityMatrix: negative eigenvalue");
    }
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi, double time) {
    const double nrm = psi.norm();
    if (!(nrm > 0.0)) {
        throw InvalidArgument("DensityMatrix::pure: zero vector");
    }
    const Eigen::VectorXcd v = psi / nrm;
    return DensityMatrix(v * v.adjoint(), time);
}

DensityMatrix DensityMatrix::mixture(const std::vector<double>& weights,
                                     const std::vector<Eigen::VectorXcd>& states, double time) {
    if (weights.size() != states.size() || states.empty()) {
        throw InvalidArgument("DensityMatrix::mixture: weights and states must match and be nonempty");
    }
    const auto d = states.front().size();
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    for (std::size_t k = 0; k < states.size(); ++k) {
        if (weights[k] < 0.0) {
            throw InvalidArgument("DensityMatrix::mixture: negative weight");
        }
        if (states[k].size() != d) {
            throw InvalidArgument("DensityMatrix::mixture: state dimensions differ");
        }
        const Eigen::VectorXcd v = states[k].normalized();
        rho += weights[k] * (v * v.adjoint());
    }
    return DensityMatrix(rho, time);
}

DensityMatrix DensityMatrix::evolved(const Eigen::MatrixXcd& unitary, double new_time) const {
    if (unitary.rows() != entries_.rows() || unitary.cols() != entries_.cols()) {
        throw InvalidArgument("DensityMatrix::evolved: unitary has wrong shape");
    }
    Eigen::MatrixXcd next = unitary * entries_ * unitary.adjoint();
    // Remove the anti-Hermitian round-off so the invariant check stays meaningful.
    next = 0.5 * (next + next.adjoint()).eval();
    return DensityMatrix(next, new_time);
}

double purity(const DensityMatrix& rho) {
    return (rho.entries() * rho.entries()).trace().real();
}

double measure_probability(const DensityMatrix& rho, const Eigen::VectorXcd& a) {
    if (a.size() != rho.dim()) {
        throw InvalidArgument("measure_probability: vector dimension mismatch");
    }
    if (std::abs(a.norm() - 1.0) > 1e-10) {
        throw InvalidArgument("measure_probability: projector vector is not normalized");
    }
    const cplx v = (a.adjoint() * rho.entries() * a)(0, 0);
    return v.real();
}

void require_orthonormal(const Basis& basis, std::size_t dim) {
    if (basis.size() != dim) {
        throw InvalidArgument("basis: expected " + std::to_string(dim) + " vectors");
    }
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (static_cast<std::size_t>(basis[i].size()) != dim) {
            throw InvalidArgument("basis: vector dimension mismatch");
        }
        for (std::size_t j = i; j < basis.size(); ++j) {
            const cplx g = basis[i].dot(basis[j]);
            const double target = i == j ? 1.0 : 0.0;
            if (std::abs(g - target) > 1e-10) {
                throw InvalidArgument("basis: vectors are not orthonormal");
            }
        }
    }
}

DensityMatrix dephase(const DensityMatrix& rho, const Basis& basis) {
    require_orthonormal(basis, static_cast<std::size_t>(rho.dim()));
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.dim(), rho.dim());
    for (const auto& v : basis) {
        const Eigen::MatrixXcd proj = v * v.adjoint();
        out += proj * rho.entries() * proj;
    }
    out = 0.5 * (out + out.adjoint()).eval();
    return DensityMatrix(out, rho.time());
}

Eigen::VectorXcd collapse(const Eigen::VectorXcd& psi, const Basis& basis, std::size_t index) {
    require_orthonormal(basis, static_cast<std::size_t>(psi.size()));
    if (index >= basis.size()) {
        throw InvalidArgument("collapse: index out of range");
    }
    if (std::abs(basis[index].dot(psi)) < 1e-14) {
        throw InvalidArgument("collapse: outcome has zero probability");
    }
    return basis[index];
}

}  // namespace kvnlab
