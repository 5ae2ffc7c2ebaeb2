#pragma once

#include "kvnlab/grid.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <vector>

namespace kvnlab {

struct QWavefunction {
    Grid1D grid;
    ComplexField amplitudes;
    double time = 0.0;

    QWavefunction(Grid1D g, ComplexField a, double t = 0.0);

    double measure() const noexcept { return grid.dx(); }
};

struct KvNWavefunction {
    PhaseGrid grid;
    ComplexField amplitudes;
    double time = 0.0;

    KvNWavefunction(PhaseGrid g, ComplexField a, double t = 0.0);

    double measure() const noexcept { return grid.cell_area(); }
};

double norm_squared(const QWavefunction& psi);
double norm_squared(const KvNWavefunction& psi);

QWavefunction normalize(const QWavefunction& psi);
KvNWavefunction normalize(const KvNWavefunction& psi);

cplx inner_product(const QWavefunction& phi, const QWavefunction& psi);
cplx inner_product(const KvNWavefunction& phi, const KvNWavefunction& psi);

RealField born_density(const QWavefunction& psi);
RealField born_density(const KvNWavefunction& psi);

// Integrates a KvN density over p, leaving a density in q.
RealField position_marginal(const KvNWavefunction& psi);
RealField momentum_marginal(const KvNWavefunction& psi);

// Mass within `cells` lattice sites of either end of each axis.
double boundary_mass(const QWavefunction& psi, std::size_t cells = 4);
double boundary_mass(const KvNWavefunction& psi, std::size_t cells = 4);

// Normalized exp(-(q-q0)^2/(4 sigma^2) + i p0 q / hbar); sigma is the density's standard deviation.
QWavefunction gaussian_packet(const Grid1D& g, double q0, double p0, double sigma, double hbar = 1.0);

// Harmonic oscillator eigenstate |n> of m*omega^2 q^2/2 via the Hermite recursion.
QWavefunction harmonic_eigenstate(const Grid1D& g, int n, double m = 1.0, double omega = 1.0,
                                  double hbar = 1.0);

// Exact grid mode exp(i k_j q) with k_j = 2*pi*j/L, normalized on the domain.
QWavefunction plane_wave(const Grid1D& g, int mode);

using PhaseFunction = std::function<double(double q, double p)>;

// Product Gaussian in (q, p) with standard deviations of |psi|^2 equal to sigma_q, sigma_p,
// multiplied by exp(i G(q,p)) when a phase is given.
KvNWavefunction kvn_gaussian(const PhaseGrid& pg, double q0, double p0, double sigma_q, double sigma_p,
                             const PhaseFunction& phase = {});

// Finite-dimensional mixed state, dim <= 64.
class DensityMatrix {
public:
    static constexpr int max_dim = 64;

    explicit DensityMatrix(Eigen::MatrixXcd entries, double time = 0.0);

    static DensityMatrix pure(const Eigen::VectorXcd& psi, double time = 0.0);
    static DensityMatrix mixture(const std::vector<double>& weights,
                                 const std::vector<Eigen::VectorXcd>& states, double time = 0.0);

    int dim() const noexcept { return static_cast<int>(entries_.rows()); }
    const Eigen::MatrixXcd& entries() const noexcept { return entries_; }
    double time() const noexcept { return time_; }

    // U rho U^dagger at a new time stamp.
    DensityMatrix evolved(const Eigen::MatrixXcd& unitary, double new_time) const;

private:
    Eigen::MatrixXcd entries_;
    double time_;
};

using Basis = std::vector<Eigen::VectorXcd>;

double purity(const DensityMatrix& rho);
double measure_probability(const DensityMatrix& rho, const Eigen::VectorXcd& a);

// Non-selective measurement: sum_k P_k rho P_k.
DensityMatrix dephase(const DensityMatrix& rho, const Basis& basis);

// Returns basis[index]. The outcome must have nonzero probability in psi.
Eigen::VectorXcd collapse(const Eigen::VectorXcd& psi, const Basis& basis, std::size_t index);

void require_orthonormal(const Basis& basis, std::size_t dim);

}  // namespace kvnlab
