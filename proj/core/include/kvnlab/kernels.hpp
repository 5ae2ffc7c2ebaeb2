#pragma once

#include "kvnlab/grid.hpp"
#include "kvnlab/states.hpp"

#include <functional>
#include <vector>

namespace kvnlab {

// sqrt(pi/a) exp(b^2/(4a) + c), principal branch. Valid for Re(a) > 0 and for the
// Fresnel case Re(a) = 0, Im(a) != 0.
cplx gaussian_integral(cplx a, cplx b, cplx c);

cplx free_quantum_kernel(double x, double x0, double t, double m, double hbar = 1.0);

// psi(x, t) = sum_j K(x, y_j, t) psi0(y_j) dy by direct quadrature on the source grid,
// evaluated at the target points. No periodic wrap is involved.
ComplexField propagate_by_kernel(const QWavefunction& psi0, const RealField& targets, double t, double m,
                                 double hbar = 1.0);
QWavefunction propagate_by_kernel(const QWavefunction& psi0, double t, double m, double hbar = 1.0);

// Exact shear psi(q, p, t) = psi0(q - p t/m, p), applied per p row in Fourier space.
KvNWavefunction free_kvn_propagate(const KvNWavefunction& psi0, double t, double m);

struct PhasePoint {
    double t = 0.0;
    double q = 0.0;
    double p = 0.0;
};

using Force = std::function<double(double q, double t)>;

// RK4 on q' = p/m, p' = -V'(q, t). Returns n_steps + 1 samples.
std::vector<PhasePoint> integrate_characteristics(const Force& slope, double q0, double p0, double m,
                                                  double dt, std::size_t n_steps, double t0 = 0.0);

enum class DeltaLaw { momentum_relation, newton_second_law };

// max |p_j - m (q_{j+1} - q_j)/dt| or max |(p_{j+1} - p_j)/dt + V'(q_j)| over the samples.
double delta_law_check(DeltaLaw which, const std::vector<PhasePoint>& samples, double m,
                       const std::function<double(double)>& slope);

}  // namespace kvnlab
