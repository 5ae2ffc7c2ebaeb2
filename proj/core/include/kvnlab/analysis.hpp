#pragma once

#include "kvnlab/operators.hpp"
#include "kvnlab/propagation.hpp"
#include "kvnlab/states.hpp"

#include <vector>

namespace kvnlab {

// sqrt(<A^2> - <A>^2). A radicand below -1e-10 relative to <A^2> throws NumericalError;
// smaller negatives are clamped to zero.
double std_dev(const GridOperator& op, const QWavefunction& psi);
double std_dev(const GridOperator& op, const KvNWavefunction& psi);

struct RobertsonResult {
    double lhs = 0.0;  // sigma_A sigma_B
    double rhs = 0.0;  // |<[A,B]>| / 2
    bool satisfied = false;
};

RobertsonResult robertson_check(const GridOperator& a, const GridOperator& b, const QWavefunction& psi);
RobertsonResult robertson_check(const GridOperator& a, const GridOperator& b, const KvNWavefunction& psi);

struct EhrenfestResiduals {
    double r1_max = 0.0;  // max |d<q>/dt - <p>/m|
    double r2_max = 0.0;  // max |d<p>/dt + <V'>|
    double q_scale = 0.0;  // max |<p>/m| over the trajectory
    double p_scale = 0.0;  // max |<V'>| over the trajectory
};

// Centered differences at interior samples. Requires >= 5 uniformly spaced samples.
EhrenfestResiduals ehrenfest_residuals(const std::vector<Observables>& series, double m);

// d/dt of a uniformly sampled series: centered inside, one-sided second order at the ends.
std::vector<double> time_derivative(const std::vector<double>& y, double dt);

// Phase grid on which wigner_transform samples W for states on q:
// p_l = hbar * k_l, covering [-pi hbar/dq, pi hbar/dq) with q.n() points.
PhaseGrid wigner_grid(const Grid1D& q, double hbar = 1.0);

// W(q,p) = (1/2 pi hbar) int dy psi*(q + y/2) psi(q - y/2) exp(i p y / hbar), normalized to unit
// integral. Row-major (q, p) with p increasing. pg must equal wigner_grid(psi.grid, hbar).
RealField wigner_transform(const QWavefunction& psi, const PhaseGrid& pg, double hbar = 1.0);

// |psi~(p)|^2 on the wigner_grid momenta, psi~(p) = (2 pi hbar)^-1/2 int psi(q) exp(-ipq/hbar) dq.
RealField momentum_density(const QWavefunction& psi, double hbar = 1.0);

}  // namespace kvnlab
