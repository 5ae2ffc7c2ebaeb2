#pragma once

#include "kvnlab/kernels.hpp"
#include "kvnlab/states.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace kvnlab::oscillator {

// Spring constant as a function of time.
using Stiffness = std::function<double(double t)>;

struct ErmakovState {
    double rho = 1.0;
    double rho_dot = 0.0;
    double C = 1.0;
    double t = 0.0;
};

// RK4 on rho'' + k(t) rho = C / rho^3. The step is t_final / round(t_final / dt), so
// the last sample lands on t_final exactly. Throws NumericalError when rho collapses.
std::vector<ErmakovState> integrate_ermakov(const Stiffness& k, const ErmakovState& init, double t_final,
                                            double dt);

// max |rho'' + k rho - C/rho^3| at interior samples, rho'' by central second differences.
double ermakov_residual(const std::vector<ErmakovState>& traj, const Stiffness& k);

// RK4 on q' = p/m, p' = -k(t) q.
std::vector<PhasePoint> solve_classical_tdho(const Stiffness& k, double q0, double p0, double m,
                                             double t_final, double dt);

// 1/2 [C (q/rho)^2 + (rho_dot q - rho p/m)^2]. With C = m = 1 this is the (q, p) part of the
// operator invariant.
double lewis_invariant_classical(double q, double p, double rho, double rho_dot, double C = 1.0,
                                 double m = 1.0);

struct CoupledSample {
    double t = 0.0;
    double q = 0.0;
    double p = 0.0;
    double rho = 0.0;
    double rho_dot = 0.0;
    double invariant = 0.0;
};

// Ermakov (with k/m) and the oscillator advanced together by one RK4 on the 4-vector.
std::vector<CoupledSample> integrate_coupled(const Stiffness& k, const ErmakovState& init, double q0,
                                             double p0, double m, double t_final, double dt);

// Phase angle in the frame where the invariant is time independent:
// (sqrt(C) q/rho, rho_dot q - rho p/m) = sqrt(2I) (cos phi, sin phi).
double frame_angle(const CoupledSample& s, double C = 1.0, double m = 1.0);

// 2x2 map (q0, p0) -> (q(t), p(t)).
Eigen::Matrix2d monodromy(const Stiffness& k, double m, double t_final, double dt);

struct BlobSample {
    double t = 0.0;
    double q = 0.0;
    double p = 0.0;
    double var_q = 0.0;
    double var_p = 0.0;
    double cov_qp = 0.0;
    double norm = 0.0;
};

struct BlobRun {
    KvNWavefunction final_state;
    std::vector<BlobSample> samples;  // n_steps + 1 entries
};

// Strang splitting of K = p theta/m - k(t) q lambda with k sampled at each step midpoint.
BlobRun kvn_tdho_evolve(const KvNWavefunction& psi0, const Stiffness& k, double m, double t_final,
                        std::size_t n_steps);

BlobSample blob_moments(const KvNWavefunction& psi);

}  // namespace kvnlab::oscillator
