#pragma once

#include "kvnlab/operators.hpp"
#include "kvnlab/states.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <utility>
#include <vector>

namespace kvnlab::measurement {

// H = diag(hbar omega, -hbar omega) in the {+, -} basis. Only omega t enters the dynamics.
struct TwoLevelSystem {
    double omega = 1.0;

    static Eigen::VectorXcd plus();
    static Eigen::VectorXcd minus();
    // (|+> +- |->)/sqrt(2)
    static Eigen::VectorXcd a();
    static Eigen::VectorXcd b();
    // |+>/2 + sqrt(3/4)|->
    static Eigen::VectorXcd initial_state();

    Eigen::MatrixXcd propagator(double t) const;
    Eigen::VectorXcd evolve_pure(const Eigen::VectorXcd& psi, double t) const;
};

double p_a_unmeasured(double omega_tau);
double p_a_nonselective(double omega_tau);
std::pair<double, double> weights_at_tau(double omega_tau);

// The same quantities computed by explicit 2x2 evolution, Born rule and dephasing.
double p_a_unmeasured_simulated(double omega_tau);
double p_a_nonselective_simulated(double omega_tau);
std::pair<double, double> weights_at_tau_simulated(double omega_tau);
// State after the non-selective measurement at tau, before evolving to 2 tau.
DensityMatrix measured_state(double omega_tau);

struct SweepRow {
    double omega_tau;
    double p_unmeasured;
    double p_nonselective;
    double p_unmeasured_sim;
    double p_nonselective_sim;
};

// n >= 2 evenly spaced points on [lo, hi], endpoints included.
std::vector<SweepRow> sweep(double lo, double hi, std::size_t n);

struct DisturbanceReport {
    double later_difference = 0.0;          // sup |rho_A - rho_B| at t_final
    double instantaneous_difference = 0.0;  // sup |rho| change across the measurement itself
};

// Protocol A evolves to t_final. Protocol B evolves to tau, discards the phase
// (psi -> |psi|) and evolves on to t_final. Both use Strang steps of size ~dt.
DisturbanceReport kvn_nondisturbance(const KvNWavefunction& psi0, double tau, double t_final,
                                     const Potential& v, double m = 1.0, double dt = 1e-3);
DisturbanceReport quantum_disturbance(const QWavefunction& psi0, double tau, double t_final,
                                      const Potential& v, double m = 1.0, double hbar = 1.0,
                                      double dt = 1e-3);

}  // namespace kvnlab::measurement
