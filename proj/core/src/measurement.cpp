#include "kvnlab/measurement.hpp"

#include "kvnlab/error.hpp"
#include "kvnlab/propagation.hpp"

#include <algorithm>
#include <cmath>

namespace kvnlab::measurement {

namespace {

const double root34 = std::sqrt(0.75);

Eigen::VectorXcd vec2(cplx x, cplx y) {
    Eigen::VectorXcd v(2);
    v << x, y;
    return v;
}

std::size_t steps_for(double span, double dt) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(span / dt)));
}

template <typename State>
void discard_phase(State& psi) {
    for (auto& v : psi.amplitudes) {
        v = std::abs(v);
    }
}

template <typename State>
double sup_density_difference(const State& a, const State& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.amplitudes.size(); ++i) {
        worst = std::max(worst, std::abs(std::norm(a.amplitudes[i]) - std::norm(b.amplitudes[i])));
    }
    return worst;
}

template <typename State>
DisturbanceReport run_protocol(const State& psi0, double tau, double t_final, const Generator& g,
                               double dt) {
    if (!(tau > 0.0) || !(t_final > tau)) {
        throw InvalidArgument("non-disturbance protocol: require 0 < tau < t_final");
    }
    if (!(dt > 0.0)) {
        throw InvalidArgument("non-disturbance protocol: dt must be positive");
    }
    const std::size_t n1 = steps_for(tau, dt);
    const std::size_t n2 = steps_for(t_final - tau, dt);
    const SplitStepper s1(g, tau / static_cast<double>(n1));
    const SplitStepper s2(g, (t_final - tau) / static_cast<double>(n2));

    State a = psi0;
    for (std::size_t k = 0; k < n1; ++k) {
        s1.step(a.amplitudes);
    }
    State b = a;
    discard_phase(b);
    DisturbanceReport rep;
    rep.instantaneous_difference = sup_density_difference(a, b);
    for (std::size_t k = 0; k < n2; ++k) {
        s2.step(a.amplitudes);
        s2.step(b.amplitudes);
    }
    rep.later_difference = sup_density_difference(a, b);
    return rep;
}

}  // namespace

Eigen::VectorXcd TwoLevelSystem::plus() {
    return vec2(1.0, 0.0);
}

Eigen::VectorXcd TwoLevelSystem::minus() {
    return vec2(0.0, 1.0);
}

Eigen::VectorXcd TwoLevelSystem::a() {
    return vec2(std::sqrt(0.5), std::sqrt(0.5));
}

Eigen::VectorXcd TwoLevelSystem::b() {
    return vec2(std::sqrt(0.5), -std::sqrt(0.5));
}

Eigen::VectorXcd TwoLevelSystem::initial_state() {
    return vec2(0.5, root34);
}

Eigen::MatrixXcd TwoLevelSystem::propagator(double t) const {
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(2, 2);
    u(0, 0) = std::exp(cplx(0.0, -omega * t));
    u(1, 1) = std::exp(cplx(0.0, omega * t));
    return u;
}

Eigen::VectorXcd TwoLevelSystem::evolve_pure(const Eigen::VectorXcd& psi, double t) const {
    if (psi.size() != 2) {
        throw InvalidArgument("evolve_pure: expected a 2-vector");
    }
    return propagator(t) * psi;
}

double p_a_unmeasured(double omega_tau) {
    return 0.5 * (1.0 + root34 * std::cos(4.0 * omega_tau));
}

double p_a_nonselective(double omega_tau) {
    const double c = std::cos(2.0 * omega_tau);
    return 0.5 * (1.0 + root34 * c * c);
}

std::pair<double, double> weights_at_tau(double omega_tau) {
    const double c = root34 * std::cos(2.0 * omega_tau);
    return {0.5 * (1.0 + c), 0.5 * (1.0 - c)};
}

double p_a_unmeasured_simulated(double omega_tau) {
    const TwoLevelSystem sys{1.0};
    const Eigen::VectorXcd psi = sys.evolve_pure(TwoLevelSystem::initial_state(), 2.0 * omega_tau);
    return std::norm(TwoLevelSystem::a().dot(psi));
}

std::pair<double, double> weights_at_tau_simulated(double omega_tau) {
    const TwoLevelSystem sys{1.0};
    const Eigen::VectorXcd psi = sys.evolve_pure(TwoLevelSystem::initial_state(), omega_tau);
    return {std::norm(TwoLevelSystem::a().dot(psi)), std::norm(TwoLevelSystem::b().dot(psi))};
}

DensityMatrix measured_state(double omega_tau) {
    const TwoLevelSystem sys{1.0};
    const DensityMatrix rho0 = DensityMatrix::pure(TwoLevelSystem::initial_state());
    const DensityMatrix at_tau = rho0.evolved(sys.propagator(omega_tau), omega_tau);
    return dephase(at_tau, Basis{TwoLevelSystem::a(), TwoLevelSystem::b()});
}

double p_a_nonselective_simulated(double omega_tau) {
    const TwoLevelSystem sys{1.0};
    const DensityMatrix rho = measured_state(omega_tau).evolved(sys.propagator(omega_tau), 2.0 * omega_tau);
    return measure_probability(rho, TwoLevelSystem::a());
}

std::vector<SweepRow> sweep(double lo, double hi, std::size_t n) {
    if (n < 2) {
        throw InvalidArgument("sweep: need at least two points");
    }
    if (!(hi > lo)) {
        throw InvalidArgument("sweep: require hi > lo");
    }
    std::vector<SweepRow> rows;
    rows.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double wt = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
        rows.push_back({wt, p_a_unmeasured(wt), p_a_nonselective(wt), p_a_unmeasured_simulated(wt),
                        p_a_nonselective_simulated(wt)});
    }
    return rows;
}

DisturbanceReport kvn_nondisturbance(const KvNWavefunction& psi0, double tau, double t_final,
                                     const Potential& v, double m, double dt) {
    return run_protocol(psi0, tau, t_final, liouvillian(psi0.grid, v, m), dt);
}

DisturbanceReport quantum_disturbance(const QWavefunction& psi0, double tau, double t_final,
                                      const Potential& v, double m, double hbar, double dt) {
    return run_protocol(psi0, tau, t_final, hamiltonian(psi0.grid, v, m, hbar), dt);
}

}  // namespace kvnlab::measurement
