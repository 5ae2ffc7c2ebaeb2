#pragma once

#include "kvnlab/operators.hpp"
#include "kvnlab/states.hpp"

#include <cstddef>
#include <vector>

namespace kvnlab {

// Strang step exp(-iV dt/2u) exp(-iT dt/u) exp(-iV dt/2u) with u = G.time_unit().
// Phase factors are precomputed once; dt may be negative (used for reversal).
class SplitStepper {
public:
    SplitStepper(const Generator& g, double dt);

    double dt() const noexcept { return dt_; }
    const Generator& generator() const noexcept { return gen_; }

    void step(ComplexField& f) const;

private:
    struct Factor {
        Transform transform = Transform::none;
        ComplexField phase;
    };

    void apply(ComplexField& f, const Factor& factor) const;

    Generator gen_;
    double dt_;
    Factor half_constant_;
    Factor half_potential_;
    Factor kinetic_;
};

QWavefunction schrodinger_step(const QWavefunction& psi, const Generator& g, double dt);
KvNWavefunction kvn_step(const KvNWavefunction& psi, const Generator& g, double dt);

struct Observables {
    double t = 0.0;
    double q = 0.0;
    double p = 0.0;
    double force = 0.0;  // <V'(q)>
    double norm = 0.0;
};

// For unified generators q and p are the Bopp-shifted q - hbar kappa lambda/2 and
// p + hbar kappa theta/2, and force is <V'(q - hbar kappa lambda/2)>.
Observables observe(const QWavefunction& psi, const Generator& g);
Observables observe(const KvNWavefunction& psi, const Generator& g);

struct EvolveOptions {
    bool monitor_boundary = true;
    double boundary_threshold = 1e-8;
    std::size_t boundary_cells = 4;
    // Keep the state after every k-th step; the initial state is not stored. 0 keeps none.
    std::size_t snapshot_every = 0;
};

template <typename State>
struct Evolution {
    State final_state;
    std::vector<Observables> series;  // n_steps + 1 samples, starting at the initial state
    std::vector<State> snapshots;
};

Evolution<QWavefunction> evolve(const QWavefunction& psi, const Generator& g, double t_final,
                                std::size_t n_steps, const EvolveOptions& opts = {});
Evolution<KvNWavefunction> evolve(const KvNWavefunction& psi, const Generator& g, double t_final,
                                  std::size_t n_steps, const EvolveOptions& opts = {});

struct UnitarityReport {
    double max_norm_drift = 0.0;
    double residual = 0.0;  // L2 distance between the round-tripped and initial state
};

UnitarityReport check_unitarity(const Generator& g, const QWavefunction& psi, double dt, std::size_t n);
UnitarityReport check_unitarity(const Generator& g, const KvNWavefunction& psi, double dt, std::size_t n);

}  // namespace kvnlab
