#include "kvnlab/propagation.hpp"

#include "kvnlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace kvnlab {

namespace {

ComplexField phases(const RealField& payload, double factor) {
    ComplexField out(payload.size());
    for (std::size_t i = 0; i < payload.size(); ++i) {
        const double a = -factor * payload[i];
        out[i] = cplx(std::cos(a), std::sin(a));
    }
    return out;
}

void transform(ComplexField& f, const Domain& d, Transform t, FftDirection dir) {
    if (t == Transform::none) {
        return;
    }
    if (std::holds_alternative<Grid1D>(d)) {
        fft(f, dir);
        return;
    }
    const auto& pg = std::get<PhaseGrid>(d);
    if (t == Transform::along_q || t == Transform::both) {
        fft_axis(f, pg.q.n(), pg.p.n(), 0, dir);
    }
    if (t == Transform::along_p || t == Transform::both) {
        fft_axis(f, pg.q.n(), pg.p.n(), 1, dir);
    }
}

double slope_at(const Potential& v, double q) {
    if (v.slope) {
        return v.slope(q);
    }
    const double h = 1e-5 * std::max(1.0, std::abs(q));
    return (v.value(q + h) - v.value(q - h)) / (2.0 * h);
}

void require_grid(const Generator& g, const Domain& d, const char* who) {
    if (!same_domain(g.domain(), d)) {
        throw GridMismatch(std::string(who) + ": state grid differs from generator grid");
    }
}

void require_positive_dt(double dt, const char* who) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw InvalidArgument(std::string(who) + ": dt must be positive");
    }
}

template <typename State>
void check_boundary(const State& psi, const EvolveOptions& opts) {
    if (!opts.monitor_boundary) {
        return;
    }
    const double m = boundary_mass(psi, opts.boundary_cells);
    if (m > opts.boundary_threshold) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "boundary mass %.3e exceeds %.1e at t=%.6g", m,
                      opts.boundary_threshold, psi.time);
        throw BoundaryMassError(buf, m);
    }
}

template <typename State>
Evolution<State> evolve_impl(const State& psi, const Generator& g, double t_final, std::size_t n_steps,
                             const EvolveOptions& opts) {
    require_grid(g, Domain(psi.grid), "evolve");
    if (n_steps < 1) {
        throw InvalidArgument("evolve: n_steps must be >= 1");
    }
    if (!(t_final >= 0.0) || !std::isfinite(t_final)) {
        throw InvalidArgument("evolve: t_final must be finite and >= 0");
    }
    Evolution<State> out{psi, {}, {}};
    out.series.reserve(n_steps + 1);
    out.series.push_back(observe(psi, g));
    if (t_final == 0.0) {
        return out;
    }
    check_boundary(psi, opts);
    const double dt = t_final / static_cast<double>(n_steps);
    const SplitStepper stepper(g, dt);
    State& cur = out.final_state;
    const double t0 = psi.time;
    for (std::size_t s = 1; s <= n_steps; ++s) {
        stepper.step(cur.amplitudes);
        cur.time = t0 + dt * static_cast<double>(s);
        check_boundary(cur, opts);
        out.series.push_back(observe(cur, g));
        if (opts.snapshot_every > 0 && s % opts.snapshot_every == 0) {
            out.snapshots.push_back(cur);
        }
    }
    return out;
}

template <typename State>
UnitarityReport unitarity_impl(const Generator& g, const State& psi, double dt, std::size_t n) {
    require_grid(g, Domain(psi.grid), "check_unitarity");
    const double n0 = norm_squared(psi);
    UnitarityReport rep;
    State cur = psi;
    const SplitStepper fwd(g, dt);
    const SplitStepper bwd(g, -dt);
    for (std::size_t s = 0; s < n; ++s) {
        fwd.step(cur.amplitudes);
        rep.max_norm_drift = std::max(rep.max_norm_drift, std::abs(norm_squared(cur) - n0));
    }
    for (std::size_t s = 0; s < n; ++s) {
        bwd.step(cur.amplitudes);
        rep.max_norm_drift = std::max(rep.max_norm_drift, std::abs(norm_squared(cur) - n0));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < cur.amplitudes.size(); ++i) {
        acc += std::norm(cur.amplitudes[i] - psi.amplitudes[i]);
    }
    rep.residual = std::sqrt(acc * psi.measure());
    return rep;
}

}  // namespace

SplitStepper::SplitStepper(const Generator& g, double dt) : gen_(g), dt_(dt) {
    if (!std::isfinite(dt)) {
        throw InvalidArgument("SplitStepper: dt must be finite");
    }
    const double u = g.time_unit();
    half_potential_ = Factor{g.potential_part().transform, phases(g.potential_part().payload, 0.5 * dt / u)};
    kinetic_ = Factor{g.kinetic().transform, phases(g.kinetic().payload, dt / u)};
    if (!g.integration_constant().empty()) {
        half_constant_ = Factor{Transform::none, phases(g.integration_constant(), 0.5 * dt)};
    }
}

void SplitStepper::apply(ComplexField& f, const Factor& factor) const {
    transform(f, gen_.domain(), factor.transform, FftDirection::forward);
    for (std::size_t i = 0; i < f.size(); ++i) {
        f[i] *= factor.phase[i];
    }
    transform(f, gen_.domain(), factor.transform, FftDirection::inverse);
}

void SplitStepper::step(ComplexField& f) const {
    if (f.size() != domain_size(gen_.domain())) {
        throw GridMismatch("SplitStepper::step: field size does not match generator domain");
    }
    const bool has_c = !half_constant_.phase.empty();
    if (has_c) {
        apply(f, half_constant_);
    }
    apply(f, half_potential_);
    apply(f, kinetic_);
    apply(f, half_potential_);
    if (has_c) {
        apply(f, half_constant_);
    }
}

QWavefunction schrodinger_step(const QWavefunction& psi, const Generator& g, double dt) {
    require_positive_dt(dt, "schrodinger_step");
    if (g.kind() != GeneratorKind::quantum) {
        throw InvalidArgument("schrodinger_step: generator must be quantum");
    }
    require_grid(g, Domain(psi.grid), "schrodinger_step");
    QWavefunction out = psi;
    SplitStepper(g, dt).step(out.amplitudes);
    out.time += dt;
    return out;
}

KvNWavefunction kvn_step(const KvNWavefunction& psi, const Generator& g, double dt) {
    require_positive_dt(dt, "kvn_step");
    if (g.kind() != GeneratorKind::liouville && g.kind() != GeneratorKind::koopman) {
        throw InvalidArgument("kvn_step: generator must be liouville or koopman");
    }
    require_grid(g, Domain(psi.grid), "kvn_step");
    KvNWavefunction out = psi;
    SplitStepper(g, dt).step(out.amplitudes);
    out.time += dt;
    return out;
}

Observables observe(const QWavefunction& psi, const Generator& g) {
    require_grid(g, Domain(psi.grid), "observe");
    const std::size_t n = psi.grid.n();
    const double dx = psi.grid.dx();
    const RealField& slope = g.slope_samples();
    Observables o;
    o.t = psi.time;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = std::norm(psi.amplitudes[i]);
        o.norm += r;
        o.q += psi.grid.point(i) * r;
        o.force += slope[i] * r;
    }
    ComplexField spec = psi.amplitudes;
    fft(spec, FftDirection::forward);
    const RealField k = wavenumbers(psi.grid);
    double p = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        p += k[i] * std::norm(spec[i]);
    }
    o.norm *= dx;
    o.q *= dx;
    o.force *= dx;
    o.p = g.hbar() * p * dx / static_cast<double>(n);
    return o;
}

Observables observe(const KvNWavefunction& psi, const Generator& g) {
    require_grid(g, Domain(psi.grid), "observe");
    const PhaseGrid& pg = psi.grid;
    const std::size_t nq = pg.q.n();
    const std::size_t np = pg.p.n();
    const double da = pg.cell_area();
    const RealField& slope = g.slope_samples();
    Observables o;
    o.t = psi.time;
    for (std::size_t i = 0; i < nq; ++i) {
        const double q = pg.q.point(i);
        double row = 0.0;
        double rowp = 0.0;
        for (std::size_t j = 0; j < np; ++j) {
            const double r = std::norm(psi.amplitudes[pg.index(i, j)]);
            row += r;
            rowp += pg.p.point(j) * r;
        }
        o.norm += row;
        o.q += q * row;
        o.p += rowp;
        o.force += slope[i] * row;
    }
    o.norm *= da;
    o.q *= da;
    o.p *= da;
    o.force *= da;

    if (g.kind() != GeneratorKind::unified || g.kappa() == 0.0) {
        return o;
    }

    const double shift = 0.5 * g.hbar() * g.kappa();
    const RealField kq = wavenumbers(pg.q);
    const RealField kp = wavenumbers(pg.p);

    // <theta> in the (k_q, p) representation.
    ComplexField a = psi.amplitudes;
    fft_axis(a, nq, np, 0, FftDirection::forward);
    double theta = 0.0;
    for (std::size_t i = 0; i < nq; ++i) {
        for (std::size_t j = 0; j < np; ++j) {
            theta += kq[i] * std::norm(a[pg.index(i, j)]);
        }
    }
    theta *= da / static_cast<double>(nq);

    // <lambda> and <V'(q - shift lambda)> in the (q, k_p) representation.
    ComplexField b = psi.amplitudes;
    fft_axis(b, nq, np, 1, FftDirection::forward);
    double lambda = 0.0;
    double force = 0.0;
    for (std::size_t i = 0; i < nq; ++i) {
        const double q = pg.q.point(i);
        for (std::size_t j = 0; j < np; ++j) {
            const double r = std::norm(b[pg.index(i, j)]);
            lambda += kp[j] * r;
            force += slope_at(g.potential(), q - shift * kp[j]) * r;
        }
    }
    lambda *= da / static_cast<double>(np);
    force *= da / static_cast<double>(np);

    o.q -= shift * lambda;
    o.p += shift * theta;
    o.force = force;
    return o;
}

Evolution<QWavefunction> evolve(const QWavefunction& psi, const Generator& g, double t_final,
                                std::size_t n_steps, const EvolveOptions& opts) {
    if (g.kind() != GeneratorKind::quantum) {
        throw InvalidArgument("evolve: a configuration-space state needs a quantum generator");
    }
    return evolve_impl(psi, g, t_final, n_steps, opts);
}

Evolution<KvNWavefunction> evolve(const KvNWavefunction& psi, const Generator& g, double t_final,
                                  std::size_t n_steps, const EvolveOptions& opts) {
    if (g.kind() == GeneratorKind::quantum) {
        throw InvalidArgument("evolve: a phase-space state needs a phase-space generator");
    }
    return evolve_impl(psi, g, t_final, n_steps, opts);
}

UnitarityReport check_unitarity(const Generator& g, const QWavefunction& psi, double dt, std::size_t n) {
    return unitarity_impl(g, psi, dt, n);
}

UnitarityReport check_unitarity(const Generator& g, const KvNWavefunction& psi, double dt, std::size_t n) {
    return unitarity_impl(g, psi, dt, n);
}

}  // namespace kvnlab
