#include "kvnlab/oscillator.hpp"

#include "kvnlab/error.hpp"
#include "kvnlab/operators.hpp"
#include "kvnlab/propagation.hpp"

#include <array>
#include <cmath>
#include <cstdio>

namespace kvnlab::oscillator {

namespace {

using Vec = std::array<double, 4>;

std::size_t step_count(double t_final, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw InvalidArgument("oscillator: dt must be positive");
    }
    if (!(t_final >= 0.0) || !std::isfinite(t_final)) {
        throw InvalidArgument("oscillator: t_final must be non-negative");
    }
    return static_cast<std::size_t>(std::llround(t_final / dt));
}

template <typename F>
Vec rk4(const F& f, const Vec& y, double t, double h) {
    auto axpy = [](const Vec& a, double s, const Vec& b) {
        Vec r;
        for (std::size_t i = 0; i < 4; ++i) {
            r[i] = a[i] + s * b[i];
        }
        return r;
    };
    const Vec k1 = f(t, y);
    const Vec k2 = f(t + 0.5 * h, axpy(y, 0.5 * h, k1));
    const Vec k3 = f(t + 0.5 * h, axpy(y, 0.5 * h, k2));
    const Vec k4 = f(t + h, axpy(y, h, k3));
    Vec out;
    for (std::size_t i = 0; i < 4; ++i) {
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return out;
}

void check_rho(double rho, double floor, double t) {
    if (!std::isfinite(rho) || !(rho > floor)) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "ermakov: rho collapsed to %.3e at t = %.6g", rho, t);
        throw NumericalError(buf);
    }
}

void check_init(const ErmakovState& s) {
    if (!(s.rho > 0.0) || !std::isfinite(s.rho)) {
        throw InvalidArgument("ermakov: rho must be positive");
    }
    if (!(s.C > 0.0) || !std::isfinite(s.C)) {
        throw InvalidArgument("ermakov: C must be positive");
    }
}

}  // namespace

std::vector<ErmakovState> integrate_ermakov(const Stiffness& k, const ErmakovState& init, double t_final,
                                            double dt) {
    check_init(init);
    const std::size_t n = step_count(t_final, dt);
    const double h = n == 0 ? 0.0 : t_final / static_cast<double>(n);
    const double floor = 1e-8 * init.rho;
    const double C = init.C;
    auto rhs = [&](double t, const Vec& y) -> Vec {
        check_rho(y[0], floor, t);
        const double r3 = y[0] * y[0] * y[0];
        return {y[1], -k(t) * y[0] + C / r3, 0.0, 0.0};
    };
    std::vector<ErmakovState> out;
    out.reserve(n + 1);
    out.push_back(init);
    Vec y{init.rho, init.rho_dot, 0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const double t = init.t + static_cast<double>(i) * h;
        y = rk4(rhs, y, t, h);
        const double t1 = init.t + static_cast<double>(i + 1) * h;
        check_rho(y[0], floor, t1);
        out.push_back({y[0], y[1], C, t1});
    }
    return out;
}

double ermakov_residual(const std::vector<ErmakovState>& traj, const Stiffness& k) {
    if (traj.size() < 3) {
        throw InvalidArgument("ermakov_residual: need at least three samples");
    }
    const double h = traj[1].t - traj[0].t;
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
        const double acc = (traj[i + 1].rho - 2.0 * traj[i].rho + traj[i - 1].rho) / (h * h);
        const double r = traj[i].rho;
        worst = std::max(worst, std::abs(acc + k(traj[i].t) * r - traj[i].C / (r * r * r)));
    }
    return worst;
}

std::vector<PhasePoint> solve_classical_tdho(const Stiffness& k, double q0, double p0, double m,
                                             double t_final, double dt) {
    if (!(m > 0.0)) {
        throw InvalidArgument("solve_classical_tdho: mass must be positive");
    }
    const std::size_t n = step_count(t_final, dt);
    const double h = n == 0 ? 0.0 : t_final / static_cast<double>(n);
    auto rhs = [&](double t, const Vec& y) -> Vec { return {y[1] / m, -k(t) * y[0], 0.0, 0.0}; };
    std::vector<PhasePoint> out;
    out.reserve(n + 1);
    out.push_back({0.0, q0, p0});
    Vec y{q0, p0, 0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        y = rk4(rhs, y, static_cast<double>(i) * h, h);
        out.push_back({static_cast<double>(i + 1) * h, y[0], y[1]});
    }
    return out;
}

double lewis_invariant_classical(double q, double p, double rho, double rho_dot, double C, double m) {
    if (!(rho > 0.0)) {
        throw InvalidArgument("lewis_invariant_classical: rho must be positive");
    }
    const double a = q / rho;
    const double b = rho_dot * q - rho * p / m;
    return 0.5 * (C * a * a + b * b);
}

std::vector<CoupledSample> integrate_coupled(const Stiffness& k, const ErmakovState& init, double q0,
                                             double p0, double m, double t_final, double dt) {
    check_init(init);
    if (!(m > 0.0)) {
        throw InvalidArgument("integrate_coupled: mass must be positive");
    }
    const std::size_t n = step_count(t_final, dt);
    const double h = n == 0 ? 0.0 : t_final / static_cast<double>(n);
    const double floor = 1e-8 * init.rho;
    const double C = init.C;
    auto rhs = [&](double t, const Vec& y) -> Vec {
        check_rho(y[0], floor, t);
        const double w2 = k(t) / m;
        return {y[1], -w2 * y[0] + C / (y[0] * y[0] * y[0]), y[3] / m, -k(t) * y[2]};
    };
    auto sample = [&](double t, const Vec& y) {
        return CoupledSample{t, y[2], y[3], y[0], y[1], lewis_invariant_classical(y[2], y[3], y[0], y[1], C, m)};
    };
    std::vector<CoupledSample> out;
    out.reserve(n + 1);
    Vec y{init.rho, init.rho_dot, q0, p0};
    out.push_back(sample(init.t, y));
    for (std::size_t i = 0; i < n; ++i) {
        y = rk4(rhs, y, init.t + static_cast<double>(i) * h, h);
        const double t1 = init.t + static_cast<double>(i + 1) * h;
        check_rho(y[0], floor, t1);
        out.push_back(sample(t1, y));
    }
    return out;
}

double frame_angle(const CoupledSample& s, double C, double m) {
    return std::atan2(s.rho_dot * s.q - s.rho * s.p / m, std::sqrt(C) * s.q / s.rho);
}

Eigen::Matrix2d monodromy(const Stiffness& k, double m, double t_final, double dt) {
    const auto a = solve_classical_tdho(k, 1.0, 0.0, m, t_final, dt).back();
    const auto b = solve_classical_tdho(k, 0.0, 1.0, m, t_final, dt).back();
    Eigen::Matrix2d M;
    M << a.q, b.q, a.p, b.p;
    return M;
}

BlobSample blob_moments(const KvNWavefunction& psi) {
    const PhaseGrid& pg = psi.grid;
    double s0 = 0.0, sq = 0.0, sp = 0.0, sqq = 0.0, spp = 0.0, sqp = 0.0;
    for (std::size_t i = 0; i < pg.q.n(); ++i) {
        const double q = pg.q.point(i);
        for (std::size_t j = 0; j < pg.p.n(); ++j) {
            const double p = pg.p.point(j);
            const double w = std::norm(psi.amplitudes[pg.index(i, j)]);
            s0 += w;
            sq += w * q;
            sp += w * p;
            sqq += w * q * q;
            spp += w * p * p;
            sqp += w * q * p;
        }
    }
    BlobSample b;
    b.t = psi.time;
    b.norm = s0 * pg.cell_area();
    if (!(s0 > 0.0)) {
        throw NumericalError("blob_moments: zero state");
    }
    b.q = sq / s0;
    b.p = sp / s0;
    b.var_q = sqq / s0 - b.q * b.q;
    b.var_p = spp / s0 - b.p * b.p;
    b.cov_qp = sqp / s0 - b.q * b.p;
    return b;
}

BlobRun kvn_tdho_evolve(const KvNWavefunction& psi0, const Stiffness& k, double m, double t_final,
                        std::size_t n_steps) {
    if (n_steps == 0) {
        throw InvalidArgument("kvn_tdho_evolve: n_steps must be positive");
    }
    if (!(t_final > 0.0) || !std::isfinite(t_final)) {
        throw InvalidArgument("kvn_tdho_evolve: t_final must be positive");
    }
    if (!(m > 0.0)) {
        throw InvalidArgument("kvn_tdho_evolve: mass must be positive");
    }
    const double h = t_final / static_cast<double>(n_steps);
    BlobRun run{psi0, {}};
    run.samples.reserve(n_steps + 1);
    run.samples.push_back(blob_moments(run.final_state));
    for (std::size_t i = 0; i < n_steps; ++i) {
        const double t0 = psi0.time + static_cast<double>(i) * h;
        const SplitStepper stepper(liouvillian(psi0.grid, Potential::harmonic(k(t0 + 0.5 * h)), m), h);
        stepper.step(run.final_state.amplitudes);
        run.final_state.time = psi0.time + static_cast<double>(i + 1) * h;
        run.samples.push_back(blob_moments(run.final_state));
    }
    return run;
}

}  // namespace kvnlab::oscillator
