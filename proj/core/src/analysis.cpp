#include "kvnlab/analysis.hpp"

#include "kvnlab/error.hpp"
#include "kvnlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace kvnlab {

namespace {

constexpr double radicand_floor = 1e-10;
constexpr double robertson_slack = 1e-8;
constexpr double wigner_imag_limit = 1e-10;

template <typename State>
double std_dev_impl(const GridOperator& op, const State& psi) {
    const double mean = expectation(op, psi).real();
    const double second = expectation(op * op, psi).real();
    const double var = second - mean * mean;
    if (var < 0.0) {
        if (var < -radicand_floor * std::max(1.0, std::abs(second))) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "std_dev: negative variance %.3e", var);
            throw NumericalError(buf);
        }
        return 0.0;
    }
    return std::sqrt(var);
}

template <typename State>
RobertsonResult robertson_impl(const GridOperator& a, const GridOperator& b, const State& psi) {
    RobertsonResult r;
    r.lhs = std_dev_impl(a, psi) * std_dev_impl(b, psi);
    State c = psi;
    c.amplitudes = commutator_apply(a, b, psi.amplitudes);
    r.rhs = 0.5 * std::abs(inner_product(psi, c));
    r.satisfied = r.lhs >= r.rhs - robertson_slack;
    return r;
}

// Sorted (p increasing) position k of DFT index l, for even n.
std::size_t dft_index(std::size_t k, std::size_t n) {
    return (k + n / 2) % n;
}

}  // namespace

double std_dev(const GridOperator& op, const QWavefunction& psi) {
    return std_dev_impl(op, psi);
}

double std_dev(const GridOperator& op, const KvNWavefunction& psi) {
    return std_dev_impl(op, psi);
}

RobertsonResult robertson_check(const GridOperator& a, const GridOperator& b, const QWavefunction& psi) {
    return robertson_impl(a, b, psi);
}

RobertsonResult robertson_check(const GridOperator& a, const GridOperator& b, const KvNWavefunction& psi) {
    return robertson_impl(a, b, psi);
}

std::vector<double> time_derivative(const std::vector<double>& y, double dt) {
    const std::size_t n = y.size();
    if (n < 3) {
        throw InvalidArgument("time_derivative: need at least three samples");
    }
    std::vector<double> d(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        d[i] = (y[i + 1] - y[i - 1]) / (2.0 * dt);
    }
    d[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * dt);
    d[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * dt);
    return d;
}

EhrenfestResiduals ehrenfest_residuals(const std::vector<Observables>& series, double m) {
    const std::size_t n = series.size();
    if (n < 5) {
        throw InvalidArgument("ehrenfest_residuals: need at least 5 time samples");
    }
    if (!(m > 0.0)) {
        throw InvalidArgument("ehrenfest_residuals: mass must be positive");
    }
    const double dt = series[1].t - series[0].t;
    if (!(dt > 0.0)) {
        throw InvalidArgument("ehrenfest_residuals: samples must advance in time");
    }
    for (std::size_t i = 1; i < n; ++i) {
        const double step = series[i].t - series[i - 1].t;
        if (std::abs(step - dt) > 1e-9 * std::max(1.0, std::abs(series[i].t))) {
            throw InvalidArgument("ehrenfest_residuals: samples must be uniformly spaced");
        }
    }
    std::vector<double> q(n);
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) {
        q[i] = series[i].q;
        p[i] = series[i].p;
    }
    const auto dq = time_derivative(q, dt);
    const auto dp = time_derivative(p, dt);
    EhrenfestResiduals r;
    for (std::size_t i = 0; i < n; ++i) {
        r.q_scale = std::max(r.q_scale, std::abs(series[i].p / m));
        r.p_scale = std::max(r.p_scale, std::abs(series[i].force));
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        r.r1_max = std::max(r.r1_max, std::abs(dq[i] - series[i].p / m));
        r.r2_max = std::max(r.r2_max, std::abs(dp[i] + series[i].force));
    }
    return r;
}

PhaseGrid wigner_grid(const Grid1D& q, double hbar) {
    if (!(hbar > 0.0)) {
        throw InvalidArgument("wigner_grid: hbar must be positive");
    }
    const double pmax = pi * hbar / q.dx();
    return PhaseGrid(q, Grid1D(q.n(), -pmax, pmax));
}

RealField wigner_transform(const QWavefunction& psi, const PhaseGrid& pg, double hbar) {
    if (!(pg.q == psi.grid)) {
        throw GridMismatch("wigner_transform: phase grid q axis differs from the state grid");
    }
    const PhaseGrid expect = wigner_grid(psi.grid, hbar);
    const double tol = 1e-12 * expect.p.x_max();
    if (pg.p.n() != expect.p.n() || std::abs(pg.p.x_min() - expect.p.x_min()) > tol ||
        std::abs(pg.p.x_max() - expect.p.x_max()) > tol) {
        throw GridMismatch("wigner_transform: p axis must be wigner_grid(q, hbar)");
    }
    const std::size_t n = psi.grid.n();
    const double dq = psi.grid.dx();

    // Band-limited interpolation onto the half-step grid by spectral zero padding.
    ComplexField spec = psi.amplitudes;
    fft(spec, FftDirection::forward);
    ComplexField fine(2 * n, 0.0);
    for (std::size_t j = 0; j < n / 2; ++j) {
        fine[j] = spec[j];
    }
    for (std::size_t j = n / 2 + 1; j < n; ++j) {
        fine[j + n] = spec[j];
    }
    fine[n / 2] = 0.5 * spec[n / 2];
    fine[n + n / 2] = 0.5 * spec[n / 2];
    fft(fine, FftDirection::inverse);
    for (auto& v : fine) {
        v *= 2.0;
    }

    const double pref = dq / (2.0 * pi * hbar);
    const std::size_t m2 = 2 * n;
    RealField w(pg.size());
    std::vector<double> worst_imag(n, 0.0);
    parallel_for(0, n, [&](std::size_t j) {
        // Pairs leaving the domain are dropped rather than wrapped. Offsets s and s + n share
        // a phase on this p grid, so they fold into one slot.
        ComplexField row(n, 0.0);
        const long long c = 2 * static_cast<long long>(j);
        const long long top = static_cast<long long>(m2);
        const long long span = static_cast<long long>(n);
        for (long long s = -span; s < span; ++s) {
            const long long a = c + s;
            const long long b = c - s;
            if (a < 0 || b < 0 || a >= top || b >= top) {
                continue;
            }
            const auto slot = static_cast<std::size_t>(s < 0 ? s + span : s);
            row[slot] += std::conj(fine[static_cast<std::size_t>(a)]) * fine[static_cast<std::size_t>(b)];
        }
        // sum_s f(s) exp(+2 pi i l s / n) is n times the normalized inverse DFT.
        fft(row, FftDirection::inverse);
        double wi = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const cplx v = row[dft_index(k, n)] * (pref * static_cast<double>(n));
            w[pg.index(j, k)] = v.real();
            wi = std::max(wi, std::abs(v.imag()));
        }
        worst_imag[j] = wi;
    });

    const double imag = *std::max_element(worst_imag.begin(), worst_imag.end());
    if (imag > wigner_imag_limit) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "wigner_transform: imaginary residue %.3e exceeds %.0e", imag,
                      wigner_imag_limit);
        throw NumericalError(buf);
    }
    double total = 0.0;
    for (double v : w) {
        total += v;
    }
    total *= pg.cell_area();
    if (!(std::abs(total) > 0.0)) {
        throw NumericalError("wigner_transform: zero total integral");
    }
    for (auto& v : w) {
        v /= total;
    }
    return w;
}

RealField momentum_density(const QWavefunction& psi, double hbar) {
    const std::size_t n = psi.grid.n();
    const double dq = psi.grid.dx();
    ComplexField spec = psi.amplitudes;
    fft(spec, FftDirection::forward);
    RealField out(n);
    const double scale = dq * dq / (2.0 * pi * hbar);
    for (std::size_t s = 0; s < n; ++s) {
        out[s] = std::norm(spec[dft_index(s, n)]) * scale;
    }
    return out;
}

}  // namespace kvnlab
