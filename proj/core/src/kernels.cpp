#include "kvnlab/kernels.hpp"

#include "kvnlab/error.hpp"
#include "kvnlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kvnlab {

cplx gaussian_integral(cplx a, cplx b, cplx c) {
    if (a == cplx(0.0, 0.0)) {
        throw InvalidArgument("gaussian_integral: a = 0 gives a divergent integral");
    }
    if (a.real() < 0.0) {
        throw InvalidArgument("gaussian_integral: Re(a) < 0 gives a divergent integral");
    }
    return std::sqrt(pi / a) * std::exp(b * b / (4.0 * a) + c);
}

cplx free_quantum_kernel(double x, double x0, double t, double m, double hbar) {
    if (!(t > 0.0)) {
        throw InvalidArgument("free_quantum_kernel: t must be positive");
    }
    if (!(m > 0.0) || !(hbar > 0.0)) {
        throw InvalidArgument("free_quantum_kernel: m and hbar must be positive");
    }
    const cplx pref = std::sqrt(cplx(m, 0.0) / cplx(0.0, 2.0 * pi * hbar * t));
    const double d = x - x0;
    const double arg = m * d * d / (2.0 * hbar * t);
    return pref * cplx(std::cos(arg), std::sin(arg));
}

ComplexField propagate_by_kernel(const QWavefunction& psi0, const RealField& targets, double t, double m,
                                 double hbar) {
    if (!(t > 0.0)) {
        throw InvalidArgument("propagate_by_kernel: t must be positive");
    }
    const Grid1D& g = psi0.grid;
    const std::size_t n = g.n();
    const cplx pref = std::sqrt(cplx(m, 0.0) / cplx(0.0, 2.0 * pi * hbar * t)) * g.dx();
    const double w = m / (2.0 * hbar * t);
    ComplexField out(targets.size());
    parallel_for(0, targets.size(), [&](std::size_t i) {
        const double x = targets[i];
        cplx acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const cplx a = psi0.amplitudes[j];
            if (a == cplx(0.0, 0.0)) {
                continue;
            }
            const double d = x - g.point(j);
            const double arg = w * d * d;
            acc += a * cplx(std::cos(arg), std::sin(arg));
        }
        out[i] = pref * acc;
    });
    return out;
}

QWavefunction propagate_by_kernel(const QWavefunction& psi0, double t, double m, double hbar) {
    return QWavefunction(psi0.grid, propagate_by_kernel(psi0, psi0.grid.points(), t, m, hbar),
                         psi0.time + t);
}

KvNWavefunction free_kvn_propagate(const KvNWavefunction& psi0, double t, double m) {
    if (!(t >= 0.0)) {
        throw InvalidArgument("free_kvn_propagate: t must be >= 0");
    }
    if (!(m > 0.0)) {
        throw InvalidArgument("free_kvn_propagate: m must be positive");
    }
    KvNWavefunction out = psi0;
    out.time += t;
    if (t == 0.0) {
        return out;
    }
    const PhaseGrid& pg = psi0.grid;
    const RealField kq = wavenumbers(pg.q);
    fft_axis(out.amplitudes, pg.q.n(), pg.p.n(), 0, FftDirection::forward);
    for (std::size_t i = 0; i < pg.q.n(); ++i) {
        for (std::size_t j = 0; j < pg.p.n(); ++j) {
            const double a = -kq[i] * pg.p.point(j) * t / m;
            out.amplitudes[pg.index(i, j)] *= cplx(std::cos(a), std::sin(a));
        }
    }
    fft_axis(out.amplitudes, pg.q.n(), pg.p.n(), 0, FftDirection::inverse);
    return out;
}

std::vector<PhasePoint> integrate_characteristics(const Force& slope, double q0, double p0, double m,
                                                  double dt, std::size_t n_steps, double t0) {
    if (!(dt > 0.0) || !(m > 0.0)) {
        throw InvalidArgument("integrate_characteristics: dt and m must be positive");
    }
    std::vector<PhasePoint> out;
    out.reserve(n_steps + 1);
    double q = q0;
    double p = p0;
    double t = t0;
    out.push_back({t, q, p});
    for (std::size_t s = 0; s < n_steps; ++s) {
        const double k1q = p / m;
        const double k1p = -slope(q, t);
        const double k2q = (p + 0.5 * dt * k1p) / m;
        const double k2p = -slope(q + 0.5 * dt * k1q, t + 0.5 * dt);
        const double k3q = (p + 0.5 * dt * k2p) / m;
        const double k3p = -slope(q + 0.5 * dt * k2q, t + 0.5 * dt);
        const double k4q = (p + dt * k3p) / m;
        const double k4p = -slope(q + dt * k3q, t + dt);
        q += dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
        p += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        t = t0 + dt * static_cast<double>(s + 1);
        out.push_back({t, q, p});
    }
    return out;
}

double delta_law_check(DeltaLaw which, const std::vector<PhasePoint>& samples, double m,
                       const std::function<double(double)>& slope) {
    if (samples.size() < 2) {
        throw InvalidArgument("delta_law_check: need at least two samples");
    }
    double worst = 0.0;
    for (std::size_t j = 0; j + 1 < samples.size(); ++j) {
        const double dt = samples[j + 1].t - samples[j].t;
        if (!(dt > 0.0)) {
            throw InvalidArgument("delta_law_check: samples must be strictly increasing in t");
        }
        double r = 0.0;
        if (which == DeltaLaw::momentum_relation) {
            r = samples[j].p - m * (samples[j + 1].q - samples[j].q) / dt;
        } else {
            r = (samples[j + 1].p - samples[j].p) / dt + slope(samples[j].q);
        }
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

}  // namespace kvnlab
