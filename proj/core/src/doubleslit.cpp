#include "kvnlab/doubleslit.hpp"

#include "kvnlab/error.hpp"
#include "kvnlab/kernels.hpp"
#include "kvnlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace kvnlab::doubleslit {

namespace {

constexpr double boundary_limit = 1e-10;
constexpr std::size_t boundary_cells = 4;

void positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw InvalidArgument(std::string("doubleslit: ") + name + " must be positive");
    }
}

void grid_ok(const GridSpec& g, const char* name) {
    if (g.n < 8 || !is_power_of_two(g.n)) {
        throw InvalidArgument(std::string("doubleslit: ") + name + ".n must be a power of two >= 8");
    }
    if (!(g.max > g.min)) {
        throw InvalidArgument(std::string("doubleslit: ") + name + " requires max > min");
    }
}

std::vector<double> slit_centers(const SlitConfig& cfg, Slits which) {
    switch (which) {
    case Slits::first:
        return {cfg.x_A};
    case Slits::second:
        return {-cfg.x_A};
    case Slits::both:
        return {cfg.x_A, -cfg.x_A};
    }
    return {};
}

void require_boundary(double mass, const char* stage) {
    if (mass > boundary_limit) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "doubleslit: boundary mass %.3e at %s exceeds %.0e; widen the grid",
                      mass, stage, boundary_limit);
        throw BoundaryMassError(buf, mass);
    }
}

double edge_mass_1d(const Grid1D& g, const ComplexField& psi) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.n(); ++i) {
        if (i < boundary_cells || i + boundary_cells >= g.n()) {
            s += std::norm(psi[i]);
        }
    }
    return s * g.dx();
}

}  // namespace

void SlitConfig::validate() const {
    positive(hbar, "hbar");
    positive(m, "m");
    positive(sigma_x, "sigma_x");
    positive(sigma_p, "sigma_p");
    positive(p0y, "p0y");
    positive(delta, "delta");
    if (!(x_A > delta)) {
        throw InvalidArgument("doubleslit: x_A > delta is required (slits must not overlap the origin)");
    }
    if (!(y_M > 0.0)) {
        throw InvalidArgument("doubleslit: y_M > 0 is required");
    }
    if (!(y_R > y_M)) {
        throw InvalidArgument("doubleslit: y_R > y_M is required");
    }
    grid_ok(x, "x");
    grid_ok(p, "p");
    if (subsamples < 1) {
        throw InvalidArgument("doubleslit: subsamples must be >= 1");
    }
    if (!(x.min < -x_A - delta && x.max > x_A + delta)) {
        throw InvalidArgument("doubleslit: x grid must contain both slits");
    }
}

double heaviside(double x) {
    return x > 0.0 ? 1.0 : 0.0;
}

double slit_mask(double x, const SlitConfig& cfg, Slits which) {
    const double c1 = heaviside(x - cfg.x_A + cfg.delta) - heaviside(x - cfg.x_A - cfg.delta);
    const double c2 = heaviside(x + cfg.x_A + cfg.delta) - heaviside(x + cfg.x_A - cfg.delta);
    switch (which) {
    case Slits::first:
        return c1;
    case Slits::second:
        return c2;
    case Slits::both:
        return c1 + c2;
    }
    return 0.0;
}

RealField slit_mask(const RealField& x, const SlitConfig& cfg, Slits which) {
    RealField out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = slit_mask(x[i], cfg, which);
    }
    return out;
}

double box_mask(double x, double dx, const SlitConfig& cfg, Slits which, std::size_t sub) {
    double s = 0.0;
    const double h = dx / static_cast<double>(sub);
    for (std::size_t k = 0; k < sub; ++k) {
        s += slit_mask(x - 0.5 * dx + (static_cast<double>(k) + 0.5) * h, cfg, which);
    }
    return s / static_cast<double>(sub);
}

cplx free_gaussian(double x, double t, const SlitConfig& cfg) {
    const double norm0 = std::pow(pi * cfg.sigma_x * cfg.sigma_x, -0.25);
    if (t == 0.0) {
        return norm0 * std::exp(-x * x / (2.0 * cfg.sigma_x * cfg.sigma_x));
    }
    const cplx i1(0.0, 1.0);
    const double ht = cfg.hbar * t;
    const cplx a = -(i1 * cfg.m / (2.0 * ht) - 1.0 / (2.0 * cfg.sigma_x * cfg.sigma_x));
    const cplx b = -i1 * cfg.m * x / ht;
    const cplx c = i1 * cfg.m * x * x / (2.0 * ht);
    const cplx pref = std::sqrt(cplx(cfg.m, 0.0) / (i1 * 2.0 * pi * ht));
    return norm0 * pref * gaussian_integral(a, b, c);
}

ScreenResult run_quantum(const SlitConfig& cfg, Slits which) {
    cfg.validate();
    const Grid1D g = cfg.x.grid();
    const double tm = cfg.t_M();
    const double dt = cfg.t_R() - tm;

    ComplexField pre(g.n());
    for (std::size_t i = 0; i < g.n(); ++i) {
        pre[i] = free_gaussian(g.point(i), tm, cfg);
    }
    require_boundary(edge_mass_1d(g, pre), "the slit wall");

    // Midpoint sources inside the open slits, evaluated from the closed form.
    const double h = g.dx() / static_cast<double>(cfg.subsamples);
    const auto count = static_cast<std::size_t>(std::llround(2.0 * cfg.delta / h));
    std::vector<double> ys;
    ComplexField src;
    double transmitted = 0.0;
    for (double c : slit_centers(cfg, which)) {
        const double step = 2.0 * cfg.delta / static_cast<double>(count);
        for (std::size_t k = 0; k < count; ++k) {
            const double y = c - cfg.delta + (static_cast<double>(k) + 0.5) * step;
            const cplx v = free_gaussian(y, tm, cfg);
            ys.push_back(y);
            src.push_back(v * step);
            transmitted += std::norm(v) * step;
        }
    }
    if (!(transmitted > 0.0)) {
        throw NumericalError("doubleslit: no probability passes the slits");
    }

    ComplexField screen(g.n());
    parallel_for(0, g.n(), [&](std::size_t i) {
        const double x = g.point(i);
        cplx acc = 0.0;
        for (std::size_t k = 0; k < ys.size(); ++k) {
            acc += free_quantum_kernel(x, ys[k], dt, cfg.m, cfg.hbar) * src[k];
        }
        screen[i] = acc;
    });

    ScreenResult out{g, RealField(g.n()), transmitted, 0.0};
    double total = 0.0;
    for (std::size_t i = 0; i < g.n(); ++i) {
        out.density[i] = std::norm(screen[i]);
        total += out.density[i];
    }
    total *= g.dx();
    out.boundary_mass = edge_mass_1d(g, screen) / total;
    for (auto& v : out.density) {
        v /= total;
    }
    return out;
}

ScreenResult run_kvn(const SlitConfig& cfg, Slits which, const PhaseFunction& phase) {
    cfg.validate();
    const PhaseGrid pg(cfg.x.grid(), cfg.p.grid());
    const std::size_t nq = pg.q.n();
    const std::size_t np = pg.p.n();
    const double tm = cfg.t_M();
    const double dt = cfg.t_R() - tm;

    const double norm0 = 1.0 / std::sqrt(pi * cfg.sigma_x * cfg.sigma_p);
    ComplexField a(pg.size());
    for (std::size_t i = 0; i < nq; ++i) {
        const double x = pg.q.point(i);
        for (std::size_t j = 0; j < np; ++j) {
            const double p = pg.p.point(j);
            const double r = norm0 * std::exp(-x * x / (2.0 * cfg.sigma_x * cfg.sigma_x) -
                                              p * p / (2.0 * cfg.sigma_p * cfg.sigma_p));
            const double gphase = phase ? phase(x, p) : 0.0;
            a[pg.index(i, j)] = r * cplx(std::cos(gphase), std::sin(gphase));
        }
    }
    KvNWavefunction psi(pg, std::move(a));
    require_boundary(boundary_mass(psi, boundary_cells), "t=0");

    const KvNWavefunction at_wall = free_kvn_propagate(psi, tm, cfg.m);
    require_boundary(boundary_mass(at_wall, boundary_cells), "the slit wall");

    // Shearing is exact, so masking at the wall and then shearing equals shearing
    // and then masking at the departure point x - p dt / m.
    KvNWavefunction screen = free_kvn_propagate(at_wall, dt, cfg.m);
    for (std::size_t i = 0; i < nq; ++i) {
        const double x = pg.q.point(i);
        for (std::size_t j = 0; j < np; ++j) {
            const double x0 = x - pg.p.point(j) * dt / cfg.m;
            screen.amplitudes[pg.index(i, j)] *= box_mask(x0, pg.q.dx(), cfg, which, cfg.subsamples);
        }
    }

    ScreenResult out{pg.q, position_marginal(screen), 0.0, 0.0};
    double total = 0.0;
    for (double v : out.density) {
        total += v;
    }
    total *= pg.q.dx();
    if (!(total > 0.0)) {
        throw NumericalError("doubleslit: no probability passes the slits");
    }
    out.transmitted = total;
    out.boundary_mass = boundary_mass(screen, boundary_cells) / total;
    require_boundary(out.boundary_mass, "the screen");
    for (auto& v : out.density) {
        v /= total;
    }
    return out;
}

ScreenResult run_single_slit(const SlitConfig& cfg, int which, Model model) {
    if (which != 1 && which != 2) {
        throw InvalidArgument("run_single_slit: which must be 1 or 2");
    }
    const Slits s = which == 1 ? Slits::first : Slits::second;
    return model == Model::quantum ? run_quantum(cfg, s) : run_kvn(cfg, s);
}

double fringe_wavenumber(const SlitConfig& cfg) {
    return 2.0 * cfg.x_A * cfg.m / (cfg.hbar * (cfg.t_R() - cfg.t_M()));
}

double sub_fringe_amplitude(const RealField& density, const Grid1D& g, double k_cut) {
    if (density.size() != g.n()) {
        throw GridMismatch("sub_fringe_amplitude: density does not match the grid");
    }
    const std::size_t n = g.n();
    ComplexField f(n);
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 0.5 - 0.5 * std::cos(2.0 * pi * static_cast<double>(i) / static_cast<double>(n));
        f[i] = density[i] * w;
        peak = std::max(peak, std::abs(density[i]));
    }
    if (!(peak > 0.0)) {
        return 0.0;
    }
    fft(f, FftDirection::forward);
    const RealField k = wavenumbers(g);
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(k[i]) < k_cut) {
            f[i] = 0.0;
        }
    }
    fft(f, FftDirection::inverse);
    double worst = 0.0;
    for (const auto& v : f) {
        worst = std::max(worst, std::abs(v.real()));
    }
    return worst / peak;
}

FringeStats analyze_fringes(const RealField& d, double prominence_fraction) {
    FringeStats st;
    if (d.size() < 3) {
        return st;
    }
    const auto peak_it = std::max_element(d.begin(), d.end());
    st.peak = *peak_it;
    if (!(st.peak > 0.0)) {
        return st;
    }
    auto adjacent_min = [&](std::size_t i) {
        std::size_t l = i;
        while (l > 0 && d[l - 1] <= d[l]) {
            --l;
        }
        std::size_t r = i;
        while (r + 1 < d.size() && d[r + 1] <= d[r]) {
            ++r;
        }
        return std::max(d[l], d[r]);
    };
    for (std::size_t i = 1; i + 1 < d.size(); ++i) {
        if (d[i] > d[i - 1] && d[i] >= d[i + 1]) {
            if (d[i] - adjacent_min(i) > prominence_fraction * st.peak) {
                ++st.maxima;
            }
        }
    }
    const auto ip = static_cast<std::size_t>(peak_it - d.begin());
    const double mn = adjacent_min(ip);
    st.contrast = (st.peak - mn) / (st.peak + mn);
    return st;
}

}  // namespace kvnlab::doubleslit
