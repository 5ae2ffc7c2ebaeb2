#include "kvnlab/gauge.hpp"

#include "kvnlab/error.hpp"

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

namespace kvnlab::gauge {

namespace {

constexpr double nu_limit = 50.0;
constexpr double x_limit = 200.0;

// c0 + c1 a + c2 a^2 in the flux a.
struct FluxPoly {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;

    FluxPoly operator-(const FluxPoly& o) const { return {c0 - o.c0, c1 - o.c1, c2 - o.c2}; }
    double at(double a) const {
        if (c1 == 0.0 && c2 == 0.0) {
            return c0;
        }
        return c0 + a * (c1 + a * c2);
    }
};

FluxPoly square(const FluxPoly& f) {
    if (f.c2 != 0.0) {
        throw InvalidArgument("kvn_radial_coeffs: flux polynomial degree exceeds two");
    }
    return {f.c0 * f.c0, 2.0 * f.c0 * f.c1, f.c1 * f.c1};
}

FluxPoly scale(const FluxPoly& f, double s) {
    return {f.c0 * s, f.c1 * s, f.c2 * s};
}

double series_j(double nu, double x) {
    const double h = 0.5 * x;
    double term = std::exp(nu * std::log(h) - std::lgamma(nu + 1.0));
    double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= -h * h / (static_cast<double>(k) * (static_cast<double>(k) + nu));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) {
            break;
        }
    }
    return sum;
}

// J_{nu0 + j}(x) for j = 0..order, nu0 in [0, 1), normalized with
// (x/2)^nu0 = sum_k (nu0 + 2k) Gamma(nu0 + k) / k! J_{nu0 + 2k}(x).
double miller_j(double nu, double x) {
    const double nu0 = nu - std::floor(nu);
    const int order = static_cast<int>(std::floor(nu));
    const double top = std::max(nu, x);
    int start = static_cast<int>(top + 30.0 + 10.0 * std::sqrt(top));
    start += start % 2;
    std::vector<double> j(static_cast<std::size_t>(start) + 2, 0.0);
    j[static_cast<std::size_t>(start) + 1] = 0.0;
    j[static_cast<std::size_t>(start)] = 1e-300;
    for (int k = start; k >= 1; --k) {
        const auto uk = static_cast<std::size_t>(k);
        j[uk - 1] = 2.0 * (nu0 + k) / x * j[uk] - j[uk + 1];
        if (std::abs(j[uk - 1]) > 1e250) {
            for (std::size_t i = uk - 1; i <= static_cast<std::size_t>(start) + 1; ++i) {
                j[i] *= 1e-250;
            }
        }
    }
    double norm = 0.0;
    for (int k = 0; 2 * k <= start; ++k) {
        const double w = k == 0 ? std::exp(std::lgamma(nu0 + 1.0))
                                : (nu0 + 2.0 * k) * std::exp(std::lgamma(nu0 + k) - std::lgamma(k + 1.0));
        norm += w * j[static_cast<std::size_t>(2 * k)];
    }
    const double target = std::pow(0.5 * x, nu0);
    return j[static_cast<std::size_t>(order)] * target / norm;
}

}  // namespace

void SolenoidConfig::validate() const {
    if (!(m > 0.0) || !std::isfinite(m)) {
        throw InvalidArgument("solenoid: m must be positive");
    }
    if (!(R_boundary > 0.0) || !std::isfinite(R_boundary)) {
        throw InvalidArgument("solenoid: R_boundary must be positive");
    }
    if (!(hbar > 0.0) || !std::isfinite(hbar)) {
        throw InvalidArgument("solenoid: hbar must be positive");
    }
    if (!std::isfinite(alpha) || !std::isfinite(pz0) || !std::isfinite(ptheta0) || !std::isfinite(lambda_z0)) {
        throw InvalidArgument("solenoid: parameters must be finite");
    }
}

QuantumRadialCoeffs quantum_radial_coeffs(const SolenoidConfig& cfg, double E) {
    cfg.validate();
    const double shifted = static_cast<double>(cfg.n) - cfg.alpha;
    QuantumRadialCoeffs c;
    const double h2 = cfg.hbar * cfg.hbar;
    c.constant = 2.0 * cfg.m * E / h2 - cfg.pz0 * cfg.pz0 / h2;
    c.inverse_r2 = -shifted * shifted;
    c.nu = std::abs(shifted);
    return c;
}

KvnRadialCoeffs kvn_radial_coeffs(const SolenoidConfig& cfg, double E_tilde) {
    cfg.validate();
    const FluxPoly support{cfg.ptheta0, cfg.hbar, 0.0};
    const FluxPoly coupling{0.0, cfg.hbar, 0.0};
    const FluxPoly kinetic = support - coupling;
    KvnRadialCoeffs r;
    r.dr_coeff_imag = -1.0 / cfg.m;
    r.inverse_r2 = scale(kinetic, static_cast<double>(cfg.n) / cfg.m).at(cfg.alpha);
    r.dpr_coeff_imag = scale(square(kinetic), -1.0 / cfg.m).at(cfg.alpha);
    r.constant = cfg.lambda_z0 * cfg.pz0 / cfg.m - E_tilde;
    return r;
}

std::uint64_t record_hash(const KvnRadialCoeffs& rec) {
    std::uint64_t h = 1469598103934665603ULL;
    auto feed = [&](double v) {
        unsigned char bytes[sizeof(double)];
        std::memcpy(bytes, &v, sizeof v);
        for (unsigned char b : bytes) {
            h ^= b;
            h *= 1099511628211ULL;
        }
    };
    feed(rec.dr_coeff_imag);
    feed(rec.inverse_r2);
    feed(rec.dpr_coeff_imag);
    feed(rec.constant);
    return h;
}

double bessel_j(double nu, double x) {
    if (!(nu >= 0.0) || nu > nu_limit) {
        throw InvalidArgument("bessel_j: order must lie in [0, 50], got " + std::to_string(nu));
    }
    if (!(x >= 0.0) || x > x_limit) {
        throw InvalidArgument("bessel_j: argument must lie in [0, 200], got " + std::to_string(x));
    }
    if (x == 0.0) {
        return nu == 0.0 ? 1.0 : 0.0;
    }
    if (x < 12.0 || x * x < 4.0 * (nu + 1.0)) {
        return series_j(nu, x);
    }
    return miller_j(nu, x);
}

double lowest_zero(double nu) {
    if (!(nu >= 0.0) || nu > nu_limit) {
        throw InvalidArgument("lowest_zero: order must lie in [0, 50]");
    }
    // J_nu is positive on (0, nu], and consecutive zeros are more than 2 apart.
    double a = std::max(nu, 1e-3);
    double b = a;
    double fb = bessel_j(nu, a);
    while (fb > 0.0) {
        a = b;
        b += 0.25;
        if (b > x_limit) {
            throw NumericalError("lowest_zero: no sign change found");
        }
        fb = bessel_j(nu, b);
    }
    while (b - a > 1e-11) {
        const double mid = 0.5 * (a + b);
        const double fm = bessel_j(nu, mid);
        if (fm > 0.0) {
            a = mid;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

double disc_ground_energy(const SolenoidConfig& cfg) {
    cfg.validate();
    const double nu = std::abs(static_cast<double>(cfg.n) - cfg.alpha);
    const double j = lowest_zero(nu);
    const double R = cfg.R_boundary;
    return cfg.hbar * cfg.hbar * j * j / (2.0 * cfg.m * R * R) + cfg.pz0 * cfg.pz0 / (2.0 * cfg.m);
}

}  // namespace kvnlab::gauge
