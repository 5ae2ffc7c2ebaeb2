#pragma once

#include <cstdint>

namespace kvnlab::gauge {

struct SolenoidConfig {
    double alpha = 0.0;  // e Phi / (c h)
    int n = 0;
    double pz0 = 0.0;
    double ptheta0 = 1.0;
    double m = 1.0;
    double R_boundary = 1.0;
    double hbar = 1.0;
    double lambda_z0 = 0.0;

    void validate() const;
};

// R'' + (1/r) R' + (constant + inverse_r2 / r^2) R = 0
struct QuantumRadialCoeffs {
    double second = 1.0;
    double first = 1.0;  // multiplies R'/r
    double constant = 0.0;
    double inverse_r2 = 0.0;
    double nu = 0.0;  // |n - alpha|
};

QuantumRadialCoeffs quantum_radial_coeffs(const SolenoidConfig& cfg, double E);

// (dr_coeff p_r d/dr + inverse_r2 / r^2 + dpr_coeff / r^3 d/dp_r + constant) R(r, p_r) = 0,
// dr_coeff = -i/m and dpr_coeff = -i ptheta^2/m stored by their imaginary parts.
struct KvnRadialCoeffs {
    double dr_coeff_imag = 0.0;
    double inverse_r2 = 0.0;
    double dpr_coeff_imag = 0.0;
    double constant = 0.0;

    bool operator==(const KvnRadialCoeffs&) const = default;
};

// Minimal coupling p_theta -> p_theta - alpha hbar applied to the ansatz supported on
// p_theta = ptheta0 + alpha hbar. The flux enters as polynomial coefficients in alpha that
// cancel exactly, so the record does not depend on alpha at the bit level.
KvnRadialCoeffs kvn_radial_coeffs(const SolenoidConfig& cfg, double E_tilde);

// FNV-1a over the bytes of the record fields.
std::uint64_t record_hash(const KvnRadialCoeffs& rec);

// J_nu(x) for 0 <= nu <= 50, 0 <= x <= 200: ascending series for small x, Miller
// backward recurrence otherwise. Throws InvalidArgument outside that envelope.
double bessel_j(double nu, double x);

// First positive zero of J_nu, bracketed by a forward scan and bisected to 1e-10.
double lowest_zero(double nu);

// hbar^2 j_{nu,1}^2 / (2 m R^2) + pz0^2 / (2m) with nu = |n - alpha|.
double disc_ground_energy(const SolenoidConfig& cfg);

}  // namespace kvnlab::gauge
