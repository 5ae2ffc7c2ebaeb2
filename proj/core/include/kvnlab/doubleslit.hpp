#pragma once

#include "kvnlab/grid.hpp"
#include "kvnlab/states.hpp"

#include <cstddef>

namespace kvnlab::doubleslit {

struct GridSpec {
    std::size_t n;
    double min;
    double max;

    Grid1D grid() const { return Grid1D(n, min, max); }
};

struct SlitConfig {
    double hbar = 1.0;
    double m = 1.0;
    double sigma_x = 1.0;
    double sigma_p = 0.1;
    double x_A = 3.0;
    double delta = 0.5;
    double p0y = 50.0;
    double y_M = 50.0;
    double y_R = 150.0;
    GridSpec x{2048, -64.0, 64.0};
    GridSpec p{256, -4.0, 4.0};
    // Sub-samples per cell for box-averaged masks and for the slit quadrature.
    std::size_t subsamples = 4;

    double t_M() const { return y_M * m / p0y; }
    double t_R() const { return y_R * m / p0y; }

    // Throws InvalidArgument naming the violated invariant.
    void validate() const;
};

enum class Slits { both, first, second };

double heaviside(double x);

// Pointwise C1 + C2 (or one of them). C1 is centered at +x_A, C2 at -x_A.
double slit_mask(double x, const SlitConfig& cfg, Slits which = Slits::both);
RealField slit_mask(const RealField& x, const SlitConfig& cfg, Slits which = Slits::both);

// Cell average of the pointwise mask over `sub` midpoints per cell of width dx centered at x.
double box_mask(double x, double dx, const SlitConfig& cfg, Slits which, std::size_t sub);

// Closed-form free evolution of N exp(-x^2 / 2 sigma_x^2) to time t, with N fixing unit norm at t=0.
cplx free_gaussian(double x, double t, const SlitConfig& cfg);

struct ScreenResult {
    Grid1D grid;
    RealField density;         // normalized on the screen window
    double transmitted = 0.0;  // mass passing the slits, before renormalization
    double boundary_mass = 0.0;
};

ScreenResult run_quantum(const SlitConfig& cfg, Slits which = Slits::both);

// phase, if given, is the initial G(x, p) in psi = R exp(iG).
ScreenResult run_kvn(const SlitConfig& cfg, Slits which = Slits::both, const PhaseFunction& phase = {});

enum class Model { quantum, kvn };

// which = 1 opens only the slit at +x_A, which = 2 only the one at -x_A.
ScreenResult run_single_slit(const SlitConfig& cfg, int which, Model model);

struct FringeStats {
    std::size_t maxima = 0;
    double contrast = 0.0;  // (max - adjacent min)/(max + adjacent min) around the global peak
    double peak = 0.0;
};

// Two-slit fringe wavenumber 2 x_A m / (hbar (t_R - t_M)).
double fringe_wavenumber(const SlitConfig& cfg);

// Largest |density - lowpass(density)| relative to the peak, where lowpass keeps spatial
// wavenumbers below k_cut. A Hann taper suppresses leakage from the window edges.
double sub_fringe_amplitude(const RealField& density, const Grid1D& g, double k_cut);

// Interior local maxima whose prominence exceeds prominence_fraction * peak.
FringeStats analyze_fringes(const RealField& density, double prominence_fraction = 0.01);

}  // namespace kvnlab::doubleslit
