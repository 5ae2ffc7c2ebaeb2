#include "kvnlab/doubleslit.hpp"
#include "kvnlab/error.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace kvnlab;
using namespace kvnlab::doubleslit;

namespace {

double integral(const ScreenResult& r) {
    double s = 0.0;
    for (double v : r.density) {
        s += v * r.grid.dx();
    }
    return s;
}

// Mirror index of x_i under x -> -x on a symmetric grid.
std::size_t mirror(std::size_t i, std::size_t n) {
    return n - i;
}

struct Runs {
    SlitConfig cfg;
    ScreenResult kvn = run_kvn(cfg);
    ScreenResult kvn1 = run_single_slit(cfg, 1, Model::kvn);
    ScreenResult kvn2 = run_single_slit(cfg, 2, Model::kvn);
    ScreenResult q = run_quantum(cfg);
    ScreenResult q1 = run_single_slit(cfg, 1, Model::quantum);
    ScreenResult q2 = run_single_slit(cfg, 2, Model::quantum);
};

const Runs& runs() {
    static const Runs r;
    return r;
}

}  // namespace

TEST(Heaviside, Values) {
    EXPECT_EQ(heaviside(1.0), 1.0);
    EXPECT_EQ(heaviside(-1.0), 0.0);
    EXPECT_EQ(heaviside(0.0), 0.0);
    for (double x : {-2.0, 0.5, 3.0}) {
        EXPECT_EQ(heaviside(heaviside(x)), heaviside(x));
    }
}

TEST(SlitMask, PointValuesAndIdempotence) {
    const SlitConfig cfg;
    EXPECT_EQ(slit_mask(cfg.x_A, cfg), 1.0);
    EXPECT_EQ(slit_mask(0.0, cfg), 0.0);
    EXPECT_EQ(slit_mask(-cfg.x_A, cfg), 1.0);
    EXPECT_EQ(slit_mask(cfg.x_A, cfg, Slits::second), 0.0);
    const Grid1D g = cfg.x.grid();
    const auto mask = slit_mask(g.points(), cfg);
    double area = 0.0;
    for (double v : mask) {
        EXPECT_TRUE(v == 0.0 || v == 1.0);
        EXPECT_EQ(v * v, v);
        area += v * g.dx();
    }
    EXPECT_LE(std::abs(area - 4.0 * cfg.delta), g.dx());
}

TEST(SlitMask, BoxAverageIsPartialAtEdges) {
    const SlitConfig cfg;
    const double dx = 0.1;
    EXPECT_NEAR(box_mask(cfg.x_A, dx, cfg, Slits::both, 4), 1.0, 1e-15);
    const double edge = box_mask(cfg.x_A + cfg.delta, dx, cfg, Slits::both, 4);
    EXPECT_GT(edge, 0.0);
    EXPECT_LT(edge, 1.0);
}

TEST(SlitConfig, Validation) {
    SlitConfig cfg;
    cfg.delta = 3.5;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
    cfg = SlitConfig{};
    cfg.y_R = 10.0;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
    cfg = SlitConfig{};
    cfg.x.n = 1000;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
    cfg = SlitConfig{};
    cfg.sigma_x = 0.0;
    EXPECT_THROW(run_quantum(cfg), InvalidArgument);
    EXPECT_NO_THROW(SlitConfig{}.validate());
    EXPECT_THROW(run_single_slit(SlitConfig{}, 3, Model::kvn), InvalidArgument);
}

TEST(FreeGaussian, NormalizedAndSpreading) {
    const SlitConfig cfg;
    const Grid1D g(4096, -60.0, 60.0);
    for (double t : {0.0, 1.0, 3.0}) {
        double s = 0.0, v = 0.0;
        for (std::size_t i = 0; i < g.n(); ++i) {
            const double r = std::norm(free_gaussian(g.point(i), t, cfg));
            s += r * g.dx();
            v += g.point(i) * g.point(i) * r * g.dx();
        }
        EXPECT_NEAR(s, 1.0, 1e-10);
        // Variance of |psi|^2 for exp(-x^2/2 sx^2): (sx^2 + (hbar t/m sx)^2)/2.
        EXPECT_NEAR(v, 0.5 * (1.0 + t * t), 1e-8);
    }
}

TEST(Quantum, ProperDensity) {
    const auto& r = runs().q;
    for (double v : r.density) {
        EXPECT_GE(v, 0.0);
    }
    EXPECT_NEAR(integral(r), 1.0, 1e-10);
    EXPECT_GT(r.transmitted, 0.0);
    EXPECT_LT(r.transmitted, 1.0);
}

TEST(Quantum, FringesOnDefaultConfig) {
    const auto fr = analyze_fringes(runs().q.density);
    EXPECT_GE(fr.maxima, 3u);
    EXPECT_GT(fr.contrast, 0.2);
}

TEST(Quantum, SingleSlitHasNoSubFringeStructure) {
    const auto& r = runs();
    const double kf = fringe_wavenumber(r.cfg);
    EXPECT_NEAR(kf, 3.0, 1e-12);
    EXPECT_LT(sub_fringe_amplitude(r.q1.density, r.q1.grid, 0.5 * kf), 0.01);
    EXPECT_GT(sub_fringe_amplitude(r.q.density, r.q.grid, 0.5 * kf), 0.01);
}

TEST(Quantum, SingleSlitSumMissesCrossTerm) {
    const auto& r = runs();
    const double w = r.q1.transmitted + r.q2.transmitted;
    double s = 0.0;
    for (std::size_t i = 0; i < r.q.density.size(); ++i) {
        const double sum = (r.q1.transmitted * r.q1.density[i] + r.q2.transmitted * r.q2.density[i]) / w;
        s += std::pow(r.q.density[i] - sum, 2) * r.q.grid.dx();
    }
    EXPECT_GT(std::sqrt(s), 0.01);
}

TEST(Kvn, ProperDensity) {
    const auto& r = runs().kvn;
    for (double v : r.density) {
        EXPECT_GE(v, 0.0);
    }
    EXPECT_NEAR(integral(r), 1.0, 1e-10);
}

TEST(Kvn, AdditivityOfSingleSlits) {
    const auto& r = runs();
    EXPECT_NEAR(r.kvn1.transmitted + r.kvn2.transmitted, r.kvn.transmitted, 1e-10);
    const double w = r.kvn1.transmitted + r.kvn2.transmitted;
    double sup = 0.0;
    for (std::size_t i = 0; i < r.kvn.density.size(); ++i) {
        const double sum = (r.kvn1.transmitted * r.kvn1.density[i] + r.kvn2.transmitted * r.kvn2.density[i]) / w;
        sup = std::max(sup, std::abs(r.kvn.density[i] - sum));
    }
    EXPECT_LT(sup, 1e-10);
}

TEST(Kvn, SingleSlitsAreMirrorImages) {
    const auto& r = runs();
    const std::size_t n = r.kvn1.density.size();
    for (std::size_t i = 1; i < n; ++i) {
        EXPECT_NEAR(r.kvn1.density[i], r.kvn2.density[mirror(i, n)], 1e-10);
    }
}

TEST(Kvn, PhaseIndependence) {
    const auto& r = runs();
    const auto phased = run_kvn(r.cfg, Slits::both, [](double x, double p) { return std::sin(x) * std::cos(p); });
    EXPECT_LT(oracle::sup_difference(phased.density, r.kvn.density), 1e-10);
}

TEST(Fringes, SyntheticPattern) {
    RealField f(400);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double x = (static_cast<double>(i) - 200.0) / 20.0;
        f[i] = std::exp(-x * x / 8.0) * (1.0 + 0.8 * std::cos(3.0 * x));
    }
    const auto fr = analyze_fringes(f);
    EXPECT_GE(fr.maxima, 5u);
    EXPECT_NEAR(fr.contrast, 0.8, 0.05);
    EXPECT_THROW(sub_fringe_amplitude(f, Grid1D(256, 0.0, 1.0), 1.0), GridMismatch);
}
