#include "kvnlab/analysis.hpp"
#include "kvnlab/error.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace kvnlab;

TEST(StdDev, GaussianMoments) {
    const Grid1D g(256, -12.0, 12.0);
    const double sigma = 0.8, hbar = 0.6;
    const auto psi = gaussian_packet(g, 0.4, 1.0, sigma, hbar);
    EXPECT_NEAR(std_dev(position_op(g), psi), sigma, 1e-8);
    EXPECT_NEAR(std_dev(momentum_op(g, Flavor::quantum, hbar), psi), hbar / (2.0 * sigma), 1e-6);
}

TEST(StdDev, EigenstateHasZeroSpread) {
    const Grid1D g(128, -5.0, 5.0);
    // The variance cancels to round-off, so the spread is its square root.
    EXPECT_NEAR(std_dev(momentum_op(g, Flavor::quantum), plane_wave(g, 3)), 0.0, 1e-6);
    const auto h = hamiltonian(Grid1D(256, -12.0, 12.0), Potential::harmonic(1.0)).as_operator();
    EXPECT_NEAR(std_dev(h, harmonic_eigenstate(Grid1D(256, -12.0, 12.0), 2)), 0.0, 1e-6);
}

TEST(Robertson, QuantumGaussianSaturates) {
    const Grid1D g(256, -10.0, 10.0);
    const double hbar = 1.0;
    const auto r = robertson_check(position_op(g), momentum_op(g, Flavor::quantum, hbar), gaussian_packet(g, 0, 0, 0.7));
    EXPECT_NEAR(r.lhs, hbar / 2.0, 1e-6);
    EXPECT_NEAR(r.rhs, hbar / 2.0, 1e-6);
    EXPECT_TRUE(r.satisfied);
}

TEST(Robertson, KvnPairs) {
    const PhaseGrid pg(Grid1D(128, -2.0, 2.0), Grid1D(128, -2.0, 2.0));
    const auto psi = kvn_gaussian(pg, 0.0, 0.0, 0.1, 0.1);
    const auto qp = robertson_check(position_op(pg), momentum_op(pg, Flavor::kvn), psi);
    EXPECT_EQ(qp.rhs, 0.0);
    EXPECT_LT(qp.lhs, 1.0 / 20.0);
    const auto qt = robertson_check(position_op(pg), theta_op(pg), psi);
    EXPECT_NEAR(qt.rhs, 0.5, 1e-8);
    EXPECT_GE(qt.lhs, 0.5 - 1e-6);
    const auto pl = robertson_check(momentum_op(pg, Flavor::kvn), lambda_op(pg), psi);
    EXPECT_NEAR(pl.rhs, 0.5, 1e-8);
    EXPECT_GE(pl.lhs, 0.5 - 1e-6);
}

TEST(Robertson, HoldsOnRandomStates) {
    std::mt19937 rng(31);
    const Grid1D g(128, -10.0, 10.0);
    const PhaseGrid pg(Grid1D(32, -6.0, 6.0), Grid1D(32, -6.0, 6.0));
    const auto q1 = position_op(g);
    const auto p1 = momentum_op(g, Flavor::quantum);
    const auto h1 = hamiltonian(g, Potential::quartic(1.0)).as_operator();
    const std::vector<std::pair<GridOperator, GridOperator>> kvn_pairs{
        {position_op(pg), theta_op(pg)},
        {momentum_op(pg, Flavor::kvn), lambda_op(pg)},
        {position_op(pg), momentum_op(pg, Flavor::kvn)},
        {theta_op(pg), lambda_op(pg)}};
    for (int s = 0; s < 100; ++s) {
        const auto psi = oracle::random_state(g, rng);
        EXPECT_TRUE(robertson_check(q1, p1, psi).satisfied);
        EXPECT_TRUE(robertson_check(q1, h1, psi).satisfied);
        const auto phi = oracle::random_state(pg, rng);
        for (const auto& [a, b] : kvn_pairs) {
            EXPECT_TRUE(robertson_check(a, b, phi).satisfied);
        }
    }
}

TEST(TimeDerivative, QuadraticIsExact) {
    std::vector<double> y(10);
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double t = 0.1 * i;
        y[i] = 3.0 * t * t - t + 2.0;
    }
    const auto d = time_derivative(y, 0.1);
    for (std::size_t i = 0; i < y.size(); ++i) {
        EXPECT_NEAR(d[i], 6.0 * 0.1 * i - 1.0, 1e-12);
    }
    EXPECT_THROW(time_derivative({1.0, 2.0}, 0.1), InvalidArgument);
}

TEST(Ehrenfest, Validation) {
    std::vector<Observables> few(4);
    EXPECT_THROW(ehrenfest_residuals(few, 1.0), InvalidArgument);
    std::vector<Observables> uneven(6);
    for (std::size_t i = 0; i < 6; ++i) {
        uneven[i].t = i * i * 0.1;
    }
    EXPECT_THROW(ehrenfest_residuals(uneven, 1.0), InvalidArgument);
}

TEST(Ehrenfest, FreeParticleIsExact) {
    const Grid1D g(512, -30.0, 30.0);
    const auto q = evolve(gaussian_packet(g, 0.0, 1.0, 1.0), hamiltonian(g, Potential::free()), 1.0, 1000);
    const auto rq = ehrenfest_residuals(q.series, 1.0);
    EXPECT_LT(rq.r1_max, 1e-8);
    EXPECT_LT(rq.r2_max, 1e-8);
    const PhaseGrid pg(Grid1D(128, -6.0, 6.0), Grid1D(64, -4.0, 4.0));
    const auto k = evolve(kvn_gaussian(pg, -1.0, 1.0, 0.4, 0.4), liouvillian(pg, Potential::free()), 1.0, 1000);
    const auto rk = ehrenfest_residuals(k.series, 1.0);
    EXPECT_LT(rk.r1_max, 1e-8);
    EXPECT_LT(rk.r2_max, 1e-8);
}

TEST(Ehrenfest, HarmonicQuantum) {
    const Grid1D g(256, -10.0, 10.0);
    const auto evo = evolve(gaussian_packet(g, 1.0, 0.5, 0.5), hamiltonian(g, Potential::harmonic(1.0)), 1.0, 1000);
    const auto r = ehrenfest_residuals(evo.series, 1.0);
    EXPECT_LT(r.r1_max, 1e-4);
    EXPECT_LT(r.r2_max, 1e-4);
}

TEST(Ehrenfest, QuarticBothFlavorsWithSecondOrderConvergence) {
    const auto quartic = Potential::quartic(1.0);
    const Grid1D g(256, -10.0, 10.0);
    const PhaseGrid pg(Grid1D(128, -6.0, 6.0), Grid1D(128, -8.0, 8.0));
    const auto qpsi = gaussian_packet(g, 1.0, 0.0, 0.5);
    const auto kpsi = kvn_gaussian(pg, 1.0, 0.0, 0.4, 0.4);
    auto quantum = [&](std::size_t n) {
        return ehrenfest_residuals(evolve(qpsi, hamiltonian(g, quartic), 1.0, n).series, 1.0);
    };
    auto kvn = [&](std::size_t n) {
        return ehrenfest_residuals(evolve(kpsi, liouvillian(pg, quartic), 1.0, n).series, 1.0);
    };
    for (const auto& run : {std::function<EhrenfestResiduals(std::size_t)>(quantum),
                            std::function<EhrenfestResiduals(std::size_t)>(kvn)}) {
        const auto a = run(1000);
        const auto b = run(2000);
        EXPECT_LT(a.r1_max, 1e-3 * a.q_scale);
        EXPECT_LT(a.r2_max, 1e-3 * a.p_scale);
        const double ratio = a.r2_max / b.r2_max;
        EXPECT_GE(ratio, 3.5);
        EXPECT_LE(ratio, 4.5);
    }
}

TEST(Wigner, GridAndValidation) {
    const Grid1D g(64, -8.0, 8.0);
    const auto wg = wigner_grid(g, 2.0);
    EXPECT_NEAR(wg.p.x_max(), pi * 2.0 / g.dx(), 1e-12);
    EXPECT_EQ(wg.p.n(), 64u);
    const auto psi = gaussian_packet(g, 0, 0, 1);
    EXPECT_THROW(wigner_transform(psi, wigner_grid(g, 1.0), 2.0), GridMismatch);
    EXPECT_THROW(wigner_transform(psi, PhaseGrid(Grid1D(32, -8.0, 8.0), wg.p)), GridMismatch);
    EXPECT_THROW(wigner_grid(g, 0.0), InvalidArgument);
}

TEST(Wigner, GaussianMatchesAnalytic) {
    const Grid1D g(128, -8.0, 8.0);
    const auto wg = wigner_grid(g);
    const auto w = wigner_transform(gaussian_packet(g, 1.0, 0.5, 0.7), wg);
    double worst = 0.0, total = 0.0, low = 0.0;
    for (std::size_t i = 0; i < g.n(); ++i) {
        for (std::size_t j = 0; j < g.n(); ++j) {
            const double v = w[wg.index(i, j)];
            worst = std::max(worst, std::abs(v - oracle::gaussian_wigner(wg.q.point(i), wg.p.point(j), 1.0, 0.5, 0.7)));
            total += v * wg.cell_area();
            low = std::min(low, v);
        }
    }
    EXPECT_LT(worst, 1e-10);
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_GE(low, -1e-10);
}

TEST(Wigner, FockStateIsNegativeAtOrigin) {
    const Grid1D g(128, -8.0, 8.0);
    const auto wg = wigner_grid(g);
    const auto w = wigner_transform(harmonic_eigenstate(g, 1), wg);
    EXPECT_NEAR(w[wg.index(64, 64)], -1.0 / pi, 1e-4);
    EXPECT_LT(*std::min_element(w.begin(), w.end()), -0.25);
    // Direct trapezoid of the defining integral at the origin.
    auto psi1 = [](double x) { return std::sqrt(2.0) * x * std::exp(-x * x / 2.0) / std::pow(pi, 0.25); };
    double direct = 0.0;
    const double h = 1e-3;
    for (double y = -20.0; y <= 20.0; y += h) {
        direct += psi1(y / 2.0) * psi1(-y / 2.0) * h;
    }
    direct /= 2.0 * pi;
    EXPECT_NEAR(w[wg.index(64, 64)], direct, 1e-4);
}

TEST(Wigner, MarginalsOnRandomState) {
    std::mt19937 rng(17);
    const Grid1D g(128, -10.0, 10.0);
    const auto wg = wigner_grid(g);
    const auto psi = oracle::random_state(g, rng);
    const auto w = wigner_transform(psi, wg);
    const auto rq = born_density(psi);
    const auto rp = momentum_density(psi);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.n(); ++i) {
        double sq = 0.0, sp = 0.0;
        for (std::size_t j = 0; j < g.n(); ++j) {
            sq += w[wg.index(i, j)] * wg.p.dx();
            sp += w[wg.index(j, i)] * wg.q.dx();
        }
        worst = std::max({worst, std::abs(sq - rq[i]), std::abs(sp - rp[i])});
    }
    EXPECT_LT(worst, 1e-6);
}

TEST(MomentumDensity, GaussianIsNormal) {
    const Grid1D g(256, -20.0, 20.0);
    const double sigma = 1.2;
    const auto rp = momentum_density(gaussian_packet(g, 0.0, 0.5, sigma));
    const auto wg = wigner_grid(g);
    const double sp = 1.0 / (2.0 * sigma);
    for (std::size_t j = 0; j < g.n(); ++j) {
        const double p = wg.p.point(j);
        EXPECT_NEAR(rp[j], std::exp(-(p - 0.5) * (p - 0.5) / (2 * sp * sp)) / (sp * std::sqrt(2 * pi)), 1e-10);
    }
}
