#include "kvnlab/error.hpp"
#include "kvnlab/operators.hpp"
#include "kvnlab/states.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace kvnlab;

namespace {

Eigen::VectorXcd vec(cplx a, cplx b) {
    Eigen::VectorXcd v(2);
    v << a, b;
    return v;
}

const Eigen::VectorXcd a_vec = vec(std::sqrt(0.5), std::sqrt(0.5));
const Eigen::VectorXcd b_vec = vec(std::sqrt(0.5), -std::sqrt(0.5));

}  // namespace

TEST(States, AmplitudeCountMustMatch) {
    const Grid1D g(16, 0.0, 1.0);
    EXPECT_THROW(QWavefunction(g, ComplexField(15)), GridMismatch);
    const PhaseGrid pg(g, g);
    EXPECT_THROW(KvNWavefunction(pg, ComplexField(16)), GridMismatch);
}

TEST(States, InnerProductBasics) {
    const Grid1D g(64, -5.0, 5.0);
    const auto psi = gaussian_packet(g, 0.3, 1.0, 0.8);
    EXPECT_NEAR(inner_product(psi, psi).real(), 1.0, 1e-14);
    const auto w1 = plane_wave(g, 2);
    const auto w2 = plane_wave(g, -3);
    EXPECT_LT(std::abs(inner_product(w1, w2)), 1e-12);
    const auto phi = gaussian_packet(g, -1.0, 0.2, 0.6);
    const cplx ab = inner_product(phi, psi);
    const cplx ba = inner_product(psi, phi);
    EXPECT_EQ(ab, std::conj(ba));
    EXPECT_THROW(inner_product(psi, gaussian_packet(Grid1D(32, -5.0, 5.0), 0, 0, 1)), GridMismatch);
}

TEST(States, OffsetGaussianOverlapMatchesTrapezoid) {
    const Grid1D g(256, -12.0, 12.0);
    const auto a = gaussian_packet(g, -0.7, 0.0, 1.0);
    const auto b = gaussian_packet(g, 0.9, 0.0, 1.3);
    // Fine trapezoid on the analytic integrand, with the same normalization.
    auto amp = [](double x, double c, double s) {
        return std::exp(-(x - c) * (x - c) / (4 * s * s)) / std::pow(2 * pi * s * s, 0.25);
    };
    double ref = 0.0;
    const int n = 200000;
    const double h = 24.0 / n;
    for (int i = 0; i <= n; ++i) {
        const double x = -12.0 + h * i;
        ref += (i == 0 || i == n ? 0.5 : 1.0) * amp(x, -0.7, 1.0) * amp(x, 0.9, 1.3);
    }
    ref *= h;
    EXPECT_NEAR(inner_product(a, b).real(), ref, 1e-8);
}

TEST(States, BornDensity) {
    const Grid1D g(128, -4.0, 4.0);
    for (double v : born_density(plane_wave(g, 5))) {
        EXPECT_NEAR(v, 1.0 / g.length(), 1e-14);
    }
    const double sigma = 0.6;
    const auto rho = born_density(gaussian_packet(g, 0.0, 0.0, sigma));
    EXPECT_NEAR(rho[64], 1.0 / (sigma * std::sqrt(2.0 * pi)), 1e-8);
    std::mt19937 rng(1);
    for (double v : born_density(oracle::random_state(g, rng))) {
        EXPECT_GE(v, 0.0);
    }
}

TEST(States, NormalizeIsIdempotent) {
    const Grid1D g(64, -6.0, 6.0);
    std::mt19937 rng(2);
    const auto a = oracle::random_state(g, rng);
    const auto b = normalize(a);
    EXPECT_LT(oracle::sup_difference(a.amplitudes, b.amplitudes), 1e-14);
    EXPECT_THROW(normalize(QWavefunction(g, ComplexField(64))), NumericalError);
}

TEST(States, KvnGaussianMoments) {
    const PhaseGrid pg(Grid1D(64, -4.0, 4.0), Grid1D(64, -4.0, 4.0));
    const auto psi = kvn_gaussian(pg, 0.5, -0.25, 0.3, 0.4);
    EXPECT_NEAR(norm_squared(psi), 1.0, 1e-12);
    const auto mq = position_marginal(psi);
    const auto mp = momentum_marginal(psi);
    double q1 = 0.0, p1 = 0.0, q2 = 0.0;
    for (std::size_t i = 0; i < 64; ++i) {
        q1 += pg.q.point(i) * mq[i] * pg.q.dx();
        p1 += pg.p.point(i) * mp[i] * pg.p.dx();
        q2 += std::pow(pg.q.point(i) - 0.5, 2) * mq[i] * pg.q.dx();
    }
    EXPECT_NEAR(q1, 0.5, 1e-10);
    EXPECT_NEAR(p1, -0.25, 1e-10);
    EXPECT_NEAR(std::sqrt(q2), 0.3, 1e-10);
}

TEST(States, BoundaryMass) {
    const Grid1D g(64, -8.0, 8.0);
    EXPECT_LT(boundary_mass(gaussian_packet(g, 0.0, 0.0, 0.5)), 1e-20);
    EXPECT_GT(boundary_mass(gaussian_packet(g, 7.0, 0.0, 0.5)), 0.1);
}

TEST(States, HarmonicEigenstatesAreOrthonormal) {
    const Grid1D g(128, -10.0, 10.0);
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            const cplx v = inner_product(harmonic_eigenstate(g, i), harmonic_eigenstate(g, j));
            EXPECT_NEAR(std::abs(v), i == j ? 1.0 : 0.0, 1e-12) << i << "," << j;
        }
    }
    EXPECT_THROW(harmonic_eigenstate(g, -1), InvalidArgument);
}

TEST(DensityMatrix, Purity) {
    EXPECT_NEAR(purity(DensityMatrix::pure(a_vec)), 1.0, 1e-15);
    EXPECT_NEAR(purity(DensityMatrix(Eigen::MatrixXcd::Identity(2, 2) * 0.5)), 0.5, 1e-15);
    EXPECT_NEAR(purity(DensityMatrix::mixture({0.5, 0.5}, {a_vec, b_vec})), 0.5, 1e-15);
}

TEST(DensityMatrix, Validation) {
    Eigen::MatrixXcd m(2, 2);
    m << 0.5, 0.1, 0.2, 0.5;
    EXPECT_THROW(DensityMatrix{m}, InvalidArgument);
    EXPECT_THROW(DensityMatrix(Eigen::MatrixXcd::Identity(2, 2)), InvalidArgument);
    Eigen::MatrixXcd neg(2, 2);
    neg << 1.5, 0.0, 0.0, -0.5;
    EXPECT_THROW(DensityMatrix{neg}, InvalidArgument);
    EXPECT_THROW(DensityMatrix(Eigen::MatrixXcd::Identity(65, 65) / 65.0), InvalidArgument);
    EXPECT_THROW(DensityMatrix::mixture({0.5, -0.5}, {a_vec, b_vec}), InvalidArgument);
}

TEST(DensityMatrix, MeasureProbability) {
    EXPECT_NEAR(measure_probability(DensityMatrix::pure(a_vec), a_vec), 1.0, 1e-15);
    EXPECT_NEAR(measure_probability(DensityMatrix::pure(b_vec), a_vec), 0.0, 1e-15);
    EXPECT_THROW(measure_probability(DensityMatrix::pure(a_vec), vec(1.0, 1.0)), InvalidArgument);

    // Mixture at tau with weights from the two projections, checked against <a|rho|a>.
    const double wt = 0.3;
    const Eigen::VectorXcd psi = vec(0.5 * std::exp(cplx(0, -wt)), std::sqrt(0.75) * std::exp(cplx(0, wt)));
    const double pa = std::norm(a_vec.dot(psi));
    const double pb = std::norm(b_vec.dot(psi));
    const auto rho = DensityMatrix::mixture({pa, pb}, {a_vec, b_vec});
    const cplx direct = a_vec.adjoint() * rho.entries() * a_vec;
    EXPECT_NEAR(measure_probability(rho, a_vec), direct.real(), 1e-12);
}

TEST(DensityMatrix, Dephase) {
    const Basis basis{a_vec, b_vec};
    const auto diag = DensityMatrix::mixture({0.3, 0.7}, {a_vec, b_vec});
    EXPECT_LT((dephase(diag, basis).entries() - diag.entries()).norm(), 1e-15);

    const Eigen::VectorXcd sup = (a_vec + b_vec) / std::sqrt(2.0);
    const auto d = dephase(DensityMatrix::pure(sup), basis);
    EXPECT_NEAR(measure_probability(d, a_vec), 0.5, 1e-15);
    EXPECT_NEAR(measure_probability(d, b_vec), 0.5, 1e-15);
    EXPECT_NEAR(purity(d), 0.5, 1e-15);
    EXPECT_NEAR(d.entries().trace().real(), 1.0, 1e-15);
    EXPECT_LT((d.entries() - d.entries().adjoint()).norm(), 1e-15);
    EXPECT_LT((dephase(d, basis).entries() - d.entries()).norm(), 1e-15);

    const Basis bad{a_vec, a_vec};
    EXPECT_THROW(dephase(d, bad), InvalidArgument);
}

TEST(DensityMatrix, CollapseSelectsBasisState) {
    const Basis basis{a_vec, b_vec};
    const Eigen::VectorXcd psi = vec(0.5, std::sqrt(0.75));
    EXPECT_LT((collapse(psi, basis, 1) - b_vec).norm(), 1e-15);
    EXPECT_THROW(collapse(a_vec, basis, 1), InvalidArgument);
    EXPECT_THROW(collapse(psi, basis, 2), InvalidArgument);
}

TEST(DensityMatrix, EvolutionKeepsPurity) {
    Eigen::MatrixXcd u(2, 2);
    u << std::exp(cplx(0, -0.4)), 0, 0, std::exp(cplx(0, 0.4));
    const auto rho = DensityMatrix::mixture({0.2, 0.8}, {a_vec, b_vec}).evolved(u, 1.0);
    EXPECT_NEAR(purity(rho), 0.04 + 0.64, 1e-14);
    EXPECT_DOUBLE_EQ(rho.time(), 1.0);
}
