// One line per acceptance criterion. Exits nonzero if any criterion fails.

#include "kvnlab/kvnlab.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

using namespace kvnlab;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    if (!pass) {
        ++failures;
    }
}

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename F>
void guarded(int id, F&& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(id, false, std::string("exception: ") + e.what());
    }
}

void criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rows = measurement::sweep(0.0, pi / 2.0, 65);
    double worst = 0.0;
    for (const auto& r : rows) {
        worst = std::max(worst, std::abs(r.p_unmeasured_sim - oracle::p_a_pure(r.omega_tau)));
        worst = std::max(worst, std::abs(r.p_nonselective_sim - oracle::p_a_dephased(r.omega_tau)));
    }
    const double gap = std::abs(measurement::p_a_nonselective_simulated(pi / 4.0) -
                                measurement::p_a_unmeasured_simulated(pi / 4.0));
    const double secs = seconds_since(t0);
    report(1, rows.size() == 65 && worst < 1e-12 && gap >= 0.43 && secs < 1.0,
           fmt("65-point sweep max deviation %.3e (< 1e-12), gap at pi/4 %.4f (>= 0.43), %.3f s (< 1 s)", worst, gap,
               secs));
}

void criterion2() {
    const auto t0 = std::chrono::steady_clock::now();
    const doubleslit::SlitConfig cfg;
    const auto both = doubleslit::run_kvn(cfg);
    const auto one = doubleslit::run_single_slit(cfg, 1, doubleslit::Model::kvn);
    const auto two = doubleslit::run_single_slit(cfg, 2, doubleslit::Model::kvn);
    const double w = one.transmitted + two.transmitted;
    double sup = 0.0;
    for (std::size_t i = 0; i < both.density.size(); ++i) {
        const double sum = (one.transmitted * one.density[i] + two.transmitted * two.density[i]) / w;
        sup = std::max(sup, std::abs(both.density[i] - sum));
    }
    const auto phased = doubleslit::run_kvn(cfg, doubleslit::Slits::both,
                                            [](double x, double p) { return 0.3 * x * x - 0.7 * x * p + 2.0 * p * p; });
    const double phase_sup = oracle::sup_difference(both.density, phased.density);
    const auto quantum = doubleslit::run_quantum(cfg);
    const auto fr = doubleslit::analyze_fringes(quantum.density);
    const double secs = seconds_since(t0);
    report(2, sup < 1e-10 && phase_sup < 1e-10 && fr.maxima >= 3 && fr.contrast > 0.2 && secs < 30.0,
           fmt("KvN vs single-slit sum %.3e, phase invariance %.3e (< 1e-10); quantum maxima %.0f (>= 3), "
               "contrast %.3f (> 0.2)",
               sup, phase_sup, static_cast<double>(fr.maxima), fr.contrast) +
               fmt(", %.2f s (< 30 s)", secs));
}

void criterion3() {
    std::mt19937 rng(20240611);
    const Grid1D g(256, -10.0, 10.0);
    const PhaseGrid pg(Grid1D(64, -6.0, 6.0), Grid1D(64, -6.0, 6.0));
    const double hbar = 1.0;
    const auto q1 = position_op(g);
    const auto p1 = momentum_op(g, Flavor::quantum, hbar);
    const auto q = position_op(pg);
    const auto p = momentum_op(pg, Flavor::kvn);
    const auto th = theta_op(pg);
    const auto la = lambda_op(pg);
    double quantum_err = 0.0, kvn_qp = 0.0, conj_err = 0.0, zero_err = 0.0;
    for (int s = 0; s < 100; ++s) {
        const auto psi = oracle::random_state(g, rng);
        auto c = commutator_apply(q1, p1, psi.amplitudes);
        for (std::size_t i = 0; i < c.size(); ++i) {
            c[i] -= cplx(0.0, hbar) * psi.amplitudes[i];
        }
        quantum_err = std::max(quantum_err, oracle::l2_norm(c, g.dx()));

        const auto phi = oracle::random_state(pg, rng);
        const double dv = pg.cell_area();
        kvn_qp = std::max(kvn_qp, oracle::l2_norm(commutator_apply(q, p, phi.amplitudes), dv));
        for (const auto* pair : {&q, &p}) {
            const auto& other = pair == &q ? th : la;
            auto r = commutator_apply(*pair, other, phi.amplitudes);
            for (std::size_t i = 0; i < r.size(); ++i) {
                r[i] -= cplx(0.0, 1.0) * phi.amplitudes[i];
            }
            conj_err = std::max(conj_err, oracle::l2_norm(r, dv));
        }
        const GridOperator* zeros[][2] = {{&q, &la}, {&p, &th}, {&th, &la}, {&q, &q}, {&th, &th}};
        for (const auto& z : zeros) {
            zero_err = std::max(zero_err, oracle::l2_norm(commutator_apply(*z[0], *z[1], phi.amplitudes), dv));
        }
    }
    report(3, quantum_err < 1e-8 && kvn_qp == 0.0 && conj_err < 1e-8 && zero_err < 1e-10,
           fmt("100 states: [q,p]-i hbar %.3e (< 1e-8), KvN [q,p] %.1e (exact), [q,theta],[p,lambda]-i %.3e (< 1e-8), "
               "other entries %.3e (< 1e-10)",
               quantum_err, kvn_qp, conj_err, zero_err));
}

void criterion4() {
    const double hbar = 1.0;
    const Grid1D g(256, -10.0, 10.0);
    const auto psi = gaussian_packet(g, 0.5, -0.3, 0.7, hbar);
    const double qp = std_dev(position_op(g), psi) * std_dev(momentum_op(g, Flavor::quantum, hbar), psi);

    const PhaseGrid pg(Grid1D(128, -4.0, 4.0), Grid1D(128, -4.0, 4.0));
    const auto phi = kvn_gaussian(pg, 0.0, 0.0, 0.2, 0.2);
    const double sq = std_dev(position_op(pg), phi);
    const double sp = std_dev(momentum_op(pg, Flavor::kvn), phi);
    const double sth = std_dev(theta_op(pg), phi);
    const double sla = std_dev(lambda_op(pg), phi);
    report(4,
           std::abs(qp - hbar / 2.0) < 1e-6 && sq * sp <= hbar / 20.0 && sq * sth >= 0.5 - 1e-6 &&
               sp * sla >= 0.5 - 1e-6,
           fmt("quantum |sq sp - hbar/2| %.3e (< 1e-6); KvN sq sp %.4f (<= 0.05), sq stheta %.9f, sp slambda %.9f "
               "(>= 0.5 - 1e-6)",
               std::abs(qp - hbar / 2.0), sq * sp, sq * sth, sp * sla));
}

struct Residual {
    double r1 = 0.0;
    double r2 = 0.0;
};

constexpr double roundoff_floor = 1e-9;

Residual relative(const EhrenfestResiduals& r) {
    return {r.q_scale > 0.0 ? r.r1_max / r.q_scale : r.r1_max, r.p_scale > 0.0 ? r.r2_max / r.p_scale : r.r2_max};
}

template <typename State>
Residual ehrenfest_run(const State& psi, const Generator& g, double dt) {
    const auto n = static_cast<std::size_t>(std::llround(1.0 / dt));
    return relative(ehrenfest_residuals(evolve(psi, g, 1.0, n).series, g.mass()));
}

void criterion5() {
    const Grid1D gq(256, -10.0, 10.0);
    const PhaseGrid pg(Grid1D(128, -6.0, 6.0), Grid1D(128, -8.0, 8.0));
    const Potential pots[] = {Potential::harmonic(1.0), Potential::quartic(0.25)};
    const auto qpsi = gaussian_packet(gq, 1.0, 0.5, 0.5);
    const auto kpsi = kvn_gaussian(pg, 1.0, 0.5, 0.4, 0.4);

    double worst = 0.0;
    double ratio_lo = 1e300, ratio_hi = 0.0;
    double floor_max = 0.0;
    bool ok = true;
    std::string detail;
    auto record = [&](const std::string& label, const Residual& a, const Residual& b) {
        worst = std::max({worst, a.r1, a.r2});
        for (const auto& [x, y] : {std::pair{a.r1, b.r1}, std::pair{a.r2, b.r2}}) {
            // A Strang step advances <q> by dt <p>/m at the half step, so the centered difference of
            // <q> reproduces <p>/m exactly and r1 sits at round-off; no scaling law is visible there.
            if (x < roundoff_floor && y < roundoff_floor) {
                floor_max = std::max({floor_max, x, y});
                continue;
            }
            const double ratio = x / y;
            ratio_lo = std::min(ratio_lo, ratio);
            ratio_hi = std::max(ratio_hi, ratio);
            if (!(ratio > 3.5 && ratio < 4.5)) {
                ok = false;
                detail += " " + label + fmt(" ratio %.3f (%.2e -> %.2e)", ratio, x, y);
            }
        }
        if (!(a.r1 < 1e-3 && a.r2 < 1e-3)) {
            ok = false;
            detail += " " + label + fmt(" r1 %.2e r2 %.2e", a.r1, a.r2);
        }
    };
    for (const auto& v : pots) {
        const auto h = hamiltonian(gq, v);
        record("quantum/" + v.name, ehrenfest_run(qpsi, h, 1e-3), ehrenfest_run(qpsi, h, 5e-4));
        const auto l = liouvillian(pg, v);
        record("kvn/" + v.name, ehrenfest_run(kpsi, l, 1e-3), ehrenfest_run(kpsi, l, 5e-4));
        for (double kappa : {0.0, 0.5, 1.0}) {
            const auto u = unified_generator(pg, v, kappa);
            record("unified" + fmt("%.1f/", kappa) + v.name, ehrenfest_run(kpsi, u, 1e-3),
                   ehrenfest_run(kpsi, u, 5e-4));
        }
    }
    report(5, ok,
           fmt("10 runs: max relative residual %.3e (< 1e-3); dt-halving ratio in [%.3f, %.3f] (expected 4); "
               "residuals at round-off %.1e",
               worst, ratio_lo, ratio_hi, floor_max) +
               detail);
}

void criterion6() {
    const Grid1D g(512, -20.0, 20.0);
    const auto psi = gaussian_packet(g, -2.0, 1.0, 1.0);
    const auto a = propagate_by_kernel(propagate_by_kernel(psi, 0.5, 1.0), 0.7, 1.0);
    const auto b = propagate_by_kernel(psi, 1.2, 1.0);
    const double group = oracle::l2_distance(a.amplitudes, b.amplitudes, g.dx());
    const auto split = evolve(psi, hamiltonian(g, Potential::free()), 1.2, 16).final_state;
    const double vs_split = oracle::l2_distance(b.amplitudes, split.amplitudes, g.dx());

    const PhaseGrid pg(Grid1D(128, -8.0, 8.0), Grid1D(64, -4.0, 4.0));
    const auto k0 = kvn_gaussian(pg, 0.0, 0.5, 0.5, 0.5);
    const auto shear = free_kvn_propagate(k0, 1.0, 1.0);
    const auto stepped = kvn_step(k0, liouvillian(pg, Potential::free()), 1.0);
    const double vs_kvn = oracle::l2_distance(shear.amplitudes, stepped.amplitudes, pg.cell_area());
    report(6, group < 1e-6 && vs_split < 1e-6 && vs_kvn < 1e-10,
           fmt("group law %.3e (< 1e-6), kernel vs split %.3e (< 1e-6), shear vs kvn_step %.3e (< 1e-10)", group,
               vs_split, vs_kvn));
}

void criterion7() {
    const Grid1D g(128, -8.0, 8.0);
    const PhaseGrid wg = wigner_grid(g);

    const auto gauss = gaussian_packet(g, 1.0, 0.5, 0.7);
    const auto wgauss = wigner_transform(gauss, wg);
    const double min_gauss = *std::min_element(wgauss.begin(), wgauss.end());

    const auto fock = harmonic_eigenstate(g, 1);
    const auto wf = wigner_transform(fock, wg);
    // The wigner grid contains q = 0 and p = 0 as nodes.
    const std::size_t iq = g.n() / 2, ip = g.n() / 2;
    const double origin = wf[wg.index(iq, ip)];

    double marg = 0.0;
    for (const auto* st : {&gauss, &fock}) {
        const auto w = wigner_transform(*st, wg);
        const auto rho_q = born_density(*st);
        const auto rho_p = momentum_density(*st);
        for (std::size_t i = 0; i < g.n(); ++i) {
            double sq = 0.0, sp = 0.0;
            for (std::size_t j = 0; j < g.n(); ++j) {
                sq += w[wg.index(i, j)] * wg.p.dx();
                sp += w[wg.index(j, i)] * wg.q.dx();
            }
            marg = std::max({marg, std::abs(sq - rho_q[i]), std::abs(sp - rho_p[i])});
        }
    }
    double shape = 0.0;
    for (std::size_t i = 0; i < g.n(); ++i) {
        for (std::size_t j = 0; j < g.n(); ++j) {
            shape = std::max(shape, std::abs(wf[wg.index(i, j)] - oracle::fock1_wigner(wg.q.point(i), wg.p.point(j))));
        }
    }
    report(7, marg < 1e-6 && min_gauss >= -1e-10 && std::abs(origin + 1.0 / pi) < 1e-4,
           fmt("marginal error %.3e (< 1e-6), Gaussian min W %.3e (>= -1e-10), |W(0,0) + 1/pi| %.3e (< 1e-4), "
               "Fock shape error %.2e",
               marg, min_gauss, std::abs(origin + 1.0 / pi), shape));
}

void criterion8() {
    using namespace oscillator;
    double fixed = 0.0;
    for (const auto& [k0, c] : {std::pair{1.0, 1.0}, std::pair{4.0, 1.0}, std::pair{0.25, 2.0}}) {
        const double rho0 = std::pow(c / k0, 0.25);
        const auto traj = integrate_ermakov([k0 = k0](double) { return k0; }, {rho0, 0.0, c, 0.0}, 20.0, 1e-3);
        for (const auto& s : traj) {
            fixed = std::max({fixed, std::abs(s.rho - rho0), std::abs(s.rho_dot)});
        }
    }

    const Stiffness k = [](double t) { return 1.0 + 0.1 * std::sin(t); };
    const auto coupled = integrate_coupled(k, {1.0, 0.0, 1.0, 0.0}, 1.0, 0.0, 1.0, 20.0, 1e-3);
    double drift = 0.0;
    const double i0 = coupled.front().invariant;
    for (const auto& s : coupled) {
        drift = std::max(drift, std::abs(lewis_invariant_classical(s.q, s.p, s.rho, s.rho_dot) - i0) / i0);
    }

    const PhaseGrid pg(Grid1D(64, -4.0, 4.0), Grid1D(64, -4.0, 4.0));
    const auto blob = kvn_tdho_evolve(kvn_gaussian(pg, 1.0, 0.0, 0.25, 0.25), k, 1.0, 10.0, 2000);
    const std::size_t refine = 10;
    const auto ref = oracle::tdho_rk4(k, 1.0, 0.0, 1.0, 10.0, 2000 * refine);
    double centroid = 0.0;
    for (std::size_t i = 0; i < blob.samples.size(); ++i) {
        const auto& r = ref[i * refine];
        centroid = std::max({centroid, std::abs(blob.samples[i].q - r.q), std::abs(blob.samples[i].p - r.p)});
    }
    report(8, fixed < 1e-10 && drift < 1e-6 && centroid < 1e-4,
           fmt("fixed points %.3e (< 1e-10), invariant drift %.3e (< 1e-6), KvN centroid %.3e (< 1e-4)", fixed, drift,
               centroid));
}

void criterion9() {
    using namespace gauge;
    SolenoidConfig cfg;
    const auto base = kvn_radial_coeffs(cfg, 0.0);
    bool identical = true;
    double emin = 1e300, emax = 0.0;
    for (int i = 0; i <= 5; ++i) {
        cfg.alpha = 0.1 * i;
        const auto rec = kvn_radial_coeffs(cfg, 0.0);
        identical = identical && rec == base && record_hash(rec) == record_hash(base);
        const double e = disc_ground_energy(cfg);
        emin = std::min(emin, e);
        emax = std::max(emax, e);
    }
    const double variation = (emax - emin) / emin;
    double period = 0.0;
    for (int n = -2; n <= 2; ++n) {
        for (double a : {0.0, 0.25, 0.5, 0.8}) {
            SolenoidConfig x;
            x.n = n;
            x.alpha = a;
            SolenoidConfig y = x;
            y.n = n + 1;
            y.alpha = a + 1.0;
            period = std::max(period, std::abs(disc_ground_energy(x) - disc_ground_energy(y)));
            const auto cx = quantum_radial_coeffs(x, 3.0);
            const auto cy = quantum_radial_coeffs(y, 3.0);
            period = std::max({period, std::abs(cx.inverse_r2 - cy.inverse_r2), std::abs(cx.nu - cy.nu)});
        }
    }
    report(9, identical && variation > 0.01 && period < 1e-10,
           std::string(identical ? "KvN records bit-identical" : "KvN records differ") +
               fmt(" over alpha 0..0.5; ground energy variation %.2f%% (> 1%%); periodicity %.3e (< 1e-10)",
                   100.0 * variation, period));
}

const PhaseGrid& kvn_box() {
    static const PhaseGrid pg(Grid1D(128, -6.0, 6.0), Grid1D(128, -8.0, 8.0));
    return pg;
}

double phase_g(double q, double p) {
    return 0.8 * q * p - 0.5 * q * q + 0.3 * p;
}

void criterion10() {
    const auto quartic = Potential::quartic(0.25);
    auto kpsi = kvn_gaussian(kvn_box(), 1.0, 0.5, 0.4, 0.4, phase_g);
    const auto k = measurement::kvn_nondisturbance(kpsi, 0.5, 1.0, quartic);
    const Grid1D g(256, -10.0, 10.0);
    const auto q = measurement::quantum_disturbance(gaussian_packet(g, 1.0, 1.5, 0.5), 0.5, 1.0, quartic);
    report(10, k.later_difference < 1e-8 && q.later_difference > 1e-2,
           fmt("KvN later density change %.3e (< 1e-8), quantum %.3e (> 1e-2)", k.later_difference,
               q.later_difference));
}

template <typename State>
double density_gap(const State& a, const State& b, const Generator& g, double t, std::size_t n) {
    const auto ea = evolve(a, g, t, n).final_state;
    const auto eb = evolve(b, g, t, n).final_state;
    return oracle::sup_difference(born_density(ea), born_density(eb));
}

void criterion11() {
    const auto quartic = Potential::quartic(0.25);
    const auto& pg = kvn_box();
    const auto bare = kvn_gaussian(pg, 1.0, 0.5, 0.4, 0.4);
    const auto phased = kvn_gaussian(pg, 1.0, 0.5, 0.4, 0.4, phase_g);
    const double kvn_gap = density_gap(bare, phased, liouvillian(pg, quartic), 1.0, 1000);

    const Grid1D g(256, -10.0, 10.0);
    const auto r = gaussian_packet(g, 1.0, 0.0, 0.5);
    auto a = r.amplitudes;
    for (std::size_t i = 0; i < g.n(); ++i) {
        const double x = g.point(i);
        a[i] *= std::exp(cplx(0.0, 1.5 * x - 0.5 * x * x));
    }
    const QWavefunction rp(g, a);
    const double q_gap = density_gap(r, rp, hamiltonian(g, quartic), 1.0, 1000);
    report(11, kvn_gap < 1e-8 && q_gap > 1e-3,
           fmt("KvN |psi| evolution phase dependence %.3e (< 1e-8), quantum %.3e (> 1e-3)", kvn_gap, q_gap));
}

}  // namespace

int main() {
    guarded(1, criterion1);
    guarded(2, criterion2);
    guarded(3, criterion3);
    guarded(4, criterion4);
    guarded(5, criterion5);
    guarded(6, criterion6);
    guarded(7, criterion7);
    guarded(8, criterion8);
    guarded(9, criterion9);
    guarded(10, criterion10);
    guarded(11, criterion11);
    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
