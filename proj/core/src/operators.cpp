#include "kvnlab/operators.hpp"

#include "kvnlab/error.hpp"

#include <cmath>

namespace kvnlab {

namespace {

void forward(ComplexField& f, const Domain& d, Transform t) {
    if (t == Transform::none) {
        return;
    }
    if (const auto* g = std::get_if<Grid1D>(&d)) {
        if (t != Transform::along_q) {
            throw InvalidArgument("GridOperator: a 1D grid only supports transforms along q");
        }
        (void)g;
        fft(f, FftDirection::forward);
        return;
    }
    const auto& pg = std::get<PhaseGrid>(d);
    if (t == Transform::along_q || t == Transform::both) {
        fft_axis(f, pg.q.n(), pg.p.n(), 0, FftDirection::forward);
    }
    if (t == Transform::along_p || t == Transform::both) {
        fft_axis(f, pg.q.n(), pg.p.n(), 1, FftDirection::forward);
    }
}

void inverse(ComplexField& f, const Domain& d, Transform t) {
    if (t == Transform::none) {
        return;
    }
    if (std::holds_alternative<Grid1D>(d)) {
        fft(f, FftDirection::inverse);
        return;
    }
    const auto& pg = std::get<PhaseGrid>(d);
    if (t == Transform::along_q || t == Transform::both) {
        fft_axis(f, pg.q.n(), pg.p.n(), 0, FftDirection::inverse);
    }
    if (t == Transform::along_p || t == Transform::both) {
        fft_axis(f, pg.q.n(), pg.p.n(), 1, FftDirection::inverse);
    }
}

const PhaseGrid& require_phase(const Domain& d, const char* who) {
    const auto* pg = std::get_if<PhaseGrid>(&d);
    if (pg == nullptr) {
        throw GridMismatch(std::string(who) + ": requires a phase-space grid");
    }
    return *pg;
}

// Samples g(q, p) on every phase-grid cell.
template <typename F>
ComplexField sample_phase(const PhaseGrid& pg, F&& g) {
    ComplexField out(pg.size());
    for (std::size_t i = 0; i < pg.q.n(); ++i) {
        for (std::size_t j = 0; j < pg.p.n(); ++j) {
            out[pg.index(i, j)] = g(i, j);
        }
    }
    return out;
}

ComplexField to_complex(const RealField& r) {
    return ComplexField(r.begin(), r.end());
}

RealField sample_slope(const Grid1D& q, const Potential& v) {
    RealField out(q.n());
    if (v.slope) {
        for (std::size_t i = 0; i < q.n(); ++i) {
            out[i] = v.slope(q.point(i));
        }
        return out;
    }
    if (!v.value) {
        throw InvalidArgument("potential: neither V nor V' is defined");
    }
    ComplexField vals(q.n());
    for (std::size_t i = 0; i < q.n(); ++i) {
        vals[i] = v.value(q.point(i));
    }
    const ComplexField d = spectral_derivative(vals, q, 1);
    for (std::size_t i = 0; i < q.n(); ++i) {
        out[i] = d[i].real();
    }
    return out;
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw InvalidArgument(std::string(what) + " must be positive and finite");
    }
}

void add_scaled(ComplexField& acc, const ComplexField& term, cplx c) {
    for (std::size_t i = 0; i < acc.size(); ++i) {
        acc[i] += c * term[i];
    }
}

}  // namespace

bool same_domain(const Domain& a, const Domain& b) {
    if (a.index() != b.index()) {
        return false;
    }
    if (const auto* g = std::get_if<Grid1D>(&a)) {
        return *g == std::get<Grid1D>(b);
    }
    return std::get<PhaseGrid>(a) == std::get<PhaseGrid>(b);
}

std::size_t domain_size(const Domain& d) {
    if (const auto* g = std::get_if<Grid1D>(&d)) {
        return g->n();
    }
    return std::get<PhaseGrid>(d).size();
}

GridOperator GridOperator::diagonal(Domain domain, ComplexField payload, Transform transform,
                                    bool hermitian) {
    if (payload.size() != domain_size(domain)) {
        throw GridMismatch("GridOperator: payload size does not match domain");
    }
    if (std::holds_alternative<Grid1D>(domain) && transform != Transform::none &&
        transform != Transform::along_q) {
        throw InvalidArgument("GridOperator: a 1D grid only supports transforms along q");
    }
    const Kind kind = transform == Transform::none ? Kind::position_diagonal : Kind::conjugate_diagonal;
    GridOperator op(kind, std::move(domain), hermitian);
    op.transform_ = transform;
    op.payload_ = std::move(payload);
    return op;
}

ComplexField GridOperator::apply(const ComplexField& f) const {
    if (f.size() != domain_size(domain_)) {
        throw GridMismatch("GridOperator::apply: field size does not match operator domain");
    }
    switch (kind_) {
    case Kind::position_diagonal:
    case Kind::conjugate_diagonal: {
        ComplexField out = f;
        forward(out, domain_, transform_);
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] *= payload_[i];
        }
        inverse(out, domain_, transform_);
        return out;
    }
    case Kind::sum: {
        ComplexField out = left_->apply(f);
        add_scaled(out, right_->apply(f), 1.0);
        return out;
    }
    case Kind::product:
        return left_->apply(right_->apply(f));
    }
    return {};
}

QWavefunction GridOperator::apply(const QWavefunction& psi) const {
    if (!same_domain(domain_, Domain(psi.grid))) {
        throw GridMismatch("GridOperator::apply: state grid differs from operator grid");
    }
    return QWavefunction(psi.grid, apply(psi.amplitudes), psi.time);
}

KvNWavefunction GridOperator::apply(const KvNWavefunction& psi) const {
    if (!same_domain(domain_, Domain(psi.grid))) {
        throw GridMismatch("GridOperator::apply: state grid differs from operator grid");
    }
    return KvNWavefunction(psi.grid, apply(psi.amplitudes), psi.time);
}

GridOperator operator+(const GridOperator& a, const GridOperator& b) {
    if (!same_domain(a.domain_, b.domain_)) {
        throw GridMismatch("operator sum: domains differ");
    }
    const bool diag = a.kind_ != GridOperator::Kind::sum && a.kind_ != GridOperator::Kind::product &&
                      b.kind_ == a.kind_ && a.transform_ == b.transform_;
    if (diag) {
        ComplexField p = a.payload_;
        add_scaled(p, b.payload_, 1.0);
        return GridOperator::diagonal(a.domain_, std::move(p), a.transform_,
                                      a.hermitian_ && b.hermitian_);
    }
    GridOperator op(GridOperator::Kind::sum, a.domain_, a.hermitian_ && b.hermitian_);
    op.left_ = std::make_shared<const GridOperator>(a);
    op.right_ = std::make_shared<const GridOperator>(b);
    return op;
}

GridOperator operator-(const GridOperator& a, const GridOperator& b) {
    return a + cplx(-1.0, 0.0) * b;
}

GridOperator operator*(const GridOperator& a, const GridOperator& b) {
    if (!same_domain(a.domain_, b.domain_)) {
        throw GridMismatch("operator product: domains differ");
    }
    const bool diag_a = a.kind_ == GridOperator::Kind::position_diagonal ||
                        a.kind_ == GridOperator::Kind::conjugate_diagonal;
    const bool diag_b = b.kind_ == GridOperator::Kind::position_diagonal ||
                        b.kind_ == GridOperator::Kind::conjugate_diagonal;
    if (diag_a && diag_b && a.transform_ == b.transform_) {
        // Diagonal in the same representation: the product is the pointwise product,
        // so such operators commute exactly.
        ComplexField p(a.payload_.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            p[i] = a.payload_[i] * b.payload_[i];
        }
        return GridOperator::diagonal(a.domain_, std::move(p), a.transform_,
                                      a.hermitian_ && b.hermitian_);
    }
    GridOperator op(GridOperator::Kind::product, a.domain_, false);
    op.left_ = std::make_shared<const GridOperator>(a);
    op.right_ = std::make_shared<const GridOperator>(b);
    return op;
}

GridOperator operator*(cplx c, const GridOperator& a) {
    const bool real = c.imag() == 0.0;
    switch (a.kind_) {
    case GridOperator::Kind::position_diagonal:
    case GridOperator::Kind::conjugate_diagonal: {
        ComplexField p = a.payload_;
        for (auto& v : p) {
            v *= c;
        }
        return GridOperator::diagonal(a.domain_, std::move(p), a.transform_, a.hermitian_ && real);
    }
    case GridOperator::Kind::sum: {
        GridOperator op(GridOperator::Kind::sum, a.domain_, a.hermitian_ && real);
        op.left_ = std::make_shared<const GridOperator>(c * *a.left_);
        op.right_ = std::make_shared<const GridOperator>(c * *a.right_);
        return op;
    }
    case GridOperator::Kind::product: {
        GridOperator op(GridOperator::Kind::product, a.domain_, a.hermitian_ && real);
        op.left_ = std::make_shared<const GridOperator>(c * *a.left_);
        op.right_ = a.right_;
        return op;
    }
    }
    return a;
}

GridOperator identity_op(const Domain& d) {
    return GridOperator::diagonal(d, ComplexField(domain_size(d), 1.0), Transform::none, true);
}

GridOperator position_op(const Grid1D& g) {
    return GridOperator::diagonal(g, to_complex(g.points()), Transform::none, true);
}

GridOperator position_op(const PhaseGrid& pg) {
    return GridOperator::diagonal(
        pg, sample_phase(pg, [&](std::size_t i, std::size_t) { return cplx(pg.q.point(i)); }),
        Transform::none, true);
}

GridOperator momentum_op(const Domain& d, Flavor flavor, double hbar) {
    require_positive(hbar, "hbar");
    if (flavor == Flavor::quantum) {
        const auto* g = std::get_if<Grid1D>(&d);
        if (g == nullptr) {
            throw GridMismatch("momentum_op: quantum flavor requires a 1D grid");
        }
        RealField k = wavenumbers(*g);
        ComplexField payload(k.size());
        for (std::size_t i = 0; i < k.size(); ++i) {
            payload[i] = hbar * k[i];
        }
        return GridOperator::diagonal(*g, std::move(payload), Transform::along_q, true);
    }
    const PhaseGrid& pg = require_phase(d, "momentum_op: kvn flavor");
    return GridOperator::diagonal(
        pg, sample_phase(pg, [&](std::size_t, std::size_t j) { return cplx(pg.p.point(j)); }),
        Transform::none, true);
}

GridOperator theta_op(const PhaseGrid& pg) {
    const RealField k = wavenumbers(pg.q);
    return GridOperator::diagonal(pg, sample_phase(pg, [&](std::size_t i, std::size_t) { return cplx(k[i]); }),
                                  Transform::along_q, true);
}

GridOperator lambda_op(const PhaseGrid& pg) {
    const RealField k = wavenumbers(pg.p);
    return GridOperator::diagonal(pg, sample_phase(pg, [&](std::size_t, std::size_t j) { return cplx(k[j]); }),
                                  Transform::along_p, true);
}

GridOperator function_of_position(const Domain& d, const std::function<double(double)>& f) {
    if (const auto* g = std::get_if<Grid1D>(&d)) {
        ComplexField p(g->n());
        for (std::size_t i = 0; i < g->n(); ++i) {
            p[i] = f(g->point(i));
        }
        return GridOperator::diagonal(*g, std::move(p), Transform::none, true);
    }
    const auto& pg = std::get<PhaseGrid>(d);
    RealField fq(pg.q.n());
    for (std::size_t i = 0; i < pg.q.n(); ++i) {
        fq[i] = f(pg.q.point(i));
    }
    return GridOperator::diagonal(
        pg, sample_phase(pg, [&](std::size_t i, std::size_t) { return cplx(fq[i]); }), Transform::none,
        true);
}

ComplexField commutator_apply(const GridOperator& a, const GridOperator& b, const ComplexField& f) {
    if (!same_domain(a.domain(), b.domain())) {
        throw GridMismatch("commutator_apply: operator domains differ");
    }
    ComplexField ab = (a * b).apply(f);
    const ComplexField ba = (b * a).apply(f);
    for (std::size_t i = 0; i < ab.size(); ++i) {
        ab[i] -= ba[i];
    }
    return ab;
}

cplx expectation(const GridOperator& op, const QWavefunction& psi) {
    return inner_product(psi, op.apply(psi));
}

cplx expectation(const GridOperator& op, const KvNWavefunction& psi) {
    return inner_product(psi, op.apply(psi));
}

Potential Potential::free() {
    return Potential{[](double) { return 0.0; }, [](double) { return 0.0; }, "free"};
}

Potential Potential::harmonic(double k) {
    return Potential{[k](double q) { return 0.5 * k * q * q; }, [k](double q) { return k * q; },
                     "harmonic"};
}

Potential Potential::quartic(double g) {
    return Potential{[g](double q) { return 0.25 * g * q * q * q * q; },
                     [g](double q) { return g * q * q * q; }, "quartic"};
}

std::string to_string(GeneratorKind kind) {
    switch (kind) {
    case GeneratorKind::quantum:
        return "quantum";
    case GeneratorKind::liouville:
        return "liouville";
    case GeneratorKind::koopman:
        return "koopman";
    case GeneratorKind::unified:
        return "unified";
    }
    return "unknown";
}

double Generator::time_unit() const noexcept {
    return kind_ == GeneratorKind::quantum || kind_ == GeneratorKind::unified ? hbar_ : 1.0;
}

ComplexField Generator::apply(const ComplexField& f) const {
    if (f.size() != domain_size(domain_)) {
        throw GridMismatch("Generator::apply: field size does not match generator domain");
    }
    if (kind_ == GeneratorKind::liouville) {
        // -i (p/m) d/dq + i V'(q) d/dp, by direct spectral differentiation.
        const auto& pg = std::get<PhaseGrid>(domain_);
        const ComplexField dq = spectral_derivative(f, pg, 0, 1);
        const ComplexField dp = spectral_derivative(f, pg, 1, 1);
        ComplexField out(f.size());
        const cplx i1(0.0, 1.0);
        for (std::size_t i = 0; i < pg.q.n(); ++i) {
            for (std::size_t j = 0; j < pg.p.n(); ++j) {
                const std::size_t idx = pg.index(i, j);
                out[idx] = -i1 * (pg.p.point(j) / mass_) * dq[idx] + i1 * slope_samples_[i] * dp[idx];
            }
        }
        return out;
    }
    if (composed_) {
        return composed_->apply(f);
    }
    return as_operator().apply(f);
}

GridOperator Generator::as_operator() const {
    GridOperator op = GridOperator::diagonal(domain_, to_complex(kinetic_.payload), kinetic_.transform, true) +
                      GridOperator::diagonal(domain_, to_complex(potential_part_.payload),
                                             potential_part_.transform, true);
    if (!constant_.empty()) {
        op = op + GridOperator::diagonal(domain_, to_complex(constant_), Transform::none, true);
    }
    return op;
}

Generator hamiltonian(const Grid1D& g, const Potential& v, double m, double hbar) {
    require_positive(m, "mass");
    require_positive(hbar, "hbar");
    if (!v.value) {
        throw InvalidArgument("hamiltonian: potential value V(q) is required");
    }
    Generator gen(g);
    gen.kind_ = GeneratorKind::quantum;
    gen.potential_ = v;
    gen.mass_ = m;
    gen.hbar_ = hbar;
    const RealField k = wavenumbers(g);
    gen.kinetic_.transform = Transform::along_q;
    gen.kinetic_.payload.resize(g.n());
    gen.potential_part_.transform = Transform::none;
    gen.potential_part_.payload.resize(g.n());
    for (std::size_t i = 0; i < g.n(); ++i) {
        gen.kinetic_.payload[i] = hbar * hbar * k[i] * k[i] / (2.0 * m);
        gen.potential_part_.payload[i] = v.value(g.point(i));
    }
    gen.slope_samples_ = sample_slope(g, v);
    return gen;
}

namespace {

// p k_q / m in the (k_q, p) representation; scale carries hbar for the unified form.
RealField shear_q_payload(const PhaseGrid& pg, double m, double scale) {
    const RealField kq = wavenumbers(pg.q);
    RealField out(pg.size());
    for (std::size_t i = 0; i < pg.q.n(); ++i) {
        for (std::size_t j = 0; j < pg.p.n(); ++j) {
            out[pg.index(i, j)] = scale * pg.p.point(j) * kq[i] / m;
        }
    }
    return out;
}

// -scale V'(q) k_p in the (q, k_p) representation.
RealField shear_p_payload(const PhaseGrid& pg, const RealField& slope, double scale) {
    const RealField kp = wavenumbers(pg.p);
    RealField out(pg.size());
    for (std::size_t i = 0; i < pg.q.n(); ++i) {
        for (std::size_t j = 0; j < pg.p.n(); ++j) {
            out[pg.index(i, j)] = -scale * slope[i] * kp[j];
        }
    }
    return out;
}

}  // namespace

Generator liouvillian(const PhaseGrid& pg, const Potential& v, double m) {
    require_positive(m, "mass");
    Generator gen(pg);
    gen.kind_ = GeneratorKind::liouville;
    gen.potential_ = v;
    gen.mass_ = m;
    gen.slope_samples_ = sample_slope(pg.q, v);
    gen.kinetic_ = SplitPart{Transform::along_q, shear_q_payload(pg, m, 1.0)};
    gen.potential_part_ = SplitPart{Transform::along_p, shear_p_payload(pg, gen.slope_samples_, 1.0)};
    return gen;
}

Generator koopman_generator(const PhaseGrid& pg, const Potential& v, double m,
                            const RealField& integration_constant) {
    Generator gen = liouvillian(pg, v, m);
    gen.kind_ = GeneratorKind::koopman;
    if (!integration_constant.empty()) {
        if (integration_constant.size() != pg.size()) {
            throw GridMismatch("koopman_generator: integration constant has wrong size");
        }
        gen.constant_ = integration_constant;
    }
    // p theta / m - V'(q) lambda (+ C), built from the algebra's operators.
    const GridOperator p = momentum_op(pg, Flavor::kvn);
    GridOperator k = cplx(1.0 / m, 0.0) * (p * theta_op(pg));
    const RealField& slope = gen.slope_samples_;
    GridOperator vprime = GridOperator::diagonal(
        pg, sample_phase(pg, [&](std::size_t i, std::size_t) { return cplx(slope[i]); }),
        Transform::none, true);
    k = k - vprime * lambda_op(pg);
    if (!gen.constant_.empty()) {
        k = k + GridOperator::diagonal(pg, to_complex(gen.constant_), Transform::none, true);
    }
    gen.composed_ = std::make_shared<const GridOperator>(k);
    return gen;
}

Generator unified_generator(const PhaseGrid& pg, const Potential& v, double kappa, double m,
                            double hbar) {
    require_positive(m, "mass");
    require_positive(hbar, "hbar");
    if (!(kappa >= 0.0 && kappa <= 1.0)) {
        throw InvalidArgument("unified_generator: kappa must lie in [0, 1]");
    }
    Generator gen(pg);
    gen.kind_ = GeneratorKind::unified;
    gen.potential_ = v;
    gen.mass_ = m;
    gen.hbar_ = hbar;
    gen.kappa_ = kappa;
    gen.slope_samples_ = sample_slope(pg.q, v);
    gen.kinetic_ = SplitPart{Transform::along_q, shear_q_payload(pg, m, hbar)};
    if (kappa == 0.0) {
        gen.potential_part_ = SplitPart{Transform::along_p, shear_p_payload(pg, gen.slope_samples_, hbar)};
        return gen;
    }
    if (!v.value) {
        throw InvalidArgument("unified_generator: potential value V(q) is required for kappa > 0");
    }
    const RealField kp = wavenumbers(pg.p);
    RealField pot(pg.size());
    for (std::size_t i = 0; i < pg.q.n(); ++i) {
        const double q = pg.q.point(i);
        for (std::size_t j = 0; j < pg.p.n(); ++j) {
            const double a = 0.5 * hbar * kappa * kp[j];
            pot[pg.index(i, j)] = (v.value(q - a) - v.value(q + a)) / kappa;
        }
    }
    gen.potential_part_ = SplitPart{Transform::along_p, std::move(pot)};
    return gen;
}

}  // namespace kvnlab
