#pragma once

#include "kvnlab/grid.hpp"
#include "kvnlab/states.hpp"

#include <functional>
#include <memory>
#include <string>
#include <variant>

namespace kvnlab {

using Domain = std::variant<Grid1D, PhaseGrid>;

bool same_domain(const Domain& a, const Domain& b);
std::size_t domain_size(const Domain& d);

// Which axes are Fourier transformed before a diagonal payload is applied.
enum class Transform { none, along_q, along_p, both };

// An operator represented by its action on a field. Diagonal operators carry a
// payload indexed like the field in the representation selected by Transform.
class GridOperator {
public:
    enum class Kind { position_diagonal, conjugate_diagonal, sum, product };

    static GridOperator diagonal(Domain domain, ComplexField payload, Transform transform,
                                 bool hermitian);

    Kind kind() const noexcept { return kind_; }
    bool hermitian() const noexcept { return hermitian_; }
    const Domain& domain() const noexcept { return domain_; }
    Transform transform() const noexcept { return transform_; }
    const ComplexField& payload() const noexcept { return payload_; }

    ComplexField apply(const ComplexField& f) const;
    QWavefunction apply(const QWavefunction& psi) const;
    KvNWavefunction apply(const KvNWavefunction& psi) const;

    friend GridOperator operator+(const GridOperator& a, const GridOperator& b);
    friend GridOperator operator-(const GridOperator& a, const GridOperator& b);
    // Composition: (a * b) f = a(b(f)).
    friend GridOperator operator*(const GridOperator& a, const GridOperator& b);
    friend GridOperator operator*(cplx c, const GridOperator& a);

private:
    GridOperator(Kind kind, Domain domain, bool hermitian)
        : kind_(kind), domain_(std::move(domain)), hermitian_(hermitian) {}

    Kind kind_;
    Domain domain_;
    bool hermitian_;
    Transform transform_ = Transform::none;
    ComplexField payload_;
    std::shared_ptr<const GridOperator> left_;
    std::shared_ptr<const GridOperator> right_;
};

enum class Flavor { quantum, kvn };

GridOperator identity_op(const Domain& d);
GridOperator position_op(const Grid1D& g);
GridOperator position_op(const PhaseGrid& pg);
GridOperator momentum_op(const Domain& d, Flavor flavor, double hbar = 1.0);
GridOperator theta_op(const PhaseGrid& pg);
GridOperator lambda_op(const PhaseGrid& pg);
// Multiplication by f(q) on either domain.
GridOperator function_of_position(const Domain& d, const std::function<double(double)>& f);

ComplexField commutator_apply(const GridOperator& a, const GridOperator& b, const ComplexField& f);

cplx expectation(const GridOperator& op, const QWavefunction& psi);
cplx expectation(const GridOperator& op, const KvNWavefunction& psi);

struct Potential {
    std::function<double(double)> value;
    std::function<double(double)> slope;
    std::string name = "custom";

    static Potential free();
    static Potential harmonic(double k);
    // V = g q^4 / 4
    static Potential quartic(double g);
};

enum class GeneratorKind { quantum, liouville, koopman, unified };

std::string to_string(GeneratorKind kind);

struct SplitPart {
    Transform transform = Transform::none;
    RealField payload;
};

// A generator split as kinetic + potential, each diagonal in one representation.
// Fields evolve as exp(-i dt G / time_unit).
class Generator {
public:
    GeneratorKind kind() const noexcept { return kind_; }
    const Domain& domain() const noexcept { return domain_; }
    const SplitPart& kinetic() const noexcept { return kinetic_; }
    const SplitPart& potential_part() const noexcept { return potential_part_; }
    // Optional position-diagonal C(q,p); empty unless set through the testing hook.
    const RealField& integration_constant() const noexcept { return constant_; }
    const Potential& potential() const noexcept { return potential_; }
    double kappa() const noexcept { return kappa_; }
    double hbar() const noexcept { return hbar_; }
    double mass() const noexcept { return mass_; }
    double time_unit() const noexcept;

    // V'(q) sampled on the q axis.
    const RealField& slope_samples() const noexcept { return slope_samples_; }

    ComplexField apply(const ComplexField& f) const;
    GridOperator as_operator() const;

    friend Generator hamiltonian(const Grid1D&, const Potential&, double, double);
    friend Generator liouvillian(const PhaseGrid&, const Potential&, double);
    friend Generator koopman_generator(const PhaseGrid&, const Potential&, double, const RealField&);
    friend Generator unified_generator(const PhaseGrid&, const Potential&, double, double, double);

private:
    explicit Generator(Domain d) : domain_(std::move(d)) {}

    GeneratorKind kind_ = GeneratorKind::quantum;
    Domain domain_;
    SplitPart kinetic_;
    SplitPart potential_part_;
    RealField constant_;
    Potential potential_;
    RealField slope_samples_;
    std::shared_ptr<const GridOperator> composed_;
    double kappa_ = 0.0;
    double hbar_ = 1.0;
    double mass_ = 1.0;
};

Generator hamiltonian(const Grid1D& g, const Potential& v, double m = 1.0, double hbar = 1.0);
Generator liouvillian(const PhaseGrid& pg, const Potential& v, double m = 1.0);
// integration_constant, when nonempty, is C(q,p) sampled on the phase grid.
Generator koopman_generator(const PhaseGrid& pg, const Potential& v, double m = 1.0,
                            const RealField& integration_constant = {});
Generator unified_generator(const PhaseGrid& pg, const Potential& v, double kappa, double m = 1.0,
                            double hbar = 1.0);

}  // namespace kvnlab
