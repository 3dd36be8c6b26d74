#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "ultrafix/linalg.hpp"
#include "ultrafix/polynomial.hpp"

namespace ultrafix {

/// Field-independent description of a ball with an exact rational center and
/// radius; materialized into a Ball once the field is known.
struct DomainSpec {
    std::vector<Rational> center;
    Rational radius;
    bool closed = true;

    Ball in(const FieldDescriptor& field) const;
};

/// A polynomial map K^m -> K^n with exact rational coefficients, optionally
/// restricted to a ball U.
struct MapSpec {
    std::size_t vars = 0;
    std::vector<Polynomial> outputs;
    std::optional<DomainSpec> domain;

    MapSpec() = default;
    MapSpec(std::size_t vars, std::vector<Polynomial> outputs, std::optional<DomainSpec> domain = std::nullopt);

    std::size_t domain_dim() const noexcept { return vars; }
    std::size_t codomain_dim() const noexcept { return outputs.size(); }
    bool in_domain(const Vector& x) const;
    /// Copy without the domain restriction.
    MapSpec unrestricted() const;
};

/// A point (x, y, t) of U^[1].
struct QuotientPoint {
    Vector x;
    Vector y;
    Scalar t;
};

/// A point (q, q1, s) of U^[2] = (U^[1])^[1], where q1 is a direction in the
/// (x, y, t) space.
struct SecondQuotientPoint {
    QuotientPoint q;
    QuotientPoint q1;
    Scalar s;
};

Vector eval(const MapSpec& f, const Vector& x);

/// f^[1](x, y, t): (f(x + ty) - f(x)) / t for t != 0, f'(x) y for t = 0.
Vector diff_quotient(const MapSpec& f, const QuotientPoint& q);

using QuotientFn = std::function<Vector(const MapSpec&, const QuotientPoint&)>;

/// The polynomial map (x, y, t) -> f^[1](x, y, t) on 2m + 1 variables. Exact
/// because f(x + ty) - f(x) is divisible by t.
MapSpec quotient_map(const MapSpec& f);

/// f^[2] = (f^[1])^[1] evaluated literally: the quotient of f^[1] for s != 0,
/// the derivative of quotient_map(f) applied to q1 for s = 0. `quotient`
/// supplies f^[1] for the s != 0 branch.
Vector second_quotient(const MapSpec& f, const SecondQuotientPoint& p, const QuotientFn& quotient = diff_quotient);

/// n x m Jacobian from exact partial derivatives.
Operator jacobian(const MapSpec& f, const Vector& x);
/// Columns [first, first + count) of the Jacobian.
Operator partial_jacobian(const MapSpec& f, const Vector& x, std::size_t first, std::size_t count);

/// g o f. The result keeps f's domain.
MapSpec compose(const MapSpec& g, const MapSpec& f);

/// Upper bound for Lip(f|_B) by coefficient telescoping of f(center + h).
Magnitude lipschitz_bound(const MapSpec& f, const Ball& ball);

/// Upper bound for sup ||f(z) - f(y) - A(z - y)|| / ||z - y|| over the ball.
Magnitude strictness_modulus(const MapSpec& f, const Operator& A, const Ball& ball);

/// f lives on P x U (parameters first). Bounds the state-direction Lipschitz
/// constant of x -> f(p, x) - A x uniformly over p in P and x in U; A may be
/// null. Parameter-only terms drop out.
Magnitude uniform_state_bound(const MapSpec& f, const Ball& params, const Ball& state, const Operator* A);

/// As uniform_state_bound for the single parameter value p.
Magnitude state_lipschitz_bound(const MapSpec& f, const Vector& p, const Ball& state, const Operator* A = nullptr);

/// f on P x U: sup over p in P of ||M (f(p, x0) - f(p0, x0))|| where p0, x0
/// are the ball centers and M is an optional left factor (A^{-1}).
Magnitude parameter_drift_bound(const MapSpec& f, const Ball& params, const Vector& x0, const Operator* M);

/// Random map with the given shape: each output gets up to `max_terms`
/// monomials of total degree <= max_degree with small rational coefficients.
MapSpec random_map(std::mt19937_64& rng, std::size_t vars, std::size_t outputs, unsigned max_degree,
                   std::size_t max_terms);

}  // namespace ultrafix
