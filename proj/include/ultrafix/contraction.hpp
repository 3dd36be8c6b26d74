#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "ultrafix/calculus.hpp"

namespace ultrafix {

/// Iterate x_{k+1} = f(x_k) from x0 inside `domain`. theta, when absent, is
/// taken from lipschitz_bound(f, domain).
struct ContractionProblem {
    MapSpec f;
    Ball domain;
    std::optional<Magnitude> theta;
    Vector x0;
};

struct IterationOptions {
    /// Real and rational fields: stop once theta^n / (1 - theta) * d0 <= tolerance.
    double tolerance = 1e-12;
    /// p-adic fields: stop once the error bound is <= p^-digits (default N).
    std::optional<int> padic_digits;
    std::size_t max_iterations = 100000;
};

struct FixedPointReport {
    Vector fixed_point;
    std::size_t iterations = 0;
    std::vector<Vector> trace;                ///< x_0, ..., x_n
    std::vector<Magnitude> apriori_bounds;    ///< theta^k d(x_1, x_0), k = 0..n-1
    std::vector<Magnitude> step_distances;    ///< d(x_{k+1}, x_k), k = 0..n-1
    Magnitude theta;
    Magnitude initial_step;                   ///< d(f(x_0), x_0)
    Magnitude error_bound;                    ///< certified d(fixed_point, true fixed point)
    Magnitude achieved_distance;              ///< d(f(fixed_point), fixed_point)
    /// p-adic only: the fixed point is known modulo p^certified_digits.
    int certified_digits = 0;
};

using SelfMap = std::function<Vector(const Vector&)>;

/// True iff iterates from x0 provably stay in the ball: real and rational
/// d(f(x0), x0) <= (1 - theta) r (strict for open balls); p-adic
/// d(f(x0), x0) <= r.
bool admissible(const ContractionProblem& p);
bool admissible(const Magnitude& theta, const Ball& ball, const Magnitude& initial_step);

Magnitude contraction_constant(const ContractionProblem& p);

FixedPointReport iterate_fixed_point(const ContractionProblem& p, const IterationOptions& options = {});

/// Banach iteration of an arbitrary self-map with a known contraction
/// constant. Throws NotAContraction (theta >= 1), NotAdmissible, DomainEscape
/// (an iterate left the ball or a step exceeded its a priori bound) or
/// NotConverged.
FixedPointReport iterate_self_map(const SelfMap& g, const Ball& ball, const Magnitude& theta, const Vector& x0,
                                  const IterationOptions& options = {});

struct UniformFamilyReport {
    Magnitude theta;
    bool contraction = false;   ///< theta < 1
};

/// f on P x U (parameters first): one theta bounding the state Lipschitz
/// constant of x -> f(p, x) for every p in P.
UniformFamilyReport uniform_family_check(const MapSpec& f, const Ball& params, const Ball& state);

/// Solves x = f(p, x) on `state` for one parameter value p, with theta from
/// the state Lipschitz bound at p unless given.
FixedPointReport solve_parameterized(const MapSpec& f, const Vector& p, const Ball& state, const Vector& x0,
                                     std::optional<Magnitude> theta = std::nullopt,
                                     const IterationOptions& options = {});

/// phi'(p) = (id - beta2)^{-1} beta1 with beta1, beta2 the parameter and
/// state partial Jacobians of f at (p, x_p). Throws NotAFixedPoint when x_p is
/// not fixed at tracked precision and NotAContraction when ||beta2|| >= 1.
Operator fixed_point_derivative(const MapSpec& f, const Vector& p, const Vector& x_p);

}  // namespace ultrafix
