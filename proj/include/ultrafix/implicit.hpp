#pragma once

#include <cstddef>
#include <optional>

#include "ultrafix/inverse.hpp"

namespace ultrafix {

/// Window search settings. alpha and beta fix tau = min(beta - 1, 1 - alpha) / ||A^-1||,
/// the strictness level a trial window must reach.
struct WindowOptions {
    Rational alpha = Rational(1, 2);
    Rational beta = Rational(3, 2);
    /// Starting radii; default 1. p-adic radii must be powers of p.
    std::optional<Magnitude> param_radius;
    std::optional<Magnitude> state_radius;
    std::size_t max_shrinks = 60;
};

/// A certified parameter window for f on P x U (parameters first).
///
/// cert holds A = d_x f(p0, x0), its inverse and the uniform strictness bound
/// sigma over p_ball x state_ball; cert.ball is state_ball. Every p in p_ball
/// and every target c with ||c - z0|| < delta (z0 = f(p0, x0)) is solvable in
/// state_ball. For an exact window (p-adic) the solvable targets are exactly
/// z0 + A B_r(0) for every p, which target_ball describes when A is a scaled
/// isometry and otherwise under-approximates by its inscribed ball.
struct ParamWindow {
    Vector p0;
    Vector x0;
    Vector z0;
    Ball p_ball;
    Ball state_ball;
    Ball target_ball;
    InversionCertificate cert;
    Magnitude tau;
    Magnitude delta;        ///< ||A^-1||^-1 alpha r / 2 with alpha from cert
    Magnitude drift;        ///< bound for ||f(p, x0) - z0|| (p-adic: ||A^-1 (f(p, x0) - z0)||)
    bool exact_image = false;
    std::size_t shrinks = 0;

    bool contains_parameter(const Vector& p) const;
    /// Targets the window guarantees: ||c - z0|| < delta, or for an exact
    /// window ||A^-1 (c - z0)|| <= r.
    bool contains_target(const Vector& c) const;
};

/// Builds a window around (p0, x0). Throws SingularA when d_x f(p0, x0) is
/// not invertible and WindowNotFound after `max_shrinks` trials.
///
/// Both radii are shrunk together (by 1/p or 1/2) until the uniform
/// strictness bound is <= tau; then the parameter radius alone is shrunk
/// until the drift condition holds: real ||f(p, x0) - z0|| < delta, p-adic
/// ||A^-1 (f(p, x0) - z0)|| <= r.
ParamWindow build_window(const MapSpec& f, const Vector& p0, const Vector& x0, const WindowOptions& options = {});

/// build_window over a p-adic field, with the exact common image as target set.
ParamWindow ultrametric_window(const MapSpec& f, const Vector& p0, const Vector& x0,
                               const WindowOptions& options = {});

struct ImplicitSolution {
    Vector lambda_value;
    Operator derivative;    ///< lambda'(p) = -(d_x f)^-1 d_p f at (p, lambda(p))
    Magnitude residual;     ///< ||f(p, lambda(p)) - z0||
    Ball sub_ball;
    FixedPointReport report;
};

/// Solves f(p, x) = z0 for x in the state ball. Throws OutsideWindow when p
/// or z0 is not covered by the window.
ImplicitSolution solve_implicit(const ParamWindow& w, const MapSpec& f, const Vector& p, const Vector& z0,
                                const IterationOptions& options = {});

/// The implicit derivative alone, at a solution (p, x).
Operator implicit_derivative(const MapSpec& f, const Vector& p, const Vector& x);

}  // namespace ultrafix
