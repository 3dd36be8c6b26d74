#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ultrafix/contraction.hpp"
#include "ultrafix/kernels.hpp"

namespace ultrafix {

/// Constants certifying that f is a bi-Lipschitz homeomorphism near the
/// ball center. sigma is the strictness bound sigma-hat (an upper bound), and
/// every derived constant is computed from it, so a is never too large and b
/// never too small.
struct InversionCertificate {
    Operator A;
    Operator A_inv;
    Magnitude norm_A;
    Magnitude norm_A_inv;
    Magnitude sigma;
    Magnitude a;       ///< 1/||A^-1|| - sigma
    Magnitude b;       ///< ||A|| + sigma
    Magnitude alpha;   ///< 1 - sigma ||A^-1||
    Magnitude beta;    ///< 1 + sigma ||A^-1||
    Ball ball;
    bool ultrametric = false;

    /// Contraction constant of g(v) = v - A^-1 (f(v) - c).
    Magnitude theta() const { return sigma * norm_A_inv; }
};

/// A defaults to the Jacobian at the ball center. Throws SingularA,
/// NotCertifiable (sigma-hat >= 1/||A^-1||) or DomainViolation when the ball
/// is not inside f's domain.
InversionCertificate certify(const MapSpec& f, const Ball& ball, std::optional<Operator> A = std::nullopt);

struct InversionResult {
    Vector solution;
    Ball sub_ball;              ///< the closed ball the iteration ran on
    FixedPointReport report;
};

/// Solves f(v) = c by iterating g(v) = v - A^-1 (f(v) - c) from `anchor`
/// (default: the ball center) on a closed sub-ball around it.
///
/// Real and rational fields: with rho = ||A^-1 (f(anchor) - c)|| the sub-ball
/// radius is rho / alpha, which must fit in r - ||anchor - center||.
/// p-adic fields: the sub-ball is the closed ball of radius rho, which must not
/// exceed r. Otherwise TargetOutsideGuarantee.
InversionResult local_invert(const InversionCertificate& cert, const MapSpec& f, const Vector& c,
                             const std::optional<Vector>& anchor = std::nullopt,
                             const IterationOptions& options = {});
/// As above for any map the certificate is valid for, e.g. x -> f(p, x).
InversionResult local_invert(const InversionCertificate& cert, const SelfMap& f, const Vector& c,
                             const std::optional<Vector>& anchor = std::nullopt,
                             const IterationOptions& options = {});

/// What the certificate says about f(B_s(y)).
///
/// Real and rational: B_{a s}(f(y)) is inside the image, which is inside
/// B_{b s}(f(y)); in A-skewed form f(y) + A B_{alpha s}(0) is inside, and the
/// image is inside f(y) + A B_{beta s}(0).
/// p-adic: the image is exactly f(y) + A B_s(0). When A is a scaled isometry
/// this is the round ball of radius ||A|| s, reported in `round_radius`.
struct BallImage {
    Vector center;                 ///< f(y)
    Magnitude s;
    bool exact = false;
    Magnitude inner_radius;        ///< a s (real), ||A^-1||^-1 s (p-adic)
    Magnitude outer_radius;        ///< b s (real), ||A|| s (p-adic)
    Magnitude skew_inner;          ///< alpha s (p-adic: s)
    Magnitude skew_outer;          ///< beta s (p-adic: s)
    std::optional<Magnitude> round_radius;
    Operator A_inv;

    /// w is certainly in f(B_s(y)): ||A^-1 (w - f(y))|| <= skew_inner, or the
    /// round inner ball for real fields.
    bool guaranteed(const Vector& w) const;
};

/// Throws DomainViolation unless y is in the certificate ball and s does not
/// exceed the residual radius (real: r - ||y - center||; p-adic: r).
BallImage ball_image(const InversionCertificate& cert, const MapSpec& f, const Vector& y, const Magnitude& s);

/// Largest admissible s for ball_image and local_invert anchored at y.
Magnitude residual_radius(const InversionCertificate& cert, const Vector& y);

struct DistortionWitness {
    Vector y;
    Vector z;
    std::string check;
    Magnitude lhs;
    Magnitude rhs;
};

struct DistortionReport {
    std::size_t pairs = 0;
    std::size_t lower_failures = 0;      ///< a ||z - y|| > ||f(z) - f(y)||
    std::size_t upper_failures = 0;      ///< ||f(z) - f(y)|| > b ||z - y||
    std::size_t isometry_failures = 0;   ///< p-adic: ||A^-1 f(z) - A^-1 f(y)|| != ||z - y||
    std::size_t sigma_failures = 0;      ///< strictness quotient above sigma-hat
    Magnitude min_ratio;                 ///< min ||f(z) - f(y)|| / ||z - y||; exact for exact fields
    Magnitude max_ratio;
    Magnitude max_sigma_quotient;
    std::optional<DistortionWitness> witness;

    std::size_t failures() const { return lower_failures + upper_failures + isometry_failures + sigma_failures; }
    bool passed() const { return failures() == 0; }
};

/// Samples `samples` pairs y != z in the ball and checks the bi-Lipschitz
/// sandwich (real slack 1e-9 relative), the exact ultrametric isometry of
/// A^-1 f, and that the strictness quotient never exceeds sigma-hat.
DistortionReport verify_distortion(const InversionCertificate& cert, const MapSpec& f, std::size_t samples,
                                   std::uint64_t seed, Execution exec = Execution::parallel);

}  // namespace ultrafix
