#include "ultrafix/inverse.hpp"

#include "ultrafix/sampling.hpp"

namespace ultrafix {

namespace {

Magnitude unit_of(const FieldDescriptor& f) { return f.exact() ? Magnitude::exact(1) : Magnitude(1.0); }

constexpr double kSlack = 1e-9;

}  // namespace

InversionCertificate certify(const MapSpec& f, const Ball& ball, std::optional<Operator> A) {
    if (f.domain_dim() != ball.dim() || f.codomain_dim() != ball.dim())
        throw Error(ErrorKind::DimensionMismatch, "certify needs f: K^m -> K^m with m the ball dimension");
    InversionCertificate c;
    c.A = A ? *A : jacobian(f, ball.center);
    if (!c.A.square() || c.A.rows() != ball.dim())
        throw Error(ErrorKind::DimensionMismatch, "A must be square and match the ball dimension");
    try {
        c.A_inv = invert_exact(c.A);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularMatrix) throw;
        throw Error(ErrorKind::SingularA, "A is not invertible");
    }
    c.ball = ball;
    c.ultrametric = ball.field().ultrametric();
    c.norm_A = operator_norm(c.A);
    c.norm_A_inv = operator_norm(c.A_inv);
    c.sigma = strictness_modulus(f, c.A, ball);
    const Magnitude one = unit_of(ball.field());
    const Magnitude threshold = one / c.norm_A_inv;
    if (!(c.sigma < threshold))
        throw Error(ErrorKind::NotCertifiable,
                    "strictness bound " + c.sigma.to_string() + " is not below 1/||A^-1|| = " + threshold.to_string(),
                    {{"sigma", c.sigma.to_string()}, {"threshold", threshold.to_string()}});
    c.a = threshold - c.sigma;
    c.b = c.norm_A + c.sigma;
    c.alpha = one - c.theta();
    c.beta = one + c.theta();
    return c;
}

Magnitude residual_radius(const InversionCertificate& cert, const Vector& y) {
    if (!cert.ball.contains(y)) throw Error(ErrorKind::DomainViolation, "point lies outside the certificate ball");
    if (cert.ultrametric) return cert.ball.radius;
    return cert.ball.radius - norm_upper(y - cert.ball.center);
}

InversionResult local_invert(const InversionCertificate& cert, const MapSpec& f, const Vector& c,
                             const std::optional<Vector>& anchor, const IterationOptions& options) {
    return local_invert(cert, [&f](const Vector& x) { return eval(f, x); }, c, anchor, options);
}

InversionResult local_invert(const InversionCertificate& cert, const SelfMap& f, const Vector& c,
                             const std::optional<Vector>& anchor, const IterationOptions& options) {
    const FieldDescriptor& fd = cert.ball.field();
    const Vector y = anchor ? *anchor : cert.ball.center;
    const Magnitude available = residual_radius(cert, y);
    const Vector offset = cert.A_inv.apply(f(y) - c);
    const Magnitude rho = norm(offset);

    InversionResult out;
    if (rho.is_zero()) {
        // The anchor solves f(v) = c as far as the offset is known; over Q_p
        // ||x - y|| = ||A^-1 (c - f(y))|| for the true solution x.
        FixedPointReport& rep = out.report;
        rep.theta = cert.theta();
        rep.trace = {y};
        if (cert.ultrametric) {
            rep.error_bound = norm_upper(offset);
            int known = rep.error_bound.is_zero() ? fd.precision : padic_digits_certified(fd.prime, rep.error_bound);
            for (const auto& x : y.components())
                if (!x.is_exact_zero()) known = std::min(known, x.absolute_precision());
            rep.certified_digits = known;
            std::vector<Scalar> cut;
            for (const auto& x : y.components()) cut.push_back(x.with_absolute_precision(known));
            out.solution = Vector(fd, std::move(cut));
            out.sub_ball = Ball(y, padic_radius(fd.prime, -known));
        } else {
            rep.error_bound = norm_upper(offset) / cert.alpha;
            out.solution = y;
            out.sub_ball = Ball(y, available);
        }
        rep.fixed_point = out.solution;
        return out;
    }

    Magnitude s;
    if (cert.ultrametric) {
        if (!(rho <= cert.ball.radius))
            throw Error(ErrorKind::TargetOutsideGuarantee, "target is not in f(y) + A B_r(0)",
                        {{"distance", rho.to_string()}, {"radius", cert.ball.radius.to_string()}});
        s = rho;
    } else {
        const Magnitude reach = cert.alpha * available;
        if (!(rho <= reach))
            throw Error(ErrorKind::TargetOutsideGuarantee, "target is not in f(y) + A B_{alpha s}(0)",
                        {{"distance", rho.to_string()}, {"limit", reach.to_string()}});
        s = fd.exact() ? rho / cert.alpha : min(available, rho / cert.alpha * Magnitude(1.0 + 1e-9));
    }
    out.sub_ball = Ball(y, s);

    const Operator& Ainv = cert.A_inv;
    auto g = [&](const Vector& v) { return v - Ainv.apply(f(v) - c); };
    out.report = iterate_self_map(g, out.sub_ball, cert.theta(), y, options);
    out.solution = out.report.fixed_point;
    return out;
}

bool BallImage::guaranteed(const Vector& w) const {
    const Vector d = w - center;
    if (exact) return norm_upper(A_inv.apply(d)) <= skew_inner;
    return norm_upper(d) < inner_radius || norm_upper(A_inv.apply(d)) <= skew_inner;
}

BallImage ball_image(const InversionCertificate& cert, const MapSpec& f, const Vector& y, const Magnitude& s) {
    const Magnitude available = residual_radius(cert, y);
    if (!(s <= available))
        throw Error(ErrorKind::DomainViolation, "B_s(y) is not inside the certificate ball",
                    {{"s", s.to_string()}, {"available", available.to_string()}});
    BallImage img;
    img.center = eval(f, y);
    img.s = s;
    img.A_inv = cert.A_inv;
    const Magnitude one = unit_of(cert.ball.field());
    if (cert.ultrametric) {
        img.exact = true;
        img.skew_inner = s;
        img.skew_outer = s;
        img.inner_radius = s / cert.norm_A_inv;
        img.outer_radius = cert.norm_A * s;
        if (cert.norm_A * cert.norm_A_inv == one) img.round_radius = img.outer_radius;
    } else {
        img.inner_radius = cert.a * s;
        img.outer_radius = cert.b * s;
        img.skew_inner = cert.alpha * s;
        img.skew_outer = cert.beta * s;
    }
    return img;
}

DistortionReport verify_distortion(const InversionCertificate& cert, const MapSpec& f, std::size_t samples,
                                   std::uint64_t seed, Execution exec) {
    Rng rng(seed);
    std::vector<std::pair<Vector, Vector>> pairs;
    pairs.reserve(samples);
    while (pairs.size() < samples) {
        Vector y = sample_in_ball(cert.ball, rng);
        Vector z = sample_in_ball(cert.ball, rng);
        if (norm(z - y).is_zero()) continue;
        pairs.emplace_back(std::move(y), std::move(z));
    }

    struct Outcome {
        bool lower = true, upper = true, isometry = true, sigma = true;
        Magnitude ratio, quotient;
        Magnitude d, df, e, dA;
    };
    std::vector<Outcome> results(samples);
    for_each_index(samples, exec, [&](std::size_t i) {
        const auto& [y, z] = pairs[i];
        Outcome& o = results[i];
        const Vector dz = z - y;
        const Vector dfv = eval(f, z) - eval(f, y);
        o.d = norm(dz);
        o.df = norm(dfv);
        o.e = norm_upper(dfv - cert.A.apply(dz));
        o.lower = within(cert.a * o.d, o.df, kSlack);
        o.upper = within(o.df, cert.b * o.d, kSlack);
        if (cert.ultrametric) {
            o.dA = norm(cert.A_inv.apply(dfv));
            o.isometry = o.dA == o.d;
        }
        o.sigma = within(o.e, cert.sigma * o.d, kSlack);
        o.ratio = o.df / o.d;
        o.quotient = o.e / o.d;
    });

    DistortionReport rep;
    rep.pairs = samples;
    for (std::size_t i = 0; i < samples; ++i) {
        const Outcome& o = results[i];
        rep.min_ratio = i == 0 ? o.ratio : min(rep.min_ratio, o.ratio);
        rep.max_ratio = i == 0 ? o.ratio : max(rep.max_ratio, o.ratio);
        rep.max_sigma_quotient = i == 0 ? o.quotient : max(rep.max_sigma_quotient, o.quotient);
        auto fail = [&](std::size_t& counter, const char* check, const Magnitude& lhs, const Magnitude& rhs) {
            ++counter;
            if (!rep.witness) rep.witness = DistortionWitness{pairs[i].first, pairs[i].second, check, lhs, rhs};
        };
        if (!o.lower) fail(rep.lower_failures, "a|z-y| <= |f(z)-f(y)|", cert.a * o.d, o.df);
        if (!o.upper) fail(rep.upper_failures, "|f(z)-f(y)| <= b|z-y|", o.df, cert.b * o.d);
        if (!o.isometry) fail(rep.isometry_failures, "|A^-1(f(z)-f(y))| = |z-y|", o.dA, o.d);
        if (!o.sigma) fail(rep.sigma_failures, "|f(z)-f(y)-A(z-y)| <= sigma|z-y|", o.e, cert.sigma * o.d);
    }
    return rep;
}

}  // namespace ultrafix
