#include "ultrafix/sampling.hpp"

namespace ultrafix {

namespace {

std::int64_t draw(Rng& rng, std::int64_t n) { return static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(n)); }

Rational pow_p(std::int64_t p, int k) {
    Integer pk = boost::multiprecision::pow(Integer(p), static_cast<unsigned>(std::abs(k)));
    return k >= 0 ? Rational(pk) : Rational(Integer(1), pk);
}

Scalar padic_offset(const FieldDescriptor& f, int k, Rng& rng) {
    if (draw(rng, 8) == 0) return Scalar::zero(f);
    const std::int64_t p = f.prime;
    std::int64_t n = 1 + draw(rng, 4 * p * p);
    if (draw(rng, 2)) n = -n;
    std::int64_t d = 1 + draw(rng, 9);
    while (d % p == 0) ++d;
    int v = -k + static_cast<int>(draw(rng, 3));
    return Scalar::from_rational(f, Rational(n, d) * pow_p(p, v));
}

}  // namespace

Rational random_rational(Rng& rng, std::int64_t max_num, std::int64_t max_den) {
    std::int64_t n = draw(rng, 2 * max_num + 1) - max_num;
    std::int64_t d = 1 + draw(rng, max_den);
    return Rational(n, d);
}

Vector sample_in_ball(const Ball& ball, Rng& rng) {
    const FieldDescriptor& f = ball.field();
    std::vector<Scalar> out;
    out.reserve(ball.dim());
    constexpr std::int64_t D = 1024;
    for (std::size_t i = 0; i < ball.dim(); ++i) {
        switch (f.kind) {
            case FieldKind::padic:
                out.push_back(ball.center[i] + padic_offset(f, ball.closed_exponent(), rng));
                break;
            case FieldKind::rational: {
                Rational u(draw(rng, 2 * D - 1) - (D - 1), D);
                out.push_back(ball.center[i] + Scalar::from_rational(f, u * ball.radius.exact_value()));
                break;
            }
            case FieldKind::real: {
                double u = (static_cast<double>(draw(rng, 2 * D - 1)) - (D - 1)) / D;
                out.push_back(ball.center[i] + Scalar::from_double(f, u * ball.radius.to_double()));
                break;
            }
        }
    }
    return Vector(f, std::move(out));
}

Scalar random_nonzero_scalar(const FieldDescriptor& f, Rng& rng) {
    if (f.kind == FieldKind::padic) {
        const std::int64_t p = f.prime;
        std::int64_t n = 1 + draw(rng, p * p);
        while (n % p == 0) ++n;
        std::int64_t d = 1 + draw(rng, 7);
        while (d % p == 0) ++d;
        int v = static_cast<int>(draw(rng, 4)) - 1;
        return Scalar::from_rational(f, Rational(n, d) * pow_p(p, v));
    }
    Rational q;
    do {
        q = random_rational(rng, 9, 8);
    } while (q == 0);
    return Scalar::from_rational(f, q);
}

}  // namespace ultrafix
