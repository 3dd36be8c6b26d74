#include "ultrafix/field.hpp"

#include <algorithm>
#include <cmath>

namespace ultrafix {

namespace {

using i128 = __int128;

std::int64_t ipow(std::int64_t p, int k) {
    std::int64_t r = 1;
    for (int i = 0; i < k; ++i) r *= p;
    return r;
}

std::int64_t mod(i128 a, std::int64_t m) {
    i128 r = a % m;
    if (r < 0) r += m;
    return static_cast<std::int64_t>(r);
}

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
    return mod(static_cast<i128>(a) * b, m);
}

std::int64_t invmod(std::int64_t a, std::int64_t m) {
    i128 old_r = mod(a, m), r = m, old_s = 1, s = 0;
    while (r != 0) {
        i128 q = old_r / r;
        i128 tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
    }
    if (old_r != 1) throw Error(ErrorKind::DivisionByZero, "element is not a unit modulo p^k");
    return mod(old_s, m);
}

int valuation_of(std::int64_t r, std::int64_t p) {
    int s = 0;
    while (r % p == 0) {
        r /= p;
        ++s;
    }
    return s;
}

// Exact shadows are dropped once they would exceed this many bits, which
// keeps long iterations from dragging big rationals along.
constexpr unsigned kShadowBits = 256;

bool small_enough(const Rational& q) {
    auto bits = [](const Integer& z) { return z == 0 ? 0u : static_cast<unsigned>(boost::multiprecision::msb(boost::multiprecision::abs(z))); };
    return bits(numerator(q)) < kShadowBits && bits(denominator(q)) < kShadowBits;
}

}  // namespace

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

FieldDescriptor FieldDescriptor::padic(std::int64_t prime, int precision) {
    if (!is_prime(prime)) throw Error(ErrorKind::InvalidField, "p-adic field needs a prime, got " + std::to_string(prime));
    if (precision < 1) throw Error(ErrorKind::InvalidField, "p-adic precision must be >= 1");
    i128 m = 1;
    for (int i = 0; i < precision; ++i) {
        m *= prime;
        if (m >= (static_cast<i128>(1) << 62))
            throw Error(ErrorKind::InvalidField, "p^N must stay below 2^62");
    }
    FieldDescriptor d;
    d.kind = FieldKind::padic;
    d.prime = prime;
    d.precision = precision;
    d.tolerance = 0.0;
    return d;
}

FieldDescriptor FieldDescriptor::real(double tolerance) {
    if (!(tolerance >= 0.0)) throw Error(ErrorKind::InvalidField, "tolerance must be non-negative");
    FieldDescriptor d;
    d.kind = FieldKind::real;
    d.tolerance = tolerance;
    return d;
}

FieldDescriptor FieldDescriptor::rational() {
    FieldDescriptor d;
    d.kind = FieldKind::rational;
    d.tolerance = 0.0;
    return d;
}

std::string FieldDescriptor::to_string() const {
    switch (kind) {
        case FieldKind::padic: return "Q_" + std::to_string(prime) + " (N=" + std::to_string(precision) + ")";
        case FieldKind::real: return "R";
        case FieldKind::rational: return "Q";
    }
    return "?";
}

Magnitude padic_radius(std::int64_t prime, int exponent) {
    Integer pk = boost::multiprecision::pow(Integer(prime), static_cast<unsigned>(std::abs(exponent)));
    return exponent >= 0 ? Magnitude(Rational(pk)) : Magnitude(Rational(Integer(1), pk));
}

int padic_radius_exponent(std::int64_t prime, const Magnitude& radius) {
    if (!radius.is_exact() || radius.exact_value() <= 0)
        throw Error(ErrorKind::InvalidArgument, "p-adic radius must be an exact positive power of p");
    const Rational& q = radius.exact_value();
    Integer n = numerator(q), d = denominator(q);
    auto log_p = [&](Integer x) -> int {
        int k = 0;
        while (x > 1) {
            if (x % prime != 0) return -1;
            x /= prime;
            ++k;
        }
        return k;
    };
    if (d == 1) {
        int k = log_p(n);
        if (k >= 0) return k;
    } else if (n == 1) {
        int k = log_p(d);
        if (k >= 0) return -k;
    }
    throw Error(ErrorKind::InvalidArgument,
                "p-adic radius " + radius.to_string() + " is not a power of " + std::to_string(prime));
}

int padic_digits_certified(std::int64_t prime, const Magnitude& bound) {
    if (bound.is_zero()) return Scalar::kInfinitePrecision;
    if (!bound.is_exact()) return static_cast<int>(std::floor(-std::log(bound.to_double()) / std::log(double(prime))));
    Integer n = numerator(bound.exact_value()), d = denominator(bound.exact_value());
    // largest k with d >= n * p^k
    int k = 0;
    if (d >= n) {
        Integer scaled = n * prime;
        while (d >= scaled) {
            ++k;
            scaled *= prime;
        }
    } else {
        Integer scaled = d;
        while (scaled < n) {
            --k;
            scaled *= prime;
        }
    }
    return k;
}

void require_same_field(const FieldDescriptor& a, const FieldDescriptor& b) {
    if (!(a == b)) throw Error(ErrorKind::FieldMismatch, "operands live in different fields: " + a.to_string() + " vs " + b.to_string());
}

// ---------------------------------------------------------------------------

const Scalar::Padic& Scalar::padic() const {
    if (field_.kind != FieldKind::padic) throw Error(ErrorKind::InvalidArgument, "not a p-adic scalar");
    return std::get<Padic>(value_);
}

Scalar Scalar::padic_zero(const FieldDescriptor& field, int absolute_precision) {
    return Scalar(field, Padic{absolute_precision, 0, 0});
}

Scalar Scalar::padic_normalized(const FieldDescriptor& field, int vmin, std::int64_t residue,
                                int absolute_precision) {
    if (residue == 0) return padic_zero(field, absolute_precision);
    int s = valuation_of(residue, field.prime);
    std::int64_t u = residue / ipow(field.prime, s);
    int v = vmin + s;
    int k = std::min(absolute_precision - v, field.precision);
    u %= ipow(field.prime, k);
    return Scalar(field, Padic{v, u, k});
}

Scalar Scalar::zero(const FieldDescriptor& field) {
    switch (field.kind) {
        case FieldKind::padic: return padic_zero(field, kInfinitePrecision);
        case FieldKind::real: return Scalar(field, 0.0);
        case FieldKind::rational: return Scalar(field, Rational(0));
    }
    throw Error(ErrorKind::InvalidField, "unknown field kind");
}

Scalar Scalar::one(const FieldDescriptor& field) { return from_int(field, 1); }

Scalar Scalar::from_int(const FieldDescriptor& field, long long n) { return from_rational(field, Rational(n)); }

Scalar Scalar::from_rational(const FieldDescriptor& field, const Rational& q) {
    switch (field.kind) {
        case FieldKind::real: return Scalar(field, q.convert_to<double>());
        case FieldKind::rational: return Scalar(field, q);
        case FieldKind::padic: break;
    }
    if (q == 0) return zero(field);
    const std::int64_t p = field.prime;
    Integer n = numerator(q), d = denominator(q);
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    while (d % p == 0) {
        d /= p;
        --v;
    }
    const std::int64_t m = ipow(p, field.precision);
    Integer nm = n % m;
    if (nm < 0) nm += m;
    Integer dm = d % m;
    std::int64_t u = mulmod(nm.convert_to<std::int64_t>(), invmod(dm.convert_to<std::int64_t>(), m), m);
    Scalar out(field, Padic{v, u, field.precision});
    out.exact_ = std::make_shared<const Rational>(q);
    return out;
}

Scalar Scalar::from_double(const FieldDescriptor& field, double x) {
    if (!std::isfinite(x)) throw Error(ErrorKind::InvalidArgument, "non-finite scalar");
    if (field.kind == FieldKind::real) return Scalar(field, x);
    return from_rational(field, Rational(x));
}

Scalar Scalar::from_padic_digits(const FieldDescriptor& field, int start,
                                 std::span<const std::int64_t> digits) {
    if (field.kind != FieldKind::padic) throw Error(ErrorKind::InvalidArgument, "digit encoding needs a p-adic field");
    const std::int64_t p = field.prime;
    for (auto d : digits)
        if (d < 0 || d >= p) throw Error(ErrorKind::InvalidArgument, "p-adic digit out of range: " + std::to_string(d));
    std::size_t first = 0;
    while (first < digits.size() && digits[first] == 0) ++first;
    const int ap = start + static_cast<int>(digits.size());
    if (first == digits.size()) return padic_zero(field, ap);
    int k = std::min(static_cast<int>(digits.size() - first), field.precision);
    std::int64_t u = 0, pk = 1;
    for (int i = 0; i < k; ++i) {
        u += digits[first + i] * pk;
        pk *= p;
    }
    return Scalar(field, Padic{start + static_cast<int>(first), u, k});
}

Magnitude Scalar::abs() const {
    switch (field_.kind) {
        case FieldKind::real: return Magnitude(std::abs(std::get<double>(value_)));
        case FieldKind::rational: return Magnitude(Rational(boost::multiprecision::abs(std::get<Rational>(value_))));
        case FieldKind::padic: break;
    }
    const Padic& x = padic();
    if (x.digits == 0) return Magnitude(Rational(0));
    return padic_radius(field_.prime, -x.valuation);
}

Magnitude Scalar::abs_upper() const {
    if (field_.kind == FieldKind::padic && padic().digits == 0 && !is_exact_zero())
        return padic_radius(field_.prime, -padic().valuation);
    return abs();
}

bool Scalar::is_zero() const {
    switch (field_.kind) {
        case FieldKind::real: return std::get<double>(value_) == 0.0;
        case FieldKind::rational: return std::get<Rational>(value_) == 0;
        case FieldKind::padic: return padic().digits == 0;
    }
    return false;
}

bool Scalar::is_exact_zero() const {
    if (field_.kind == FieldKind::padic) return padic().digits == 0 && padic().valuation >= kInfinitePrecision;
    return is_zero();
}

int Scalar::valuation() const {
    const Padic& x = padic();
    return x.digits == 0 ? kInfinitePrecision : x.valuation;
}

int Scalar::absolute_precision() const {
    const Padic& x = padic();
    return x.digits == 0 ? x.valuation : x.valuation + x.digits;
}

int Scalar::relative_precision() const { return padic().digits; }

std::int64_t Scalar::unit() const { return padic().unit; }

std::vector<std::int64_t> Scalar::unit_digits() const {
    const Padic& x = padic();
    std::vector<std::int64_t> out;
    std::int64_t u = x.unit;
    for (int i = 0; i < x.digits; ++i) {
        out.push_back(u % field_.prime);
        u /= field_.prime;
    }
    return out;
}

int Scalar::valuation_floor() const {
    const Padic& x = padic();
    return x.valuation;
}

Scalar Scalar::with_absolute_precision(int ap) const {
    const Padic& x = padic();
    if (x.digits == 0) return padic_zero(field_, std::min(x.valuation, ap));
    if (x.valuation >= ap) return padic_zero(field_, ap);
    int k = std::min(x.digits, ap - x.valuation);
    return Scalar(field_, Padic{x.valuation, x.unit % ipow(field_.prime, k), k});
}

Integer Scalar::residue(int k) const {
    const Padic& x = padic();
    if (absolute_precision() < k)
        throw Error(ErrorKind::PrecisionExhausted, "residue modulo p^" + std::to_string(k) + " requested beyond known precision " + to_string());
    if (x.digits == 0) return 0;
    if (x.valuation < 0) throw Error(ErrorKind::InvalidArgument, "residue of a non-integral p-adic number");
    if (x.valuation >= k) return 0;
    Integer pk = boost::multiprecision::pow(Integer(field_.prime), static_cast<unsigned>(k));
    return (Integer(x.unit) * boost::multiprecision::pow(Integer(field_.prime), static_cast<unsigned>(x.valuation))) % pk;
}

double Scalar::to_double() const {
    switch (field_.kind) {
        case FieldKind::real: return std::get<double>(value_);
        case FieldKind::rational: return std::get<Rational>(value_).convert_to<double>();
        case FieldKind::padic: break;
    }
    throw Error(ErrorKind::InvalidArgument, "a p-adic number has no real value");
}

const Rational& Scalar::rational_value() const {
    if (field_.kind != FieldKind::rational) throw Error(ErrorKind::InvalidArgument, "not a rational scalar");
    return std::get<Rational>(value_);
}

Scalar Scalar::operator-() const {
    switch (field_.kind) {
        case FieldKind::real: return Scalar(field_, -std::get<double>(value_));
        case FieldKind::rational: return Scalar(field_, Rational(-std::get<Rational>(value_)));
        case FieldKind::padic: break;
    }
    const Padic& x = padic();
    if (x.digits == 0) return *this;
    Scalar out(field_, Padic{x.valuation, ipow(field_.prime, x.digits) - x.unit, x.digits});
    if (exact_) out.exact_ = std::make_shared<const Rational>(-*exact_);
    return out;
}

Scalar operator+(const Scalar& a, const Scalar& b) {
    require_same_field(a.field_, b.field_);
    const FieldDescriptor& f = a.field_;
    switch (f.kind) {
        case FieldKind::real: return Scalar(f, std::get<double>(a.value_) + std::get<double>(b.value_));
        case FieldKind::rational: return Scalar(f, Rational(std::get<Rational>(a.value_) + std::get<Rational>(b.value_)));
        case FieldKind::padic: break;
    }
    if (a.is_exact_zero()) return b;
    if (b.is_exact_zero()) return a;
    if (a.exact_ && b.exact_) {
        Rational q = *a.exact_ + *b.exact_;
        if (small_enough(q)) return Scalar::from_rational(f, q);
    }
    const auto& x = a.padic();
    const auto& y = b.padic();
    const int ap = std::min(a.absolute_precision(), b.absolute_precision());
    if (x.digits == 0 && y.digits == 0) return Scalar::padic_zero(f, ap);
    int vmin = Scalar::kInfinitePrecision;
    if (x.digits) vmin = std::min(vmin, x.valuation);
    if (y.digits) vmin = std::min(vmin, y.valuation);
    if (vmin >= ap) return Scalar::padic_zero(f, ap);
    const int width = ap - vmin;
    const std::int64_t m = ipow(f.prime, width);
    auto term = [&](const Scalar::Padic& z) -> std::int64_t {
        if (z.digits == 0 || z.valuation - vmin >= width) return 0;
        return mulmod(z.unit % m, ipow(f.prime, z.valuation - vmin), m);
    };
    std::int64_t r = (term(x) + term(y)) % m;
    return Scalar::padic_normalized(f, vmin, r, ap);
}

Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

Scalar operator*(const Scalar& a, const Scalar& b) {
    require_same_field(a.field_, b.field_);
    const FieldDescriptor& f = a.field_;
    switch (f.kind) {
        case FieldKind::real: return Scalar(f, std::get<double>(a.value_) * std::get<double>(b.value_));
        case FieldKind::rational: return Scalar(f, Rational(std::get<Rational>(a.value_) * std::get<Rational>(b.value_)));
        case FieldKind::padic: break;
    }
    if (a.is_exact_zero() || b.is_exact_zero()) return Scalar::zero(f);
    if (a.exact_ && b.exact_) {
        Rational q = *a.exact_ * *b.exact_;
        if (small_enough(q)) return Scalar::from_rational(f, q);
    }
    const auto& x = a.padic();
    const auto& y = b.padic();
    if (x.digits == 0 || y.digits == 0) return Scalar::padic_zero(f, x.valuation + y.valuation);
    const int k = std::min(x.digits, y.digits);
    const std::int64_t m = ipow(f.prime, k);
    return Scalar(f, Scalar::Padic{x.valuation + y.valuation, mulmod(x.unit % m, y.unit % m, m), k});
}

Scalar operator/(const Scalar& a, const Scalar& b) {
    require_same_field(a.field_, b.field_);
    const FieldDescriptor& f = a.field_;
    if (b.is_exact_zero()) throw Error(ErrorKind::DivisionByZero, "division by zero");
    switch (f.kind) {
        case FieldKind::real: return Scalar(f, std::get<double>(a.value_) / std::get<double>(b.value_));
        case FieldKind::rational: return Scalar(f, Rational(std::get<Rational>(a.value_) / std::get<Rational>(b.value_)));
        case FieldKind::padic: break;
    }
    const auto& x = a.padic();
    const auto& y = b.padic();
    if (y.digits == 0)
        throw Error(ErrorKind::PrecisionExhausted, "divisor " + b.to_string() + " has no known significant digits");
    if (a.is_exact_zero()) return a;
    if (a.exact_ && b.exact_) {
        Rational q = *a.exact_ / *b.exact_;
        if (small_enough(q)) return Scalar::from_rational(f, q);
    }
    if (x.digits == 0) return Scalar::padic_zero(f, x.valuation - y.valuation);
    const int k = std::min(x.digits, y.digits);
    const std::int64_t m = ipow(f.prime, k);
    return Scalar(f, Scalar::Padic{x.valuation - y.valuation, mulmod(x.unit % m, invmod(y.unit % m, m), m), k});
}

Scalar Scalar::pow(unsigned exponent) const {
    Scalar result = one(field_);
    Scalar base = *this;
    while (exponent) {
        if (exponent & 1u) result *= base;
        exponent >>= 1;
        if (exponent) base *= base;
    }
    return result;
}

std::string Scalar::to_string() const {
    switch (field_.kind) {
        case FieldKind::real: return Magnitude(std::get<double>(value_)).to_string();
        case FieldKind::rational: return ultrafix::to_string(std::get<Rational>(value_));
        case FieldKind::padic: break;
    }
    const Padic& x = padic();
    const std::string p = std::to_string(field_.prime);
    if (x.digits == 0) {
        if (x.valuation >= kInfinitePrecision) return "0";
        return "O(" + p + "^" + std::to_string(x.valuation) + ")";
    }
    return std::to_string(x.unit) + "*" + p + "^" + std::to_string(x.valuation) + " + O(" + p + "^" +
           std::to_string(x.valuation + x.digits) + ")";
}

bool same_at_precision(const Scalar& a, const Scalar& b) {
    require_same_field(a.field(), b.field());
    switch (a.field().kind) {
        case FieldKind::padic: return (a - b).is_zero();
        case FieldKind::rational: return a.rational_value() == b.rational_value();
        case FieldKind::real: {
            double x = a.to_double(), y = b.to_double();
            double scale = std::max({1.0, std::abs(x), std::abs(y)});
            return std::abs(x - y) <= a.field().tolerance * scale;
        }
    }
    return false;
}

}  // namespace ultrafix
