#include "ultrafix/magnitude.hpp"

#include <charconv>
#include <cmath>

#include "ultrafix/errors.hpp"

namespace ultrafix {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DivisionByZero: return "DivisionByZero";
        case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
        case ErrorKind::FieldMismatch: return "FieldMismatch";
        case ErrorKind::InvalidField: return "InvalidField";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::SingularMatrix: return "SingularMatrix";
        case ErrorKind::NotAContraction: return "NotAContraction";
        case ErrorKind::DomainViolation: return "DomainViolation";
        case ErrorKind::NotAdmissible: return "NotAdmissible";
        case ErrorKind::DomainEscape: return "DomainEscape";
        case ErrorKind::NotConverged: return "NotConverged";
        case ErrorKind::NotAFixedPoint: return "NotAFixedPoint";
        case ErrorKind::SingularA: return "SingularA";
        case ErrorKind::NotCertifiable: return "NotCertifiable";
        case ErrorKind::TargetOutsideGuarantee: return "TargetOutsideGuarantee";
        case ErrorKind::OutsideWindow: return "OutsideWindow";
        case ErrorKind::WindowNotFound: return "WindowNotFound";
        case ErrorKind::IdentityFailure: return "IdentityFailure";
    }
    return "Unknown";
}

namespace {

[[noreturn]] void bad_rational(std::string_view text) {
    throw Error(ErrorKind::InvalidArgument, "malformed rational: '" + std::string(text) + "'");
}

Integer parse_integer(std::string_view text, std::string_view whole) {
    if (text.empty()) bad_rational(whole);
    bool negative = false;
    std::size_t i = 0;
    if (text[0] == '+' || text[0] == '-') {
        negative = text[0] == '-';
        i = 1;
    }
    if (i == text.size()) bad_rational(whole);
    Integer value = 0;
    for (; i < text.size(); ++i) {
        if (text[i] < '0' || text[i] > '9') bad_rational(whole);
        value = value * 10 + (text[i] - '0');
    }
    return negative ? Integer(-value) : value;
}

Rational parse_decimal(std::string_view text) {
    std::string_view mantissa = text;
    long exponent = 0;
    if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
        mantissa = text.substr(0, e);
        Integer ex = parse_integer(text.substr(e + 1), text);
        if (ex > 4000 || ex < -4000) bad_rational(text);
        exponent = ex.convert_to<long>();
    }
    bool negative = !mantissa.empty() && mantissa[0] == '-';
    if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) mantissa.remove_prefix(1);
    std::string digits;
    long frac = 0;
    bool dot = false;
    for (char c : mantissa) {
        if (c == '.') {
            if (dot) bad_rational(text);
            dot = true;
        } else if (c >= '0' && c <= '9') {
            digits.push_back(c);
            if (dot) ++frac;
        } else {
            bad_rational(text);
        }
    }
    if (digits.empty()) bad_rational(text);
    Integer n = parse_integer(digits, text);
    if (negative) n = -n;
    exponent -= frac;
    Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(std::labs(exponent)));
    return exponent >= 0 ? Rational(n * scale) : Rational(n, scale);
}

}  // namespace

Rational parse_rational(std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (text.empty()) bad_rational(text);
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Integer num = parse_integer(text.substr(0, slash), text);
        Integer den = parse_integer(text.substr(slash + 1), text);
        if (den == 0) throw Error(ErrorKind::DivisionByZero, "zero denominator in '" + std::string(text) + "'");
        return Rational(num, den);
    }
    if (text.find_first_of(".eE") != std::string_view::npos) return parse_decimal(text);
    return Rational(parse_integer(text, text));
}

std::string to_string(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

const Rational& Magnitude::exact_value() const {
    if (!is_exact()) throw Error(ErrorKind::InvalidArgument, "magnitude is not exact");
    return std::get<Rational>(value_);
}

double Magnitude::to_double() const {
    if (is_exact()) return std::get<Rational>(value_).convert_to<double>();
    return std::get<double>(value_);
}

bool Magnitude::is_zero() const {
    if (is_exact()) return std::get<Rational>(value_) == 0;
    return std::get<double>(value_) == 0.0;
}

std::string Magnitude::to_string() const {
    if (is_exact()) return ultrafix::to_string(std::get<Rational>(value_));
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, std::get<double>(value_));
    return std::string(buf, res.ptr);
}

namespace {

template <class Op>
Magnitude combine(const Magnitude& a, const Magnitude& b, Op op) {
    if (a.is_exact() && b.is_exact()) return Magnitude(Rational(op(a.exact_value(), b.exact_value())));
    return Magnitude(static_cast<double>(op(a.to_double(), b.to_double())));
}

}  // namespace

Magnitude operator+(const Magnitude& a, const Magnitude& b) {
    return combine(a, b, [](const auto& x, const auto& y) { return x + y; });
}

Magnitude operator-(const Magnitude& a, const Magnitude& b) {
    return combine(a, b, [](const auto& x, const auto& y) { return x - y; });
}

Magnitude operator*(const Magnitude& a, const Magnitude& b) {
    return combine(a, b, [](const auto& x, const auto& y) { return x * y; });
}

Magnitude operator/(const Magnitude& a, const Magnitude& b) {
    if (b.is_zero()) throw Error(ErrorKind::DivisionByZero, "magnitude division by zero");
    return combine(a, b, [](const auto& x, const auto& y) { return x / y; });
}

std::partial_ordering operator<=>(const Magnitude& a, const Magnitude& b) {
    if (a.is_exact() && b.is_exact()) {
        const Rational& x = a.exact_value();
        const Rational& y = b.exact_value();
        if (x < y) return std::partial_ordering::less;
        if (y < x) return std::partial_ordering::greater;
        return std::partial_ordering::equivalent;
    }
    return a.to_double() <=> b.to_double();
}

Magnitude pow(const Magnitude& base, int exponent) {
    if (base.is_exact()) {
        const Rational& q = base.exact_value();
        if (exponent >= 0) {
            return Magnitude(Rational(boost::multiprecision::pow(numerator(q), exponent),
                                      boost::multiprecision::pow(denominator(q), exponent)));
        }
        if (q == 0) throw Error(ErrorKind::DivisionByZero, "zero to a negative power");
        return Magnitude(Rational(boost::multiprecision::pow(denominator(q), -exponent),
                                  boost::multiprecision::pow(numerator(q), -exponent)));
    }
    return Magnitude(std::pow(base.to_double(), exponent));
}

bool within(const Magnitude& actual, const Magnitude& bound, double rel) {
    if (actual.is_exact() && bound.is_exact()) return actual <= bound;
    double a = actual.to_double();
    double b = bound.to_double();
    return a <= b + rel * std::max(1.0, std::abs(b));
}

}  // namespace ultrafix
