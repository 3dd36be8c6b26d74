#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <variant>

#include <boost/multiprecision/cpp_int.hpp>

namespace ultrafix {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parse "n", "n/d", or a finite decimal such as "-0.125" or "1e-3" into an
/// exact rational. Throws Error(InvalidArgument) on malformed input.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

/// A non-negative real number used for norms, radii and certificate constants.
///
/// Exact fields (p-adic, rational) produce exact magnitudes: every p-adic
/// absolute value is a power of p, so norms, contraction constants and the
/// derived certificate constants are rationals and compare without rounding.
/// The real backend produces floating magnitudes. Mixed arithmetic degrades
/// to floating point.
class Magnitude {
public:
    Magnitude() : value_(Rational(0)) {}
    explicit Magnitude(Rational q) : value_(std::move(q)) {}
    explicit Magnitude(double x) : value_(x) {}
    static Magnitude exact(long long n, long long d = 1) { return Magnitude(Rational(n, d)); }

    bool is_exact() const noexcept { return std::holds_alternative<Rational>(value_); }
    const Rational& exact_value() const;
    double to_double() const;
    bool is_zero() const;

    /// Exact values print as "n" or "n/d"; floating values as the shortest
    /// round-trip decimal.
    std::string to_string() const;

    friend Magnitude operator+(const Magnitude& a, const Magnitude& b);
    friend Magnitude operator-(const Magnitude& a, const Magnitude& b);
    friend Magnitude operator*(const Magnitude& a, const Magnitude& b);
    friend Magnitude operator/(const Magnitude& a, const Magnitude& b);
    Magnitude& operator+=(const Magnitude& o) { return *this = *this + o; }
    Magnitude& operator*=(const Magnitude& o) { return *this = *this * o; }

    friend std::partial_ordering operator<=>(const Magnitude& a, const Magnitude& b);
    friend bool operator==(const Magnitude& a, const Magnitude& b) {
        return (a <=> b) == std::partial_ordering::equivalent;
    }

private:
    std::variant<Rational, double> value_;
};

Magnitude pow(const Magnitude& base, int exponent);
inline const Magnitude& max(const Magnitude& a, const Magnitude& b) { return a < b ? b : a; }
inline const Magnitude& min(const Magnitude& a, const Magnitude& b) { return b < a ? b : a; }

/// True when `actual <= bound` up to `rel` relative and absolute slack.
/// Exact operands are compared exactly.
bool within(const Magnitude& actual, const Magnitude& bound, double rel);

}  // namespace ultrafix
