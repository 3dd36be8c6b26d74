#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ultrafix/errors.hpp"
#include "ultrafix/magnitude.hpp"

namespace ultrafix {

enum class FieldKind { padic, real, rational };

/// The valued field a computation runs over.
///
/// `padic`: Q_p with capped relative precision `precision` (N base-p digits).
/// `real`: IEEE doubles compared with a relative `tolerance`.
/// `rational`: exact Q with the ordinary absolute value. It is archimedean
/// like `real` but exact, which makes it the field of choice for identity
/// checks that must hold with zero residual.
struct FieldDescriptor {
    FieldKind kind = FieldKind::real;
    std::int64_t prime = 0;
    int precision = 0;
    double tolerance = 1e-9;

    static FieldDescriptor padic(std::int64_t prime, int precision);
    static FieldDescriptor real(double tolerance = 1e-9);
    static FieldDescriptor rational();

    bool ultrametric() const noexcept { return kind == FieldKind::padic; }
    bool exact() const noexcept { return kind != FieldKind::real; }
    std::string to_string() const;

    friend bool operator==(const FieldDescriptor&, const FieldDescriptor&) = default;
};

bool is_prime(std::int64_t n);

/// The radius p^k as an exact magnitude.
Magnitude padic_radius(std::int64_t prime, int exponent);
/// The exponent k when `radius` is exactly p^k; throws InvalidArgument otherwise.
int padic_radius_exponent(std::int64_t prime, const Magnitude& radius);
/// Largest k with p^{-k} >= bound, i.e. |x - y| <= bound implies x = y mod p^k.
int padic_digits_certified(std::int64_t prime, const Magnitude& bound);

/// An element of a valued field.
///
/// p-adic scalars are stored as p^v * u with a unit u known modulo p^k
/// (k <= N relative digits); the known absolute precision is v + k. A zero is
/// either exact, or "zero at tracked precision" O(p^a) when cancellation has
/// consumed every known digit. Arithmetic propagates precision pessimistically
/// so a result never claims digits it does not know.
class Scalar {
public:
    static constexpr int kInfinitePrecision = std::numeric_limits<int>::max() / 4;

    Scalar() : field_(FieldDescriptor::real()), value_(0.0) {}

    static Scalar zero(const FieldDescriptor& field);
    static Scalar one(const FieldDescriptor& field);
    static Scalar from_int(const FieldDescriptor& field, long long n);
    /// Exact embedding of a rational; p-adic results carry the full N digits.
    static Scalar from_rational(const FieldDescriptor& field, const Rational& q);
    static Scalar from_double(const FieldDescriptor& field, double x);
    /// p-adic value sum_i digits[i] * p^(start + i) known modulo p^(start + digits.size()).
    static Scalar from_padic_digits(const FieldDescriptor& field, int start,
                                    std::span<const std::int64_t> digits);
    /// p-adic zero known only modulo p^absolute_precision.
    static Scalar padic_zero(const FieldDescriptor& field, int absolute_precision);

    const FieldDescriptor& field() const noexcept { return field_; }

    Magnitude abs() const;
    /// Upper bound for the true |x|: a p-adic zero known modulo p^a gives p^{-a}.
    Magnitude abs_upper() const;
    bool is_zero() const;
    bool is_exact_zero() const;

    // p-adic accessors. valuation() is kInfinitePrecision for zeros.
    int valuation() const;
    int absolute_precision() const;
    int relative_precision() const;
    std::int64_t unit() const;
    std::vector<std::int64_t> unit_digits() const;
    /// Lower bound for the true valuation: v when nonzero, the absolute
    /// precision when zero at tracked precision.
    int valuation_floor() const;
    /// The rational this p-adic value is known to equal exactly, if any.
    /// Embeddings of rationals carry it, and arithmetic keeps it while both
    /// operands have one and the result stays small, so cancellations between
    /// exact inputs give exact zeros instead of zeros at tracked precision.
    const Rational* exact_rational() const noexcept { return exact_.get(); }
    /// Forget every digit at or beyond p^absolute_precision.
    Scalar with_absolute_precision(int absolute_precision) const;
    /// Value modulo p^k as an integer in [0, p^k); requires valuation_floor >= 0
    /// and absolute_precision >= k.
    Integer residue(int k) const;

    double to_double() const;
    const Rational& rational_value() const;

    Scalar operator-() const;
    friend Scalar operator+(const Scalar& a, const Scalar& b);
    friend Scalar operator-(const Scalar& a, const Scalar& b);
    friend Scalar operator*(const Scalar& a, const Scalar& b);
    friend Scalar operator/(const Scalar& a, const Scalar& b);
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    Scalar pow(unsigned exponent) const;
    std::string to_string() const;

private:
    struct Padic {
        int valuation;        // holds the absolute precision when digits == 0
        std::int64_t unit;    // in [1, p^digits), not divisible by p
        int digits;           // relative precision; 0 means zero
    };

    Scalar(const FieldDescriptor& field, Padic p) : field_(field), value_(p) {}
    Scalar(const FieldDescriptor& field, double x) : field_(field), value_(x) {}
    Scalar(const FieldDescriptor& field, Rational q) : field_(field), value_(std::move(q)) {}

    const Padic& padic() const;
    static Scalar padic_normalized(const FieldDescriptor& field, int vmin, std::int64_t residue,
                                   int absolute_precision);

    FieldDescriptor field_;
    std::variant<Padic, double, Rational> value_;
    std::shared_ptr<const Rational> exact_;
};

/// Equality at tracked precision: p-adic difference is zero at its known
/// precision, rationals compare exactly, reals within the field tolerance.
bool same_at_precision(const Scalar& a, const Scalar& b);

void require_same_field(const FieldDescriptor& a, const FieldDescriptor& b);

}  // namespace ultrafix
