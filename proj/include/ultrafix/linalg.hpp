#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ultrafix/field.hpp"

namespace ultrafix {

/// An element of K^n with the max norm.
class Vector {
public:
    Vector() = default;
    Vector(FieldDescriptor field, std::vector<Scalar> components);

    static Vector zeros(const FieldDescriptor& field, std::size_t n);
    static Vector basis(const FieldDescriptor& field, std::size_t n, std::size_t j);
    static Vector from_rationals(const FieldDescriptor& field, const std::vector<Rational>& values);

    const FieldDescriptor& field() const noexcept { return field_; }
    std::size_t size() const noexcept { return components_.size(); }
    const Scalar& operator[](std::size_t i) const { return components_[i]; }
    Scalar& operator[](std::size_t i) { return components_[i]; }
    const std::vector<Scalar>& components() const noexcept { return components_; }

    Vector operator-() const;
    friend Vector operator+(const Vector& a, const Vector& b);
    friend Vector operator-(const Vector& a, const Vector& b);
    friend Vector operator*(const Scalar& s, const Vector& v);

    /// Concatenation (x, y) used for product spaces P x U.
    friend Vector concat(const Vector& a, const Vector& b);
    Vector slice(std::size_t begin, std::size_t count) const;

private:
    FieldDescriptor field_ = FieldDescriptor::real();
    std::vector<Scalar> components_;
};

/// max_i |v_i|.
Magnitude norm(const Vector& v);
/// Like norm, but a p-adic zero known only modulo p^a counts as p^{-a}, so
/// the result bounds the true norm from above.
Magnitude norm_upper(const Vector& v);
/// Every component equal at tracked precision.
bool same_at_precision(const Vector& a, const Vector& b);

/// An n x m matrix, i.e. a linear map K^m -> K^n.
class Operator {
public:
    Operator() = default;
    Operator(FieldDescriptor field, std::size_t rows, std::size_t cols);
    Operator(FieldDescriptor field, std::size_t rows, std::size_t cols, std::vector<Scalar> entries);

    static Operator identity(const FieldDescriptor& field, std::size_t n);
    static Operator from_rationals(const FieldDescriptor& field,
                                   const std::vector<std::vector<Rational>>& rows);

    const FieldDescriptor& field() const noexcept { return field_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }
    const Scalar& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    Scalar& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    Vector column(std::size_t j) const;

    Vector apply(const Vector& v) const;
    friend Operator operator*(const Operator& a, const Operator& b);
    friend Operator operator+(const Operator& a, const Operator& b);
    friend Operator operator-(const Operator& a, const Operator& b);
    friend Operator operator*(const Scalar& s, const Operator& a);
    Operator operator-() const;

    bool is_zero() const;
    /// Entry-wise equality at tracked precision.
    friend bool same_at_precision(const Operator& a, const Operator& b);

private:
    FieldDescriptor field_ = FieldDescriptor::real();
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Scalar> entries_;
};

/// Exact operator norm for the max norm: max_{i,j} |a_ij| over an
/// ultrametric field, max row sum otherwise.
Magnitude operator_norm(const Operator& a);

/// Gauss-Jordan elimination pivoting on the entry of largest absolute value.
/// Throws SingularMatrix when no usable pivot remains.
Operator invert_exact(const Operator& a);

struct NeumannResult {
    Operator inverse;             ///< (id - alpha)^{-1}
    Magnitude bound;              ///< 1 / (1 - ||alpha||)
    Magnitude truncation_error;   ///< bound on the dropped tail
    std::size_t terms = 0;        ///< number of powers summed, alpha^0 included
};

/// (id - alpha)^{-1} as the partial sum of alpha^k.
///
/// p-adic: summing stops once every entry of alpha^K is divisible by a power
/// of p at or beyond the precision the partial sum actually knows; entries are
/// then cut to that precision. Real and rational: stops when ||alpha^K|| drops
/// below 1e-15 (or is exactly zero) or after 200 terms.
/// Throws NotAContraction when ||alpha|| >= 1.
NeumannResult neumann_invert(const Operator& alpha);

enum class IsometryClass { in_omega, isometry, neither };
std::string_view to_string(IsometryClass c);

struct IsometryReport {
    IsometryClass classification = IsometryClass::neither;
    Magnitude distance_to_identity;   ///< ||id - alpha||
    bool exact_isometry = false;      ///< ||alpha|| <= 1 and ||alpha^{-1}|| <= 1
    bool sampled_isometry = false;    ///< ||alpha u|| = ||u|| on every sample
    std::size_t samples = 0;
};

/// Ultrametric only. in_omega iff ||id - alpha|| < 1. The exact criterion is
/// cross-checked on the basis vectors plus `samples` seeded random vectors.
IsometryReport classify_isometry(const Operator& alpha, std::size_t samples = 64, std::uint64_t seed = 0);

/// Center and radius. p-adic radii must be powers of p.
struct Ball {
    Vector center;
    Magnitude radius;
    bool closed = true;

    Ball() = default;
    Ball(Vector center, Magnitude radius, bool closed = true);

    const FieldDescriptor& field() const noexcept { return center.field(); }
    std::size_t dim() const noexcept { return center.size(); }
    /// Membership certified at tracked precision.
    bool contains(const Vector& v) const;
    /// For p-adic balls: the exponent k with closed radius p^k (an open ball
    /// of radius p^k is the closed ball of radius p^{k-1}).
    int closed_exponent() const;
};

}  // namespace ultrafix
