#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "ultrafix/linalg.hpp"

namespace ultrafix {

using Exponent = std::vector<unsigned>;

/// A polynomial in `vars` variables with exact rational coefficients.
/// Zero coefficients are never stored.
class Polynomial {
public:
    explicit Polynomial(std::size_t vars = 0) : vars_(vars) {}

    static Polynomial constant(std::size_t vars, const Rational& c);
    static Polynomial variable(std::size_t vars, std::size_t i);
    static Polynomial monomial(const Rational& c, Exponent e);

    std::size_t vars() const noexcept { return vars_; }
    const std::map<Exponent, Rational>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    unsigned degree() const;

    void add_term(const Rational& c, const Exponent& e);

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Rational& c, const Polynomial& a);
    friend bool operator==(const Polynomial& a, const Polynomial& b) = default;
    Polynomial pow(unsigned k) const;

    Polynomial derivative(std::size_t i) const;
    /// Replace variable i by subs[i]; all of subs share one variable count.
    Polynomial substitute(const std::vector<Polynomial>& subs) const;
    /// Divide by variable i; every term must contain it.
    Polynomial divide_by_variable(std::size_t i) const;

    Scalar evaluate(const Vector& x) const;
    /// Coefficients of p(center + h) as a polynomial in h, in field arithmetic.
    std::map<Exponent, Scalar> taylor_shift(const Vector& center) const;

private:
    std::size_t vars_;
    std::map<Exponent, Rational> terms_;
};

}  // namespace ultrafix
