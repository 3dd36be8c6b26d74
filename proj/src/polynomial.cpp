#include "ultrafix/polynomial.hpp"

#include <algorithm>
#include <numeric>

namespace ultrafix {

namespace {

Integer binomial(unsigned n, unsigned k) {
    Integer r = 1;
    for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

Polynomial Polynomial::constant(std::size_t vars, const Rational& c) {
    Polynomial p(vars);
    p.add_term(c, Exponent(vars, 0));
    return p;
}

Polynomial Polynomial::variable(std::size_t vars, std::size_t i) {
    Exponent e(vars, 0);
    e.at(i) = 1;
    return monomial(1, e);
}

Polynomial Polynomial::monomial(const Rational& c, Exponent e) {
    Polynomial p(e.size());
    p.add_term(c, e);
    return p;
}

unsigned Polynomial::degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0u));
    return d;
}

void Polynomial::add_term(const Rational& c, const Exponent& e) {
    if (e.size() != vars_) throw Error(ErrorKind::DimensionMismatch, "exponent length does not match variable count");
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    if (a.vars_ != b.vars_) throw Error(ErrorKind::DimensionMismatch, "polynomials in different variable counts");
    Polynomial r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(c, e);
    return r;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + Rational(-1) * b; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.vars_ != b.vars_) throw Error(ErrorKind::DimensionMismatch, "polynomials in different variable counts");
    Polynomial r(a.vars_);
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            Exponent e(a.vars_);
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r.add_term(ca * cb, e);
        }
    return r;
}

Polynomial operator*(const Rational& c, const Polynomial& a) {
    Polynomial r(a.vars_);
    for (const auto& [e, x] : a.terms_) r.add_term(c * x, e);
    return r;
}

Polynomial Polynomial::pow(unsigned k) const {
    Polynomial r = constant(vars_, 1);
    Polynomial base = *this;
    while (k) {
        if (k & 1u) r = r * base;
        k >>= 1;
        if (k) base = base * base;
    }
    return r;
}

Polynomial Polynomial::derivative(std::size_t i) const {
    Polynomial r(vars_);
    for (const auto& [e, c] : terms_) {
        if (e[i] == 0) continue;
        Exponent d = e;
        --d[i];
        r.add_term(c * e[i], d);
    }
    return r;
}

Polynomial Polynomial::substitute(const std::vector<Polynomial>& subs) const {
    if (subs.size() != vars_) throw Error(ErrorKind::DimensionMismatch, "substitution needs one polynomial per variable");
    const std::size_t target = subs.empty() ? 0 : subs.front().vars();
    Polynomial r(target);
    for (const auto& [e, c] : terms_) {
        Polynomial term = constant(target, c);
        for (std::size_t i = 0; i < vars_; ++i)
            if (e[i]) term = term * subs[i].pow(e[i]);
        r = r + term;
    }
    return r;
}

Polynomial Polynomial::divide_by_variable(std::size_t i) const {
    Polynomial r(vars_);
    for (const auto& [e, c] : terms_) {
        if (e[i] == 0) throw Error(ErrorKind::InvalidArgument, "polynomial is not divisible by the variable");
        Exponent d = e;
        --d[i];
        r.add_term(c, d);
    }
    return r;
}

Scalar Polynomial::evaluate(const Vector& x) const {
    if (x.size() != vars_) throw Error(ErrorKind::DimensionMismatch, "evaluation point has the wrong dimension");
    const FieldDescriptor& f = x.field();
    // Powers are cached per variable so each monomial costs one product per variable.
    std::vector<std::vector<Scalar>> powers(vars_);
    Scalar sum = Scalar::zero(f);
    for (const auto& [e, c] : terms_) {
        Scalar term = Scalar::from_rational(f, c);
        for (std::size_t i = 0; i < vars_; ++i) {
            if (e[i] == 0) continue;
            auto& pw = powers[i];
            if (pw.empty()) pw.push_back(Scalar::one(f));
            while (pw.size() <= e[i]) pw.push_back(pw.back() * x[i]);
            term *= pw[e[i]];
        }
        sum += term;
    }
    return sum;
}

std::map<Exponent, Scalar> Polynomial::taylor_shift(const Vector& center) const {
    if (center.size() != vars_) throw Error(ErrorKind::DimensionMismatch, "shift center has the wrong dimension");
    const FieldDescriptor& f = center.field();
    std::map<Exponent, Scalar> out;
    for (const auto& [alpha, c] : terms_) {
        // Enumerate beta <= alpha componentwise.
        Exponent beta(vars_, 0);
        while (true) {
            Scalar coef = Scalar::from_rational(f, c);
            for (std::size_t i = 0; i < vars_; ++i) {
                coef *= Scalar::from_rational(f, Rational(binomial(alpha[i], beta[i])));
                if (alpha[i] > beta[i]) coef *= center[i].pow(alpha[i] - beta[i]);
            }
            auto [it, inserted] = out.emplace(beta, coef);
            if (!inserted) it->second += coef;
            std::size_t i = 0;
            while (i < vars_ && beta[i] == alpha[i]) beta[i++] = 0;
            if (i == vars_) break;
            ++beta[i];
        }
    }
    return out;
}

}  // namespace ultrafix
