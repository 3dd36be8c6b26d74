#include "ultrafix/calculus.hpp"

#include <cmath>
#include <numeric>

namespace ultrafix {

Ball DomainSpec::in(const FieldDescriptor& field) const {
    return Ball(Vector::from_rationals(field, center),
                field.exact() ? Magnitude(radius) : Magnitude(radius.convert_to<double>()), closed);
}

MapSpec::MapSpec(std::size_t v, std::vector<Polynomial> outs, std::optional<DomainSpec> dom)
    : vars(v), outputs(std::move(outs)), domain(std::move(dom)) {
    for (const auto& p : outputs)
        if (p.vars() != vars) throw Error(ErrorKind::DimensionMismatch, "output polynomial has the wrong variable count");
    if (domain && domain->center.size() != vars)
        throw Error(ErrorKind::DimensionMismatch, "domain center has the wrong dimension");
}

bool MapSpec::in_domain(const Vector& x) const {
    if (x.size() != vars) return false;
    return !domain || domain->in(x.field()).contains(x);
}

MapSpec MapSpec::unrestricted() const { return MapSpec(vars, outputs); }

namespace {

void require_in_domain(const MapSpec& f, const Vector& x) {
    if (x.size() != f.vars)
        throw Error(ErrorKind::DimensionMismatch,
                    "point of dimension " + std::to_string(x.size()) + " for a map on " + std::to_string(f.vars) + " variables");
    if (!f.in_domain(x)) throw Error(ErrorKind::DomainViolation, "point lies outside the map's domain");
}

// Radius of a ball as an exact rational: closed p-adic radius, or the double
// radius of a real ball converted exactly.
Rational exact_radius(const Ball& b) {
    if (b.field().kind == FieldKind::padic) return padic_radius(b.field().prime, b.closed_exponent()).exact_value();
    if (b.radius.is_exact()) return b.radius.exact_value();
    return Rational(b.radius.to_double());
}

// Bounds are computed over an exact field: the p-adic field itself, or Q for
// the archimedean backends (doubles convert to rationals exactly), so that
// rounding never makes a bound too small.
FieldDescriptor working_field(const FieldDescriptor& f) {
    return f.kind == FieldKind::padic ? f : FieldDescriptor::rational();
}

Scalar to_working(const Scalar& s, const FieldDescriptor& w) {
    switch (s.field().kind) {
        case FieldKind::padic: return s;
        case FieldKind::rational: return s;
        case FieldKind::real: return Scalar::from_rational(w, Rational(s.to_double()));
    }
    return s;
}

Vector to_working(const Vector& v, const FieldDescriptor& w) {
    std::vector<Scalar> c;
    for (const auto& s : v.components()) c.push_back(to_working(s, w));
    return Vector(w, std::move(c));
}

Magnitude from_working(const Rational& q, const FieldDescriptor& f) {
    if (f.exact()) return Magnitude(q);
    double d = q.convert_to<double>();
    if (Rational(d) < q) d = std::nextafter(d, INFINITY);
    return Magnitude(d);
}

Rational rpow(const Rational& x, unsigned k) {
    Rational r = 1;
    for (unsigned i = 0; i < k; ++i) r *= x;
    return r;
}

Rational abs_upper_exact(const Scalar& s) { return s.abs_upper().exact_value(); }

// Ball B(center, r) of the full variable space within the domain ball D,
// with per-coordinate radii.
void require_box_in_domain(const MapSpec& f, const Vector& center, const std::vector<Rational>& radii) {
    if (!f.domain) return;
    const FieldDescriptor& fd = center.field();
    const auto& d = *f.domain;
    const FieldDescriptor w = working_field(fd);
    Vector c = to_working(center, w);
    Ball dom = d.in(w);
    const Rational R = exact_radius(dom);
    for (std::size_t i = 0; i < f.vars; ++i) {
        Rational off = abs_upper_exact(c[i] - dom.center[i]);
        bool ok = fd.ultrametric() ? (off <= R && radii[i] <= R)
                                   : (d.closed ? off + radii[i] <= R : off + radii[i] < R);
        if (!ok) throw Error(ErrorKind::DomainViolation, "ball is not contained in the map's domain");
    }
}

}  // namespace

Vector eval(const MapSpec& f, const Vector& x) {
    require_in_domain(f, x);
    std::vector<Scalar> out;
    out.reserve(f.outputs.size());
    for (const auto& p : f.outputs) out.push_back(p.evaluate(x));
    return Vector(x.field(), std::move(out));
}

Operator partial_jacobian(const MapSpec& f, const Vector& x, std::size_t first, std::size_t count) {
    require_in_domain(f, x);
    if (first + count > f.vars) throw Error(ErrorKind::DimensionMismatch, "partial Jacobian columns out of range");
    Operator J(x.field(), f.outputs.size(), count);
    for (std::size_t i = 0; i < f.outputs.size(); ++i)
        for (std::size_t j = 0; j < count; ++j) J(i, j) = f.outputs[i].derivative(first + j).evaluate(x);
    return J;
}

Operator jacobian(const MapSpec& f, const Vector& x) { return partial_jacobian(f, x, 0, f.vars); }

Vector diff_quotient(const MapSpec& f, const QuotientPoint& q) {
    require_in_domain(f, q.x);
    if (q.y.size() != f.vars) throw Error(ErrorKind::DimensionMismatch, "direction has the wrong dimension");
    if (q.t.is_exact_zero()) return jacobian(f, q.x).apply(q.y);
    const Vector moved = q.x + q.t * q.y;
    require_in_domain(f, moved);
    const Scalar inv = Scalar::one(q.t.field()) / q.t;
    return inv * (eval(f, moved) - eval(f, q.x));
}

MapSpec quotient_map(const MapSpec& f) {
    const std::size_t m = f.vars;
    const std::size_t n2 = 2 * m + 1;
    std::vector<Polynomial> shifted(m, Polynomial(n2)), base(m, Polynomial(n2));
    const Polynomial t = Polynomial::variable(n2, 2 * m);
    for (std::size_t i = 0; i < m; ++i) {
        base[i] = Polynomial::variable(n2, i);
        shifted[i] = base[i] + t * Polynomial::variable(n2, m + i);
    }
    std::vector<Polynomial> outs;
    for (const auto& p : f.outputs) outs.push_back((p.substitute(shifted) - p.substitute(base)).divide_by_variable(2 * m));
    return MapSpec(n2, std::move(outs));
}

namespace {

Vector flatten(const QuotientPoint& q) {
    return concat(concat(q.x, q.y), Vector(q.t.field(), {q.t}));
}

}  // namespace

Vector second_quotient(const MapSpec& f, const SecondQuotientPoint& p, const QuotientFn& quotient) {
    const std::size_t m = f.vars;
    if (p.q.x.size() != m || p.q.y.size() != m || p.q1.x.size() != m || p.q1.y.size() != m)
        throw Error(ErrorKind::DimensionMismatch, "second quotient point has the wrong dimension");
    if (p.s.is_exact_zero()) {
        require_in_domain(f, p.q.x);
        require_in_domain(f, p.q.x + p.q.t * p.q.y);
        return jacobian(quotient_map(f), flatten(p.q)).apply(flatten(p.q1));
    }
    QuotientPoint moved{p.q.x + p.s * p.q1.x, p.q.y + p.s * p.q1.y, p.q.t + p.s * p.q1.t};
    const Scalar inv = Scalar::one(p.s.field()) / p.s;
    return inv * (quotient(f, moved) - quotient(f, p.q));
}

MapSpec compose(const MapSpec& g, const MapSpec& f) {
    if (g.vars != f.outputs.size())
        throw Error(ErrorKind::DimensionMismatch, "cannot compose: inner map has " + std::to_string(f.outputs.size()) +
                                                      " outputs, outer map takes " + std::to_string(g.vars));
    std::vector<Polynomial> outs;
    for (const auto& p : g.outputs) outs.push_back(p.substitute(f.outputs));
    return MapSpec(f.vars, std::move(outs), f.domain);
}

namespace {

Magnitude state_bound_impl(const MapSpec& f, const Vector& pcenter, const Rational& rho, const Ball& state,
                           const Operator* A) {
    const std::size_t pd = pcenter.size(), sd = state.dim();
    if (f.vars != pd + sd) throw Error(ErrorKind::DimensionMismatch, "map arity does not match parameter x state split");
    const FieldDescriptor& fd = state.field();
    if (pd) require_same_field(pcenter.field(), fd);
    if (A && (A->rows() != f.outputs.size() || A->cols() != sd))
        throw Error(ErrorKind::DimensionMismatch, "A has the wrong shape");

    const Rational r = exact_radius(state);
    const Vector center = concat(pcenter, state.center);
    std::vector<Rational> radii(pd, rho);
    radii.insert(radii.end(), sd, r);
    require_box_in_domain(f, center, radii);

    const FieldDescriptor w = working_field(fd);
    const Vector wc = to_working(center, w);
    Rational best = 0;
    for (std::size_t i = 0; i < f.outputs.size(); ++i) {
        auto coefs = f.outputs[i].taylor_shift(wc);
        if (A)
            for (std::size_t j = 0; j < sd; ++j) {
                Exponent e(pd + sd, 0);
                e[pd + j] = 1;
                auto [it, inserted] = coefs.emplace(e, Scalar::zero(w));
                it->second -= to_working((*A)(i, j), w);
            }
        Rational row = 0;
        for (const auto& [e, b] : coefs) {
            const unsigned pa = std::accumulate(e.begin(), e.begin() + pd, 0u);
            const unsigned sg = std::accumulate(e.begin() + pd, e.end(), 0u);
            if (sg == 0) continue;
            const Rational term = abs_upper_exact(b) * rpow(rho, pa) * rpow(r, sg - 1);
            if (fd.ultrametric())
                row = std::max(row, term);
            else
                row += term * sg;
        }
        best = std::max(best, row);
    }
    return from_working(best, fd);
}

}  // namespace

Magnitude uniform_state_bound(const MapSpec& f, const Ball& params, const Ball& state, const Operator* A) {
    return state_bound_impl(f, params.center, params.dim() ? exact_radius(params) : Rational(0), state, A);
}

Magnitude state_lipschitz_bound(const MapSpec& f, const Vector& p, const Ball& state, const Operator* A) {
    return state_bound_impl(f, p, Rational(0), state, A);
}

Magnitude lipschitz_bound(const MapSpec& f, const Ball& ball) {
    const Ball none(Vector(ball.field(), {}), ball.field().kind == FieldKind::real ? Magnitude(1.0) : Magnitude::exact(1));
    return uniform_state_bound(f, none, ball, nullptr);
}

Magnitude strictness_modulus(const MapSpec& f, const Operator& A, const Ball& ball) {
    if (!A.square() || A.rows() != ball.dim())
        throw Error(ErrorKind::DimensionMismatch, "A must be square and match the ball dimension");
    const Ball none(Vector(ball.field(), {}), ball.field().kind == FieldKind::real ? Magnitude(1.0) : Magnitude::exact(1));
    return uniform_state_bound(f, none, ball, &A);
}

Magnitude parameter_drift_bound(const MapSpec& f, const Ball& params, const Vector& x0, const Operator* M) {
    const std::size_t pd = params.dim(), sd = x0.size();
    if (f.vars != pd + sd) throw Error(ErrorKind::DimensionMismatch, "map arity does not match parameter x state split");
    const FieldDescriptor& fd = params.field();
    const Rational rho = exact_radius(params);
    const Vector center = concat(params.center, x0);
    std::vector<Rational> radii(pd, rho);
    radii.insert(radii.end(), sd, Rational(0));
    require_box_in_domain(f, center, radii);

    const FieldDescriptor w = working_field(fd);
    const Vector wc = to_working(center, w);
    // Parameter-only coefficients of f(p0 + h, x0) - f(p0, x0).
    std::vector<std::map<Exponent, Scalar>> rows;
    for (const auto& p : f.outputs) {
        std::map<Exponent, Scalar> keep;
        for (auto& [e, b] : p.taylor_shift(wc)) {
            const unsigned pa = std::accumulate(e.begin(), e.begin() + pd, 0u);
            const unsigned sg = std::accumulate(e.begin() + pd, e.end(), 0u);
            if (pa > 0 && sg == 0) keep.emplace(e, b);
        }
        rows.push_back(std::move(keep));
    }
    if (M) {
        if (M->cols() != rows.size()) throw Error(ErrorKind::DimensionMismatch, "left factor has the wrong shape");
        std::vector<std::map<Exponent, Scalar>> mixed(M->rows());
        for (std::size_t i = 0; i < M->rows(); ++i)
            for (std::size_t k = 0; k < rows.size(); ++k) {
                const Scalar mik = to_working((*M)(i, k), w);
                for (const auto& [e, b] : rows[k]) {
                    auto [it, inserted] = mixed[i].emplace(e, Scalar::zero(w));
                    it->second += mik * b;
                }
            }
        rows = std::move(mixed);
    }
    Rational best = 0;
    for (const auto& coefs : rows) {
        Rational row = 0;
        for (const auto& [e, b] : coefs) {
            const unsigned pa = std::accumulate(e.begin(), e.begin() + pd, 0u);
            const Rational term = abs_upper_exact(b) * rpow(rho, pa);
            if (fd.ultrametric())
                row = std::max(row, term);
            else
                row += term;
        }
        best = std::max(best, row);
    }
    return from_working(best, fd);
}

MapSpec random_map(std::mt19937_64& rng, std::size_t vars, std::size_t outputs, unsigned max_degree,
                   std::size_t max_terms) {
    std::vector<Polynomial> outs;
    for (std::size_t i = 0; i < outputs; ++i) {
        Polynomial p(vars);
        const std::size_t terms = 1 + rng() % max_terms;
        for (std::size_t k = 0; k < terms; ++k) {
            Exponent e(vars, 0);
            const unsigned d = static_cast<unsigned>(rng() % (max_degree + 1));
            for (unsigned j = 0; j < d; ++j) ++e[rng() % vars];
            std::int64_t num = static_cast<std::int64_t>(rng() % 11) - 5;
            if (num == 0) num = 1;
            const std::int64_t den = 1 + static_cast<std::int64_t>(rng() % 4);
            p.add_term(Rational(num, den), e);
        }
        outs.push_back(std::move(p));
    }
    return MapSpec(vars, std::move(outs));
}

}  // namespace ultrafix
