#include "ultrafix/linalg.hpp"

#include <algorithm>

#include "ultrafix/sampling.hpp"

namespace ultrafix {

namespace {

void require_dims(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::DimensionMismatch, what);
}

}  // namespace

// --- Vector -----------------------------------------------------------------

Vector::Vector(FieldDescriptor field, std::vector<Scalar> components)
    : field_(std::move(field)), components_(std::move(components)) {
    for (const auto& c : components_) require_same_field(field_, c.field());
}

Vector Vector::zeros(const FieldDescriptor& field, std::size_t n) {
    return Vector(field, std::vector<Scalar>(n, Scalar::zero(field)));
}

Vector Vector::basis(const FieldDescriptor& field, std::size_t n, std::size_t j) {
    Vector v = zeros(field, n);
    v[j] = Scalar::one(field);
    return v;
}

Vector Vector::from_rationals(const FieldDescriptor& field, const std::vector<Rational>& values) {
    std::vector<Scalar> c;
    c.reserve(values.size());
    for (const auto& q : values) c.push_back(Scalar::from_rational(field, q));
    return Vector(field, std::move(c));
}

Vector Vector::operator-() const {
    Vector r = *this;
    for (auto& c : r.components_) c = -c;
    return r;
}

Vector operator+(const Vector& a, const Vector& b) {
    require_dims(a.size() == b.size(), "vector sizes differ");
    Vector r = a;
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += b[i];
    return r;
}

Vector operator-(const Vector& a, const Vector& b) {
    require_dims(a.size() == b.size(), "vector sizes differ");
    Vector r = a;
    for (std::size_t i = 0; i < a.size(); ++i) r[i] -= b[i];
    return r;
}

Vector operator*(const Scalar& s, const Vector& v) {
    Vector r = v;
    for (auto& c : r.components_) c = s * c;
    return r;
}

Vector concat(const Vector& a, const Vector& b) {
    std::vector<Scalar> c = a.components_;
    c.insert(c.end(), b.components_.begin(), b.components_.end());
    return Vector(a.size() ? a.field_ : b.field_, std::move(c));
}

Vector Vector::slice(std::size_t begin, std::size_t count) const {
    require_dims(begin + count <= size(), "slice out of range");
    return Vector(field_, std::vector<Scalar>(components_.begin() + begin, components_.begin() + begin + count));
}

Magnitude norm(const Vector& v) {
    Magnitude m = v.field().exact() ? Magnitude(Rational(0)) : Magnitude(0.0);
    for (const auto& c : v.components()) m = max(m, c.abs());
    return m;
}

Magnitude norm_upper(const Vector& v) {
    Magnitude m = v.field().exact() ? Magnitude(Rational(0)) : Magnitude(0.0);
    for (const auto& c : v.components()) m = max(m, c.abs_upper());
    return m;
}

bool same_at_precision(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!same_at_precision(a[i], b[i])) return false;
    return true;
}

// --- Operator ---------------------------------------------------------------

Operator::Operator(FieldDescriptor field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), entries_(rows * cols, Scalar::zero(field)) {}

Operator::Operator(FieldDescriptor field, std::size_t rows, std::size_t cols, std::vector<Scalar> entries)
    : field_(std::move(field)), rows_(rows), cols_(cols), entries_(std::move(entries)) {
    require_dims(entries_.size() == rows * cols, "operator entry count does not match its shape");
    for (const auto& e : entries_) require_same_field(field_, e.field());
}

Operator Operator::identity(const FieldDescriptor& field, std::size_t n) {
    Operator a(field, n, n);
    for (std::size_t i = 0; i < n; ++i) a(i, i) = Scalar::one(field);
    return a;
}

Operator Operator::from_rationals(const FieldDescriptor& field, const std::vector<std::vector<Rational>>& rows) {
    const std::size_t m = rows.empty() ? 0 : rows.front().size();
    Operator a(field, rows.size(), m);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        require_dims(rows[i].size() == m, "ragged matrix");
        for (std::size_t j = 0; j < m; ++j) a(i, j) = Scalar::from_rational(field, rows[i][j]);
    }
    return a;
}

Vector Operator::column(std::size_t j) const {
    std::vector<Scalar> c;
    for (std::size_t i = 0; i < rows_; ++i) c.push_back((*this)(i, j));
    return Vector(field_, std::move(c));
}

Vector Operator::apply(const Vector& v) const {
    require_dims(v.size() == cols_, "operator applied to a vector of the wrong size");
    std::vector<Scalar> out(rows_, Scalar::zero(field_));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return Vector(field_, std::move(out));
}

Operator operator*(const Operator& a, const Operator& b) {
    require_dims(a.cols_ == b.rows_, "operator composition shape mismatch");
    Operator r(a.field_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            if (a(i, k).is_exact_zero()) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += a(i, k) * b(k, j);
        }
    return r;
}

Operator operator+(const Operator& a, const Operator& b) {
    require_dims(a.rows_ == b.rows_ && a.cols_ == b.cols_, "operator shapes differ");
    Operator r = a;
    for (std::size_t i = 0; i < r.entries_.size(); ++i) r.entries_[i] += b.entries_[i];
    return r;
}

Operator operator-(const Operator& a, const Operator& b) {
    require_dims(a.rows_ == b.rows_ && a.cols_ == b.cols_, "operator shapes differ");
    Operator r = a;
    for (std::size_t i = 0; i < r.entries_.size(); ++i) r.entries_[i] -= b.entries_[i];
    return r;
}

Operator operator*(const Scalar& s, const Operator& a) {
    Operator r = a;
    for (auto& e : r.entries_) e = s * e;
    return r;
}

Operator Operator::operator-() const {
    Operator r = *this;
    for (auto& e : r.entries_) e = -e;
    return r;
}

bool Operator::is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Scalar& s) { return s.is_zero(); });
}

bool same_at_precision(const Operator& a, const Operator& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (std::size_t i = 0; i < a.entries_.size(); ++i)
        if (!same_at_precision(a.entries_[i], b.entries_[i])) return false;
    return true;
}

Magnitude operator_norm(const Operator& a) {
    const bool exact = a.field().exact();
    Magnitude best = exact ? Magnitude(Rational(0)) : Magnitude(0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Magnitude row = exact ? Magnitude(Rational(0)) : Magnitude(0.0);
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (a.field().ultrametric())
                row = max(row, a(i, j).abs());
            else
                row += a(i, j).abs();
        }
        best = max(best, row);
    }
    return best;
}

Operator invert_exact(const Operator& a) {
    if (!a.square()) throw Error(ErrorKind::DimensionMismatch, "only square operators can be inverted");
    const std::size_t n = a.rows();
    const FieldDescriptor& f = a.field();
    Operator m = a;
    Operator inv = Operator::identity(f, n);
    const double scale = operator_norm(a).to_double();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t i = col + 1; i < n; ++i)
            if (m(i, col).abs() > m(piv, col).abs()) piv = i;
        const Scalar& p = m(piv, col);
        bool singular = p.is_zero();
        if (f.kind == FieldKind::real && !singular) singular = p.abs().to_double() <= f.tolerance * 1e-3 * scale;
        if (singular)
            throw Error(ErrorKind::SingularMatrix, "no usable pivot in column " + std::to_string(col),
                        {{"column", std::to_string(col)}});
        if (piv != col)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(m(piv, j), m(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        const Scalar pinv = Scalar::one(f) / m(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            m(col, j) = m(col, j) * pinv;
            inv(col, j) = inv(col, j) * pinv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || m(i, col).is_exact_zero()) continue;
            const Scalar factor = m(i, col);
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j) -= factor * m(col, j);
                inv(i, j) -= factor * inv(col, j);
            }
        }
    }
    return inv;
}

// --- Neumann series ---------------------------------------------------------

NeumannResult neumann_invert(const Operator& alpha) {
    if (!alpha.square()) throw Error(ErrorKind::DimensionMismatch, "Neumann series needs a square operator");
    const FieldDescriptor& f = alpha.field();
    const std::size_t n = alpha.rows();
    const Magnitude na = operator_norm(alpha);
    const Magnitude one = f.exact() ? Magnitude(Rational(1)) : Magnitude(1.0);
    if (!(na < one))
        throw Error(ErrorKind::NotAContraction, "||alpha|| = " + na.to_string() + " is not below 1",
                    {{"norm", na.to_string()}});

    NeumannResult r;
    r.bound = one / (one - na);
    Operator sum = Operator::identity(f, n);
    Operator term = Operator::identity(f, n);
    r.terms = 1;

    if (f.ultrametric()) {
        constexpr std::size_t kMaxTerms = 100000;
        while (true) {
            term = term * alpha;
            int floor = Scalar::kInfinitePrecision;
            bool exact_zero = true;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    floor = std::min(floor, term(i, j).valuation_floor());
                    exact_zero = exact_zero && term(i, j).is_exact_zero();
                }
            if (exact_zero) {
                r.truncation_error = Magnitude(Rational(0));
                break;
            }
            int known = -Scalar::kInfinitePrecision;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (!sum(i, j).is_exact_zero()) known = std::max(known, sum(i, j).absolute_precision());
            if (floor >= known || r.terms >= kMaxTerms) {
                // Every later term vanishes modulo p^floor.
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) sum(i, j) = sum(i, j).with_absolute_precision(floor);
                r.truncation_error = padic_radius(f.prime, -floor);
                break;
            }
            sum = sum + term;
            ++r.terms;
        }
    } else {
        constexpr std::size_t kMaxTerms = 200;
        while (r.terms < kMaxTerms) {
            term = term * alpha;
            const Magnitude tn = operator_norm(term);
            if (tn.is_zero() || tn.to_double() < 1e-15) break;
            sum = sum + term;
            ++r.terms;
        }
        r.truncation_error = pow(na, static_cast<int>(r.terms)) * r.bound;
    }
    r.inverse = std::move(sum);
    return r;
}

// --- isometries -------------------------------------------------------------

std::string_view to_string(IsometryClass c) {
    switch (c) {
        case IsometryClass::in_omega: return "in_omega";
        case IsometryClass::isometry: return "isometry";
        case IsometryClass::neither: return "neither";
    }
    return "?";
}

IsometryReport classify_isometry(const Operator& alpha, std::size_t samples, std::uint64_t seed) {
    const FieldDescriptor& f = alpha.field();
    if (!f.ultrametric()) throw Error(ErrorKind::InvalidArgument, "isometry classification is for ultrametric fields");
    if (!alpha.square()) throw Error(ErrorKind::DimensionMismatch, "isometry classification needs a square operator");
    const std::size_t n = alpha.rows();
    const Magnitude one(Rational(1));

    IsometryReport rep;
    rep.distance_to_identity = operator_norm(Operator::identity(f, n) - alpha);
    if (operator_norm(alpha) <= one) {
        try {
            rep.exact_isometry = operator_norm(invert_exact(alpha)) <= one;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::SingularMatrix && e.kind() != ErrorKind::PrecisionExhausted) throw;
        }
    }

    rep.sampled_isometry = true;
    auto check = [&](const Vector& u) {
        ++rep.samples;
        if (norm(alpha.apply(u)) != norm(u)) rep.sampled_isometry = false;
    };
    for (std::size_t j = 0; j < n; ++j) check(Vector::basis(f, n, j));
    Rng rng(seed);
    Ball unit(Vector::zeros(f, n), one);
    for (std::size_t s = 0; s < samples; ++s) check(sample_in_ball(unit, rng));

    if (rep.distance_to_identity < one)
        rep.classification = IsometryClass::in_omega;
    else if (rep.exact_isometry)
        rep.classification = IsometryClass::isometry;
    return rep;
}

// --- balls ------------------------------------------------------------------

Ball::Ball(Vector c, Magnitude r, bool is_closed) : center(std::move(c)), radius(std::move(r)), closed(is_closed) {
    if (!(radius > Magnitude(0.0))) throw Error(ErrorKind::InvalidArgument, "ball radius must be positive");
    if (field().kind == FieldKind::padic) (void)padic_radius_exponent(field().prime, radius);
    if (field().kind == FieldKind::rational && !radius.is_exact())
        throw Error(ErrorKind::InvalidArgument, "rational-field balls need an exact radius");
}

bool Ball::contains(const Vector& v) const {
    if (v.size() != center.size()) return false;
    const Magnitude d = norm_upper(v - center);
    return closed ? d <= radius : d < radius;
}

int Ball::closed_exponent() const {
    int k = padic_radius_exponent(field().prime, radius);
    return closed ? k : k - 1;
}

}  // namespace ultrafix
