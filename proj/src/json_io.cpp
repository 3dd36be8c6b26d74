#include "ultrafix/json_io.hpp"

namespace ultrafix::json_io {

namespace {

[[noreturn]] void schema(const std::string& what) { throw SchemaError(what); }

const json& need(const json& j, const char* key) {
    if (!j.is_object()) schema(std::string("expected an object holding '") + key + "'");
    auto it = j.find(key);
    if (it == j.end()) schema(std::string("missing field '") + key + "'");
    return *it;
}

std::int64_t need_int(const json& j, const char* key) {
    const json& v = need(j, key);
    if (!v.is_number_integer()) schema(std::string("field '") + key + "' must be an integer");
    return v.get<std::int64_t>();
}

std::vector<std::int64_t> padic_digits(const Scalar& s, int& val) {
    if (s.is_zero()) {
        const int a = s.absolute_precision();
        val = std::min(a, 0);
        return std::vector<std::int64_t>(static_cast<std::size_t>(a - val), 0);
    }
    const int v = s.valuation();
    val = std::min(v, 0);
    std::vector<std::int64_t> out(static_cast<std::size_t>(v - val), 0);
    for (auto d : s.unit_digits()) out.push_back(d);
    return out;
}

}  // namespace

json to_json(const FieldDescriptor& f) {
    switch (f.kind) {
        case FieldKind::padic: return {{"kind", "padic"}, {"prime", f.prime}, {"precision", f.precision}};
        case FieldKind::real: return {{"kind", "real"}, {"tolerance", f.tolerance}};
        case FieldKind::rational: return {{"kind", "rational"}};
    }
    return {};
}

json to_json(const Scalar& s) {
    switch (s.field().kind) {
        case FieldKind::padic: {
            if (s.is_exact_zero()) return {{"val", "inf"}, {"digits", json::array()}};
            int val = 0;
            auto digits = padic_digits(s, val);
            return {{"val", val}, {"digits", digits}};
        }
        case FieldKind::rational: return to_string(s.rational_value());
        case FieldKind::real: return s.to_double();
    }
    return {};
}

json to_json(const Magnitude& m) {
    if (m.is_exact()) return to_string(m.exact_value());
    return m.to_double();
}

json to_json(const Vector& v) {
    json out = json::array();
    for (const auto& c : v.components()) out.push_back(to_json(c));
    return out;
}

json to_json(const Operator& a) {
    json out = json::array();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < a.cols(); ++j) row.push_back(to_json(a(i, j)));
        out.push_back(std::move(row));
    }
    return out;
}

json to_json(const Ball& b) {
    return {{"center", to_json(b.center)}, {"radius", to_json(b.radius)}, {"closed", b.closed}};
}

json to_json(const MapSpec& f) {
    json outputs = json::array();
    for (const auto& p : f.outputs) {
        json terms = json::array();
        for (const auto& [e, c] : p.terms()) terms.push_back({{"coef", to_string(c)}, {"exp", e}});
        outputs.push_back(std::move(terms));
    }
    json j = {{"vars", f.vars}, {"outputs", outputs}};
    if (f.domain) {
        json center = json::array();
        for (const auto& c : f.domain->center) center.push_back(to_string(c));
        j["domain"] = {{"center", center}, {"radius", to_string(f.domain->radius)}, {"closed", f.domain->closed}};
    }
    return j;
}

json to_json(const InversionCertificate& c) {
    return {{"A", to_json(c.A)},
            {"A_inv", to_json(c.A_inv)},
            {"norm_A", to_json(c.norm_A)},
            {"norm_A_inv", to_json(c.norm_A_inv)},
            {"sigma", to_json(c.sigma)},
            {"a", to_json(c.a)},
            {"b", to_json(c.b)},
            {"alpha", to_json(c.alpha)},
            {"beta", to_json(c.beta)},
            {"theta", to_json(c.theta())},
            {"ball", to_json(c.ball)},
            {"ultrametric", c.ultrametric}};
}

json to_json(const DistortionReport& r) {
    json j = {{"pairs", r.pairs},
              {"lower_failures", r.lower_failures},
              {"upper_failures", r.upper_failures},
              {"isometry_failures", r.isometry_failures},
              {"sigma_failures", r.sigma_failures},
              {"min_ratio", to_json(r.min_ratio)},
              {"max_ratio", to_json(r.max_ratio)},
              {"max_sigma_quotient", to_json(r.max_sigma_quotient)},
              {"passed", r.passed()}};
    if (r.witness)
        j["witness"] = {{"y", to_json(r.witness->y)},
                        {"z", to_json(r.witness->z)},
                        {"check", r.witness->check},
                        {"lhs", to_json(r.witness->lhs)},
                        {"rhs", to_json(r.witness->rhs)}};
    return j;
}

json to_json(const FixedPointReport& r) {
    json steps = json::array();
    for (std::size_t k = 0; k < r.step_distances.size(); ++k)
        steps.push_back({{"bound", to_json(r.apriori_bounds[k])}, {"actual", to_json(r.step_distances[k])}});
    json j = {{"fixed_point", to_json(r.fixed_point)},
              {"iterations", r.iterations},
              {"theta", to_json(r.theta)},
              {"initial_step", to_json(r.initial_step)},
              {"error_bound", to_json(r.error_bound)},
              {"achieved_distance", to_json(r.achieved_distance)},
              {"steps", steps}};
    if (r.fixed_point.size() && r.fixed_point.field().ultrametric()) j["certified_digits"] = r.certified_digits;
    return j;
}

json to_json(const ParamWindow& w) {
    return {{"p0", to_json(w.p0)},
            {"x0", to_json(w.x0)},
            {"z0", to_json(w.z0)},
            {"p_ball", to_json(w.p_ball)},
            {"state_ball", to_json(w.state_ball)},
            {"target_ball", to_json(w.target_ball)},
            {"certificate", to_json(w.cert)},
            {"tau", to_json(w.tau)},
            {"delta", to_json(w.delta)},
            {"drift", to_json(w.drift)},
            {"exact_image", w.exact_image},
            {"shrinks", w.shrinks}};
}

json to_json(const ImplicitSolution& s) {
    json j = {{"lambda", to_json(s.lambda_value)},
              {"derivative", to_json(s.derivative)},
              {"residual", to_json(s.residual)},
              {"iterations", s.report.iterations},
              {"error_bound", to_json(s.report.error_bound)},
              {"sub_ball", to_json(s.sub_ball)}};
    if (s.lambda_value.size() && s.lambda_value.field().ultrametric()) j["certified_digits"] = s.report.certified_digits;
    return j;
}

json to_json(const IdentityReport& r) {
    json ids = json::array();
    for (const auto& id : r.identities) {
        json j = {{"name", id.name}, {"checked", id.checked}, {"failures", id.failures}};
        if (id.witness) {
            const auto& w = *id.witness;
            json vectors = json::object(), scalars = json::object();
            for (const auto& [k, v] : w.vectors) vectors[k] = to_json(v);
            for (const auto& [k, v] : w.scalars) scalars[k] = to_json(v);
            json wj = {{"sample", w.sample}, {"vectors", vectors}, {"scalars", scalars}};
            if (w.error.empty()) {
                wj["lhs"] = to_json(w.lhs);
                wj["rhs"] = to_json(w.rhs);
            } else {
                wj["error"] = w.error;
            }
            j["witness"] = std::move(wj);
        }
        ids.push_back(std::move(j));
    }
    return {{"identities", ids}, {"passed", r.passed()}};
}

FieldDescriptor field_from_json(const json& j) {
    const json& kind = need(j, "kind");
    if (!kind.is_string()) schema("field kind must be a string");
    const std::string k = kind.get<std::string>();
    try {
        if (k == "padic") {
            const std::int64_t p = need_int(j, "prime");
            const std::int64_t n = need_int(j, "precision");
            if (n < 1 || n > 64) schema("p-adic precision out of range");
            return FieldDescriptor::padic(p, static_cast<int>(n));
        }
        if (k == "real") {
            double tol = 1e-9;
            if (auto it = j.find("tolerance"); it != j.end()) {
                if (!it->is_number()) schema("real tolerance must be a number");
                tol = it->get<double>();
            }
            return FieldDescriptor::real(tol);
        }
        if (k == "rational") return FieldDescriptor::rational();
    } catch (const Error& e) {
        schema(e.what());
    }
    schema("unknown field kind '" + k + "'");
}

Rational rational_from_json(const json& j) {
    try {
        if (j.is_string()) return parse_rational(j.get<std::string>());
        if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    } catch (const Error& e) {
        schema(e.what());
    }
    schema("expected a rational as \"num/den\" or an integer");
}

Scalar scalar_from_json(const FieldDescriptor& f, const json& j) {
    if (j.is_object()) {
        if (f.kind != FieldKind::padic) schema("digit encoding is only valid for p-adic fields");
        const json& val = need(j, "val");
        const json& digits = need(j, "digits");
        if (!digits.is_array()) schema("'digits' must be an array");
        if (val.is_string()) {
            if (val.get<std::string>() != "inf" || !digits.empty()) schema("'val' must be an integer or \"inf\"");
            return Scalar::zero(f);
        }
        if (!val.is_number_integer()) schema("'val' must be an integer or \"inf\"");
        std::vector<std::int64_t> d;
        for (const auto& x : digits) {
            if (!x.is_number_integer()) schema("digits must be integers");
            const auto v = x.get<std::int64_t>();
            if (v < 0 || v >= f.prime) schema("digit out of range for p = " + std::to_string(f.prime));
            d.push_back(v);
        }
        if (d.empty()) schema("a p-adic value needs at least one digit");
        try {
            return Scalar::from_padic_digits(f, static_cast<int>(val.get<std::int64_t>()), d);
        } catch (const Error& e) {
            schema(e.what());
        }
    }
    if (j.is_number_float()) {
        if (f.kind != FieldKind::real) schema("floating point values are only accepted for real fields");
        return Scalar::from_double(f, j.get<double>());
    }
    return Scalar::from_rational(f, rational_from_json(j));
}

Magnitude magnitude_from_json(const FieldDescriptor& f, const json& j) {
    Rational q;
    if (j.is_number_float()) {
        if (f.exact()) schema("radii of exact fields must be rational strings");
        const double d = j.get<double>();
        if (!(d >= 0)) schema("magnitudes must be nonnegative");
        return Magnitude(d);
    }
    q = rational_from_json(j);
    if (q < 0) schema("magnitudes must be nonnegative");
    if (f.exact()) return Magnitude(q);
    return Magnitude(q.convert_to<double>());
}

Vector vector_from_json(const FieldDescriptor& f, const json& j) {
    if (!j.is_array()) schema("vectors are arrays of scalars");
    std::vector<Scalar> out;
    for (const auto& x : j) out.push_back(scalar_from_json(f, x));
    return Vector(f, std::move(out));
}

Operator operator_from_json(const FieldDescriptor& f, const json& j) {
    if (!j.is_array() || j.empty()) schema("matrices are non-empty arrays of rows");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) schema("matrix rows must be non-empty arrays");
    std::vector<Scalar> entries;
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != cols) schema("matrix rows must all have the same length");
        for (const auto& x : row) entries.push_back(scalar_from_json(f, x));
    }
    return Operator(f, rows, cols, std::move(entries));
}

Ball ball_from_json(const FieldDescriptor& f, const json& j) {
    Vector center = vector_from_json(f, need(j, "center"));
    Magnitude radius = magnitude_from_json(f, need(j, "radius"));
    bool closed = true;
    if (auto it = j.find("closed"); it != j.end()) {
        if (!it->is_boolean()) schema("'closed' must be a boolean");
        closed = it->get<bool>();
    }
    try {
        return Ball(std::move(center), std::move(radius), closed);
    } catch (const Error& e) {
        schema(e.what());
    }
}

MapSpec map_from_json(const json& j) {
    const std::int64_t vars = need_int(j, "vars");
    if (vars < 0 || vars > 64) schema("'vars' out of range");
    const json& outputs = need(j, "outputs");
    if (!outputs.is_array()) schema("'outputs' must be an array of term lists");
    std::vector<Polynomial> polys;
    for (const auto& terms : outputs) {
        if (!terms.is_array()) schema("each output is an array of terms");
        Polynomial p(static_cast<std::size_t>(vars));
        for (const auto& t : terms) {
            const Rational c = rational_from_json(need(t, "coef"));
            const json& ej = need(t, "exp");
            if (!ej.is_array() || ej.size() != static_cast<std::size_t>(vars))
                schema("each 'exp' must list one exponent per variable");
            Exponent e;
            for (const auto& x : ej) {
                if (!x.is_number_unsigned() || x.get<std::uint64_t>() > 64) schema("exponents must be small nonnegative integers");
                e.push_back(x.get<unsigned>());
            }
            p.add_term(c, e);
        }
        polys.push_back(std::move(p));
    }
    std::optional<DomainSpec> domain;
    if (auto it = j.find("domain"); it != j.end() && !it->is_null()) {
        DomainSpec d;
        const json& center = need(*it, "center");
        if (!center.is_array() || center.size() != static_cast<std::size_t>(vars))
            schema("domain center must have one coordinate per variable");
        for (const auto& x : center) d.center.push_back(rational_from_json(x));
        d.radius = rational_from_json(need(*it, "radius"));
        if (d.radius <= 0) schema("domain radius must be positive");
        if (auto c = it->find("closed"); c != it->end()) {
            if (!c->is_boolean()) schema("'closed' must be a boolean");
            d.closed = c->get<bool>();
        }
        domain = std::move(d);
    }
    return MapSpec(static_cast<std::size_t>(vars), std::move(polys), std::move(domain));
}

}  // namespace ultrafix::json_io
