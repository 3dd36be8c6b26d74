#include "ultrafix/cli.hpp"

#include <cstdint>

namespace ultrafix::cli {

namespace {

using namespace json_io;

[[noreturn]] void schema(const std::string& what) { throw SchemaError(what); }

struct Options {
    std::uint64_t seed = 0;
    std::size_t samples = 1000;
    double tolerance = 1e-12;
};

struct Context {
    std::string command;
    FieldDescriptor field;
    MapSpec map;
    json geometry;
    Options opt;
};

const json& need(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) schema(std::string("geometry needs '") + key + "'");
    return *it;
}

const json* find(const json& j, const char* key) {
    auto it = j.find(key);
    return it == j.end() || it->is_null() ? nullptr : &*it;
}

void require_dim(const Vector& v, std::size_t n, const char* what) {
    if (v.size() != n) schema(std::string(what) + " has dimension " + std::to_string(v.size()) + ", expected " + std::to_string(n));
}

void require_square_map(const Context& c, std::size_t n) {
    if (c.map.vars != n || c.map.codomain_dim() != n)
        schema("map must send K^" + std::to_string(n) + " to itself");
}

bool nonnegative_integer(const json& j) {
    return j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0);
}

Options options_from(const json& req) {
    Options o;
    if (const json* s = find(req, "seed")) {
        if (!nonnegative_integer(*s)) schema("'seed' must be a nonnegative integer");
        o.seed = s->get<std::uint64_t>();
    }
    if (const json* s = find(req, "samples")) {
        if (!nonnegative_integer(*s)) schema("'samples' must be a nonnegative integer");
        o.samples = s->get<std::size_t>();
    }
    if (const json* t = find(req, "tolerance")) {
        if (t->is_number()) {
            o.tolerance = t->get<double>();
        } else if (t->is_string()) {
            try {
                o.tolerance = parse_rational(t->get<std::string>()).convert_to<double>();
            } catch (const Error&) {
                schema("'tolerance' is not a number");
            }
        } else {
            schema("'tolerance' must be a number or a numeric string");
        }
        if (!(o.tolerance > 0)) schema("'tolerance' must be positive");
    }
    return o;
}

Operator optional_A(const Context& c, std::size_t n) {
    const json* a = find(c.geometry, "A");
    if (!a) return Operator();
    Operator A = operator_from_json(c.field, *a);
    if (A.rows() != n || A.cols() != n) schema("A must be " + std::to_string(n) + " x " + std::to_string(n));
    return A;
}

json do_certify(const Context& c) {
    const Ball ball = ball_from_json(c.field, need(c.geometry, "ball"));
    require_square_map(c, ball.dim());
    const Operator A = optional_A(c, ball.dim());
    const auto cert = certify(c.map, ball, A.rows() ? std::optional<Operator>(A) : std::nullopt);
    json out = {{"certificate", to_json(cert)}};
    if (c.opt.samples > 0) out["distortion"] = to_json(verify_distortion(cert, c.map, c.opt.samples, c.opt.seed));
    return out;
}

json do_invert(const Context& c) {
    const Ball ball = ball_from_json(c.field, need(c.geometry, "ball"));
    require_square_map(c, ball.dim());
    const Operator A = optional_A(c, ball.dim());
    const Vector target = vector_from_json(c.field, need(c.geometry, "target"));
    require_dim(target, ball.dim(), "target");
    std::optional<Vector> anchor;
    if (const json* a = find(c.geometry, "anchor")) {
        anchor = vector_from_json(c.field, *a);
        require_dim(*anchor, ball.dim(), "anchor");
    }
    IterationOptions it;
    it.tolerance = c.opt.tolerance;
    const auto cert = certify(c.map, ball, A.rows() ? std::optional<Operator>(A) : std::nullopt);
    const auto r = local_invert(cert, c.map, target, anchor, it);
    json out = {{"certificate", to_json(cert)},
                {"solution", to_json(r.solution)},
                {"sub_ball", to_json(r.sub_ball)},
                {"iterations", r.report.iterations},
                {"error_bound", to_json(r.report.error_bound)},
                {"residual", to_json(norm_upper(eval(c.map, r.solution) - target))}};
    if (c.field.ultrametric()) out["certified_digits"] = r.report.certified_digits;
    return out;
}

json do_fixpoint(const Context& c) {
    const Ball ball = ball_from_json(c.field, need(c.geometry, "ball"));
    require_square_map(c, ball.dim());
    ContractionProblem p{c.map, ball, std::nullopt, ball.center};
    if (const json* x = find(c.geometry, "x0")) {
        p.x0 = vector_from_json(c.field, *x);
        require_dim(p.x0, ball.dim(), "x0");
    }
    if (const json* t = find(c.geometry, "theta")) p.theta = magnitude_from_json(c.field, *t);
    IterationOptions it;
    it.tolerance = c.opt.tolerance;
    if (const json* d = find(c.geometry, "digits")) {
        if (!d->is_number_integer()) schema("'digits' must be an integer");
        it.padic_digits = d->get<int>();
    }
    json out = to_json(iterate_fixed_point(p, it));
    out["admissible"] = true;
    return out;
}

json do_implicit(const Context& c) {
    const Vector p0 = vector_from_json(c.field, need(c.geometry, "p0"));
    const Vector x0 = vector_from_json(c.field, need(c.geometry, "x0"));
    if (c.map.vars != p0.size() + x0.size() || c.map.codomain_dim() != x0.size())
        schema("map must send K^(k+m) to K^m with k = len(p0), m = len(x0)");
    const Vector p = vector_from_json(c.field, need(c.geometry, "p"));
    require_dim(p, p0.size(), "p");
    WindowOptions wo;
    if (const json* r = find(c.geometry, "param_radius")) wo.param_radius = magnitude_from_json(c.field, *r);
    if (const json* r = find(c.geometry, "state_radius")) wo.state_radius = magnitude_from_json(c.field, *r);
    bool exact = false;
    if (const json* u = find(c.geometry, "ultrametric")) {
        if (!u->is_boolean()) schema("'ultrametric' must be a boolean");
        exact = u->get<bool>();
    }
    std::optional<Vector> z0;
    if (const json* z = find(c.geometry, "z0")) {
        z0 = vector_from_json(c.field, *z);
        require_dim(*z0, x0.size(), "z0");
    }
    IterationOptions it;
    it.tolerance = c.opt.tolerance;
    const ParamWindow w = exact ? ultrametric_window(c.map, p0, x0, wo) : build_window(c.map, p0, x0, wo);
    const auto s = solve_implicit(w, c.map, p, z0 ? *z0 : w.z0, it);
    return {{"window", to_json(w)}, {"solution", to_json(s)}};
}

Response do_check(const Context& c) {
    QuotientFn q = diff_quotient;
    if (const json* m = find(c.geometry, "quotient")) {
        if (!m->is_string()) schema("'quotient' must be a string");
        const std::string name = m->get<std::string>();
        if (name == "plus_one") {
            q = quotient_plus_one;
        } else if (name != "exact") {
            schema("unknown quotient '" + name + "'");
        }
    }
    const auto report = check_identities(c.map, c.field, c.opt.samples, c.opt.seed, Execution::parallel, q);
    Response r;
    r.body = {{"report", to_json(report)}};
    if (!report.passed()) {
        std::size_t failures = 0;
        for (const auto& id : report.identities) failures += id.failures;
        r.body["status"] = "error";
        r.body["error"] = {{"kind", std::string(to_string(ErrorKind::IdentityFailure))},
                           {"message", std::to_string(failures) + " identity checks failed"},
                           {"details", json::object()}};
        r.exit_code = kSolverError;
    }
    return r;
}

json error_body(const std::string& kind, const std::string& message, const json& details) {
    return {{"kind", kind}, {"message", message}, {"details", details}};
}

}  // namespace

Response run(const json& request) {
    Response out;
    std::string command;
    auto stamp = [&](Response& r, const char* status) {
        r.body["schema_version"] = json_io::kSchemaVersion;
        r.body["command"] = command;
        if (!r.body.contains("status")) r.body["status"] = status;
    };
    try {
        if (!request.is_object()) schema("request must be a JSON object");
        if (const json* v = find(request, "schema_version")) {
            if (!v->is_number_integer() || v->get<int>() != json_io::kSchemaVersion)
                schema("unsupported schema_version");
        }
        const json* cmd = find(request, "command");
        if (!cmd || !cmd->is_string()) schema("request needs a string 'command'");
        command = cmd->get<std::string>();
        if (command != "invert" && command != "implicit" && command != "fixpoint" && command != "certify" &&
            command != "check")
            schema("unknown command '" + command + "'");

        Context c;
        c.command = command;
        c.field = field_from_json(need(request, "field"));
        c.map = map_from_json(need(request, "map"));
        const json* g = find(request, "geometry");
        c.geometry = g ? *g : json::object();
        if (!c.geometry.is_object()) schema("'geometry' must be an object");
        c.opt = options_from(request);

        if (command == "check") {
            out = do_check(c);
        } else if (command == "certify") {
            out.body = do_certify(c);
        } else if (command == "invert") {
            out.body = do_invert(c);
        } else if (command == "fixpoint") {
            out.body = do_fixpoint(c);
        } else {
            out.body = do_implicit(c);
        }
        out.body["field"] = to_json(c.field);
        stamp(out, "ok");
    } catch (const SchemaError& e) {
        out = Response{{{"error", error_body("SchemaError", e.what(), json::object())}}, kSchemaError};
        stamp(out, "invalid_request");
    } catch (const json::exception& e) {
        out = Response{{{"error", error_body("SchemaError", e.what(), json::object())}}, kSchemaError};
        stamp(out, "invalid_request");
    } catch (const Error& e) {
        json details = json::object();
        for (const auto& [k, v] : e.details()) details[k] = v;
        out = Response{{{"error", error_body(std::string(to_string(e.kind())), e.what(), details)}}, kSolverError};
        stamp(out, "error");
    } catch (const std::exception& e) {
        out = Response{{{"error", error_body("InternalError", e.what(), json::object())}}, kSolverError};
        stamp(out, "error");
    }
    return out;
}

std::string render(const json& body) { return body.dump(2) + "\n"; }

}  // namespace ultrafix::cli
