#include "ultrafix/contraction.hpp"

#include <cmath>

namespace ultrafix {

namespace {

Magnitude unit_of(const FieldDescriptor& f) { return f.exact() ? Magnitude::exact(1) : Magnitude(1.0); }

Magnitude closed_radius(const Ball& b) {
    if (b.field().ultrametric()) return padic_radius(b.field().prime, b.closed_exponent());
    return b.radius;
}

std::map<std::string, std::string> details(std::initializer_list<std::pair<const char*, Magnitude>> kv) {
    std::map<std::string, std::string> out;
    for (const auto& [k, v] : kv) out[k] = v.to_string();
    return out;
}

// Replaces an iterate whose tracked absolute precision fell below N by the
// exact point its known digits spell out. Precision lost inside g (e.g. a
// factor A^-1 of norm p^k costs k digits) then stops compounding across steps;
// the shift is recorded in `perturbation`.
Vector settle(const Vector& v, Magnitude& perturbation) {
    const FieldDescriptor& fd = v.field();
    int known = fd.precision;
    for (const auto& c : v.components())
        if (!c.is_exact_zero()) known = std::min(known, c.absolute_precision());
    if (known >= fd.precision) return v;
    perturbation = max(perturbation, padic_radius(fd.prime, -known));
    std::vector<Scalar> out;
    for (const auto& c : v.components()) {
        if (c.is_zero()) {
            out.push_back(Scalar::zero(fd));
            continue;
        }
        Rational q = Rational(Integer(c.unit()));
        const Rational pv = Rational(boost::multiprecision::pow(Integer(fd.prime), std::abs(c.valuation())));
        if (c.valuation() >= 0) {
            q *= pv;
        } else {
            q /= pv;
        }
        out.push_back(Scalar::from_rational(fd, q));
    }
    return Vector(fd, std::move(out));
}

}  // namespace

bool admissible(const Magnitude& theta, const Ball& ball, const Magnitude& d0) {
    if (ball.field().ultrametric()) return d0 <= closed_radius(ball);
    const Magnitude limit = (unit_of(ball.field()) - theta) * ball.radius;
    return ball.closed ? d0 <= limit : d0 < limit;
}

Magnitude contraction_constant(const ContractionProblem& p) {
    return p.theta ? *p.theta : lipschitz_bound(p.f, p.domain);
}

bool admissible(const ContractionProblem& p) {
    if (!p.domain.contains(p.x0)) return false;
    const Magnitude theta = contraction_constant(p);
    if (!(theta < unit_of(p.domain.field()))) return false;
    return admissible(theta, p.domain, norm(eval(p.f, p.x0) - p.x0));
}

FixedPointReport iterate_self_map(const SelfMap& g, const Ball& ball, const Magnitude& theta, const Vector& x0,
                                  const IterationOptions& options) {
    const FieldDescriptor& fd = ball.field();
    const Magnitude one = unit_of(fd);
    if (!(theta < one))
        throw Error(ErrorKind::NotAContraction, "contraction constant " + theta.to_string() + " is not below 1",
                    details({{"theta", theta}}));
    if (!ball.contains(x0)) throw Error(ErrorKind::NotAdmissible, "initial point lies outside the domain ball");

    const bool ultra = fd.ultrametric();
    // p-adic: largest shift introduced by settle(). The settled orbit obeys
    // d(x_{k+1}, x_k) <= max(theta^k d0, eps) and d(x_n, x*) <= max(theta^n d0, eps).
    Magnitude eps;
    auto step_map = [&](const Vector& v) { return ultra ? settle(g(v), eps) : g(v); };

    FixedPointReport rep;
    rep.theta = theta;
    rep.trace.push_back(x0);
    Vector x = step_map(x0);
    rep.initial_step = norm(x - x0);
    if (!admissible(theta, ball, max(rep.initial_step, eps)))
        throw Error(ErrorKind::NotAdmissible,
                    "first step " + rep.initial_step.to_string() + " is too large for the domain ball",
                    details({{"initial_step", rep.initial_step}, {"theta", theta}, {"radius", ball.radius}}));

    const int digits = options.padic_digits.value_or(fd.precision);
    const Magnitude target = ultra ? padic_radius(fd.prime, -digits) : Magnitude(options.tolerance);
    const Magnitude tail = ultra ? one : one / (one - theta);

    Magnitude theta_k = one;   // theta^k
    Vector prev = x0;
    std::size_t n = 0;
    while (true) {
        // x is x_{n+1}; check the step against the a priori bound theta^n d0.
        if (!ball.contains(x))
            throw Error(ErrorKind::DomainEscape, "iterate " + std::to_string(n + 1) + " left the domain ball");
        const Magnitude step = norm(x - prev);
        const Magnitude bound = ultra ? max(theta_k * rep.initial_step, eps) : theta_k * rep.initial_step;
        if (!within(step, bound, 1e-12))
            throw Error(ErrorKind::DomainEscape,
                        "step " + std::to_string(n) + " exceeds its a priori bound; theta is too small",
                        details({{"step", step}, {"bound", bound}, {"theta", theta}}));
        rep.step_distances.push_back(step);
        rep.apriori_bounds.push_back(bound);
        rep.trace.push_back(x);
        ++n;
        theta_k = theta_k * theta;
        const Magnitude contracted = theta_k * tail * rep.initial_step;
        rep.error_bound = ultra ? max(contracted, eps) : contracted;
        // Once the contraction term is below the settling shift, more steps cannot help.
        if (rep.error_bound <= target || (ultra && contracted <= eps)) break;
        if (n >= options.max_iterations)
            throw Error(ErrorKind::NotConverged, "no convergence after " + std::to_string(n) + " iterations",
                        details({{"error_bound", rep.error_bound}}));
        prev = x;
        x = step_map(prev);
    }
    rep.iterations = n;

    if (ultra) {
        int known = padic_digits_certified(fd.prime, rep.error_bound);
        for (const auto& c : x.components())
            if (!c.is_exact_zero()) known = std::min(known, c.absolute_precision());
        rep.certified_digits = known;
        std::vector<Scalar> cut;
        for (const auto& c : x.components()) cut.push_back(c.with_absolute_precision(known));
        x = Vector(fd, std::move(cut));
    }
    rep.fixed_point = x;
    rep.achieved_distance = norm(g(x) - x);
    return rep;
}

FixedPointReport iterate_fixed_point(const ContractionProblem& p, const IterationOptions& options) {
    const MapSpec& f = p.f;
    return iterate_self_map([&f](const Vector& x) { return eval(f, x); }, p.domain, contraction_constant(p), p.x0,
                            options);
}

UniformFamilyReport uniform_family_check(const MapSpec& f, const Ball& params, const Ball& state) {
    UniformFamilyReport r;
    r.theta = uniform_state_bound(f, params, state, nullptr);
    r.contraction = r.theta < unit_of(state.field());
    return r;
}

FixedPointReport solve_parameterized(const MapSpec& f, const Vector& p, const Ball& state, const Vector& x0,
                                     std::optional<Magnitude> theta, const IterationOptions& options) {
    const Magnitude th = theta ? *theta : state_lipschitz_bound(f, p, state);
    return iterate_self_map([&](const Vector& x) { return eval(f, concat(p, x)); }, state, th, x0, options);
}

Operator fixed_point_derivative(const MapSpec& f, const Vector& p, const Vector& x_p) {
    const Vector at = concat(p, x_p);
    if (!same_at_precision(eval(f, at), x_p))
        throw Error(ErrorKind::NotAFixedPoint, "x_p is not a fixed point of f(p, .) at tracked precision");
    const Operator beta1 = partial_jacobian(f, at, 0, p.size());
    const Operator beta2 = partial_jacobian(f, at, p.size(), x_p.size());
    return neumann_invert(beta2).inverse * beta1;
}

}  // namespace ultrafix
