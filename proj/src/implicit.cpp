#include "ultrafix/implicit.hpp"

namespace ultrafix {

namespace {

Magnitude in_field(const FieldDescriptor& f, const Rational& q) {
    return f.exact() ? Magnitude(q) : Magnitude(Magnitude(q).to_double());
}

Magnitude shrink_factor(const FieldDescriptor& f) {
    if (f.ultrametric()) return Magnitude::exact(1, f.prime);
    return in_field(f, Rational(1, 2));
}

/// Largest p^j strictly below `bound`: the closed ball with the same points
/// as the open ball of radius `bound`.
Magnitude padic_open_radius(std::int64_t p, const Magnitude& bound) {
    const Magnitude step = Magnitude::exact(p);
    Magnitude m = Magnitude::exact(1);
    while (!(m < bound)) m = m / step;
    while (m * step < bound) m = m * step;
    return m;
}

ParamWindow make_window(const MapSpec& f, const Vector& p0, const Vector& x0, const WindowOptions& opt,
                        bool exact_image) {
    const FieldDescriptor& fd = x0.field();
    const std::size_t k = p0.size(), m = x0.size();
    if (f.vars != k + m || f.codomain_dim() != m)
        throw Error(ErrorKind::DimensionMismatch, "window needs f: K^(k+m) -> K^m with parameters first");
    if (!(Rational(0) < opt.alpha && opt.alpha < Rational(1) && Rational(1) < opt.beta))
        throw Error(ErrorKind::InvalidArgument, "window needs 0 < alpha < 1 < beta");

    ParamWindow w;
    w.p0 = p0;
    w.x0 = x0;
    const Vector at = concat(p0, x0);
    w.z0 = eval(f, at);
    InversionCertificate& c = w.cert;
    c.A = partial_jacobian(f, at, k, m);
    try {
        c.A_inv = invert_exact(c.A);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularMatrix) throw;
        throw Error(ErrorKind::SingularA, "d_x f(p0, x0) is not invertible");
    }
    c.ultrametric = fd.ultrametric();
    c.norm_A = operator_norm(c.A);
    c.norm_A_inv = operator_norm(c.A_inv);
    const Magnitude one = in_field(fd, Rational(1));
    w.tau = min(in_field(fd, opt.beta - 1), in_field(fd, 1 - opt.alpha)) / c.norm_A_inv;
    w.exact_image = exact_image;

    Magnitude rp = opt.param_radius.value_or(one);
    Magnitude r = opt.state_radius.value_or(one);
    const Magnitude shrink = shrink_factor(fd);
    for (std::size_t trial = 0; trial <= opt.max_shrinks; ++trial) {
        w.shrinks = trial;
        const Ball P(p0, rp), B(x0, r);
        Magnitude sigma;
        try {
            sigma = uniform_state_bound(f, P, B, &c.A);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::DomainViolation) throw;
            rp = rp * shrink;
            r = r * shrink;
            continue;
        }
        if (!(sigma <= w.tau)) {
            rp = rp * shrink;
            r = r * shrink;
            continue;
        }
        c.sigma = sigma;
        c.ball = B;
        c.a = one / c.norm_A_inv - sigma;
        c.b = c.norm_A + sigma;
        c.alpha = one - c.theta();
        c.beta = one + c.theta();
        w.delta = one / c.norm_A_inv * c.alpha * r / in_field(fd, Rational(2));
        bool ok;
        if (fd.ultrametric()) {
            w.drift = parameter_drift_bound(f, P, x0, &c.A_inv);
            ok = w.drift <= r;
        } else {
            w.drift = parameter_drift_bound(f, P, x0, nullptr);
            ok = w.drift < w.delta;
        }
        if (!ok) {
            rp = rp * shrink;
            continue;
        }
        w.p_ball = P;
        w.state_ball = B;
        if (exact_image) {
            const Magnitude round = c.norm_A * r;
            w.target_ball = Ball(w.z0, c.norm_A * c.norm_A_inv == one ? round : r / c.norm_A_inv);
        } else if (fd.ultrametric()) {
            w.target_ball = Ball(w.z0, padic_open_radius(fd.prime, w.delta));
        } else {
            w.target_ball = Ball(w.z0, w.delta, false);
        }
        return w;
    }
    throw Error(ErrorKind::WindowNotFound,
                "no certified window after " + std::to_string(opt.max_shrinks) + " shrink steps",
                {{"tau", w.tau.to_string()}, {"param_radius", rp.to_string()}, {"state_radius", r.to_string()}});
}

}  // namespace

bool ParamWindow::contains_parameter(const Vector& p) const { return p_ball.contains(p); }

bool ParamWindow::contains_target(const Vector& c) const {
    if (c.size() != z0.size()) return false;
    if (exact_image) return norm_upper(cert.A_inv.apply(c - z0)) <= state_ball.radius;
    return norm_upper(c - z0) < delta;
}

ParamWindow build_window(const MapSpec& f, const Vector& p0, const Vector& x0, const WindowOptions& options) {
    return make_window(f, p0, x0, options, false);
}

ParamWindow ultrametric_window(const MapSpec& f, const Vector& p0, const Vector& x0, const WindowOptions& options) {
    if (!x0.field().ultrametric())
        throw Error(ErrorKind::InvalidField, "ultrametric_window needs a p-adic field");
    return make_window(f, p0, x0, options, true);
}

Operator implicit_derivative(const MapSpec& f, const Vector& p, const Vector& x) {
    const Vector at = concat(p, x);
    const Operator fx = partial_jacobian(f, at, p.size(), x.size());
    const Operator fp = partial_jacobian(f, at, 0, p.size());
    try {
        return -(invert_exact(fx) * fp);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularMatrix) throw;
        throw Error(ErrorKind::SingularA, "d_x f is not invertible at the solution");
    }
}

ImplicitSolution solve_implicit(const ParamWindow& w, const MapSpec& f, const Vector& p, const Vector& z0,
                                const IterationOptions& options) {
    if (!w.contains_parameter(p)) throw Error(ErrorKind::OutsideWindow, "parameter lies outside the window");
    if (!w.contains_target(z0)) throw Error(ErrorKind::OutsideWindow, "target lies outside the window");
    auto fp = [&](const Vector& x) { return eval(f, concat(p, x)); };
    auto inv = local_invert(w.cert, fp, z0, w.x0, options);
    ImplicitSolution s;
    s.lambda_value = inv.solution;
    s.sub_ball = inv.sub_ball;
    s.report = std::move(inv.report);
    s.derivative = implicit_derivative(f, p, s.lambda_value);
    s.residual = norm_upper(fp(s.lambda_value) - z0);
    return s;
}

}  // namespace ultrafix
