#include "ultrafix/implicit.hpp"
#include "ultrafix/sampling.hpp"

#include <gtest/gtest.h>

using namespace ultrafix;

namespace {

const FieldDescriptor Q5 = FieldDescriptor::padic(5, 4);
const FieldDescriptor Q5_8 = FieldDescriptor::padic(5, 8);
const FieldDescriptor R = FieldDescriptor::real();

Polynomial term(const Rational& c, Exponent e) { return Polynomial::monomial(c, std::move(e)); }
Vector V(const FieldDescriptor& f, std::vector<Rational> v) { return Vector::from_rationals(f, v); }

// f(p, x) = x + x^2 - p
MapSpec hensel() { return MapSpec(2, {term(1, {0, 1}) + term(1, {0, 2}) - term(1, {1, 0})}); }

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(Window, PadicExample) {
    auto w = build_window(hensel(), V(Q5, {0}), V(Q5, {0}));
    EXPECT_EQ(w.p_ball.radius, Magnitude::exact(1, 5));
    EXPECT_EQ(w.state_ball.radius, Magnitude::exact(1, 5));
    EXPECT_EQ(w.cert.sigma, Magnitude::exact(1, 5));
    EXPECT_EQ(w.delta, Magnitude::exact(2, 25));
    EXPECT_EQ(w.tau, Magnitude::exact(1, 2));
}

TEST(Window, LinearHasZeroSigma) {
    MapSpec f(2, {term(1, {0, 1}) - term(1, {1, 0})});
    auto w = build_window(f, V(R, {0}), V(R, {0}));
    EXPECT_TRUE(w.cert.sigma.is_zero());
    EXPECT_DOUBLE_EQ(w.delta.to_double(), w.state_ball.radius.to_double() / 2);
    EXPECT_LT(w.drift, w.delta);
}

TEST(Window, RealGivenRadii) {
    MapSpec f(2, {term(1, {0, 1}) + term(1, {1, 1})});
    WindowOptions opt;
    opt.param_radius = Magnitude(0.25);
    opt.state_radius = Magnitude(1.0);
    auto w = build_window(f, V(R, {0}), V(R, {0}), opt);
    EXPECT_EQ(w.shrinks, 0u);
    EXPECT_LE(w.cert.sigma.to_double(), 0.25);
}

TEST(Window, Errors) {
    MapSpec flat(2, {term(1, {0, 2}) - term(1, {1, 0})});
    EXPECT_EQ(kind_of([&] { build_window(flat, V(R, {0}), V(R, {0})); }), ErrorKind::SingularA);
    WindowOptions opt;
    opt.max_shrinks = 0;
    EXPECT_EQ(kind_of([&] { build_window(hensel(), V(Q5, {0}), V(Q5, {0}), opt); }), ErrorKind::WindowNotFound);
    EXPECT_EQ(kind_of([&] { ultrametric_window(hensel(), V(R, {0}), V(R, {0})); }), ErrorKind::InvalidField);
}

TEST(SolveImplicit, PadicGolden) {
    auto f = hensel();
    auto w = build_window(f, V(Q5, {0}), V(Q5, {0}));
    auto s = solve_implicit(w, f, V(Q5, {5}), V(Q5, {0}));
    EXPECT_EQ(s.lambda_value[0].residue(4), 230);
    EXPECT_EQ(s.derivative(0, 0).residue(4), 141);
    EXPECT_EQ(s.derivative(0, 0).unit_digits(), (std::vector<std::int64_t>{1, 3, 0, 1}));
    EXPECT_EQ((1 + 2 * 230) * 141 % 625, 1);
    EXPECT_TRUE(s.residual <= Magnitude::exact(1, 625));
}

TEST(SolveImplicit, RealLinear) {
    // x/2 - p + 1 = 0 gives lambda(p) = 2p - 2.
    MapSpec f(2, {term(Rational(1, 2), {0, 1}) - term(1, {1, 0}) + term(1, {0, 0})});
    auto w = build_window(f, V(R, {1}), V(R, {0}));
    const double p = 1.0 + w.p_ball.radius.to_double() / 2;
    auto s = solve_implicit(w, f, Vector(R, {Scalar::from_double(R, p)}), V(R, {0}));
    EXPECT_NEAR(s.lambda_value[0].to_double(), 2 * p - 2, 1e-12);
    EXPECT_NEAR(s.derivative(0, 0).to_double(), 2.0, 1e-12);
}

TEST(SolveImplicit, BasePointReturnsX0) {
    auto f = hensel();
    auto w = build_window(f, V(Q5, {0}), V(Q5, {0}));
    auto s = solve_implicit(w, f, w.p0, w.z0);
    EXPECT_TRUE(same_at_precision(s.lambda_value, w.x0));
    auto fr = MapSpec(2, {term(2, {0, 1}) + term(Rational(1, 10), {0, 2}) + term(1, {1, 1})});
    auto wr = build_window(fr, V(R, {Rational(1, 3)}), V(R, {Rational(1, 5)}));
    EXPECT_NEAR(solve_implicit(wr, fr, wr.p0, wr.z0).lambda_value[0].to_double(), 0.2, 1e-12);
}

TEST(SolveImplicit, OutsideWindow) {
    auto f = hensel();
    auto w = build_window(f, V(Q5, {0}), V(Q5, {0}));
    EXPECT_EQ(kind_of([&] { solve_implicit(w, f, V(Q5, {1}), V(Q5, {0})); }), ErrorKind::OutsideWindow);
    EXPECT_EQ(kind_of([&] { solve_implicit(w, f, V(Q5, {0}), V(Q5, {Rational(1, 5)})); }), ErrorKind::OutsideWindow);
}

TEST(UltrametricWindow, CommonImage) {
    auto f = hensel();
    auto w = ultrametric_window(f, V(Q5, {0}), V(Q5, {0}));
    EXPECT_TRUE(w.exact_image);
    EXPECT_EQ(w.target_ball.radius, Magnitude::exact(1, 5));
    // Every parameter reaches every target of V = B(0, 1/5).
    Rng rng(1);
    for (int i = 0; i < 30; ++i) {
        Vector p = sample_in_ball(w.p_ball, rng);
        Vector c = sample_in_ball(w.target_ball, rng);
        ASSERT_TRUE(w.contains_target(c));
        auto s = solve_implicit(w, f, p, c);
        EXPECT_TRUE(w.state_ball.contains(s.lambda_value));
        EXPECT_TRUE(same_at_precision(eval(f, concat(p, s.lambda_value)), c));
    }
}

TEST(UltrametricWindow, ScaledA) {
    // 5x + x^2 - p: A = 5, image radius is ||A|| r.
    MapSpec f(2, {term(5, {0, 1}) + term(1, {0, 2}) - term(1, {1, 0})});
    auto w = ultrametric_window(f, V(Q5_8, {0}), V(Q5_8, {0}));
    EXPECT_EQ(w.state_ball.radius, Magnitude::exact(1, 25));
    EXPECT_EQ(w.p_ball.radius, Magnitude::exact(1, 125));
    EXPECT_EQ(w.target_ball.radius, Magnitude::exact(1, 125));
    Rng rng(2);
    for (int i = 0; i < 20; ++i) {
        Vector p = sample_in_ball(w.p_ball, rng);
        Vector c = sample_in_ball(w.target_ball, rng);
        auto s = solve_implicit(w, f, p, c);
        EXPECT_TRUE(same_at_precision(eval(f, concat(p, s.lambda_value)), c));
    }
}

TEST(UltrametricWindow, LinearShift) {
    MapSpec f(2, {term(1, {0, 1}) - term(1, {1, 0})});
    auto w = ultrametric_window(f, V(Q5, {3}), V(Q5, {0}));
    EXPECT_TRUE(w.cert.sigma.is_zero());
    EXPECT_EQ(w.z0[0].residue(4), 625 - 3);
    EXPECT_EQ(w.target_ball.radius, w.state_ball.radius);
}

TEST(Graph, SolveReturnsChosenPoint) {
    MapSpec f(3, {term(1, {0, 1, 0}) + term(1, {0, 0, 2}) + term(1, {1, 1, 0}),
                  term(2, {0, 0, 1}) + term(1, {0, 1, 1}) - term(1, {1, 0, 0})});
    for (const auto& fd : {Q5_8, R}) {
        auto w = build_window(f, V(fd, {0}), V(fd, {0, 0}));
        Rng rng(4);
        int solved = 0;
        for (int i = 0; i < 40; ++i) {
            Vector p = sample_in_ball(w.p_ball, rng);
            Vector y = sample_in_ball(w.state_ball, rng);
            Vector z = eval(f, concat(p, y));
            if (!w.contains_target(z)) continue;
            auto s = solve_implicit(w, f, p, z);
            if (fd.ultrametric()) {
                EXPECT_TRUE(same_at_precision(s.lambda_value, y));
            } else {
                EXPECT_NEAR(norm(s.lambda_value - y).to_double(), 0.0, 1e-9);
            }
            ++solved;
        }
        EXPECT_GT(solved, 0);
    }
}

TEST(Derivative, RealMatchesResolve) {
    MapSpec f(2, {term(2, {0, 1}) + term(Rational(1, 10), {0, 2}) + term(1, {1, 1}) - term(1, {1, 0})});
    auto w = build_window(f, V(R, {0}), V(R, {0}));
    const double p = w.p_ball.radius.to_double() / 3, t = 1e-6;
    auto at = [&](double q) { return solve_implicit(w, f, Vector(R, {Scalar::from_double(R, q)}), w.z0); };
    auto base = at(p);
    const double dq = (at(p + t).lambda_value[0].to_double() - base.lambda_value[0].to_double()) / t;
    const double d = base.derivative(0, 0).to_double();
    EXPECT_LE(std::abs(dq - d) / std::abs(d), 1e-5);
}

TEST(Derivative, PadicMatchesResolveWellScaled) {
    // x + 5^6 x^2 - p: the second-order term of lambda sits beyond the
    // digits the quotient can resolve.
    MapSpec f(2, {term(1, {0, 1}) + term(15625, {0, 2}) - term(1, {1, 0})});
    auto w = build_window(f, V(Q5_8, {0}), V(Q5_8, {0}));
    const Vector p = V(Q5_8, {Rational(1, 3)});
    ASSERT_TRUE(w.contains_parameter(p));
    auto base = solve_implicit(w, f, p, w.z0);
    for (int m = 1; m <= 3; ++m) {
        const Scalar t = Scalar::from_int(Q5_8, m == 1 ? 5 : m == 2 ? 25 : 125);
        auto moved = solve_implicit(w, f, Vector(Q5_8, {p[0] + t}), w.z0);
        const Scalar dq = (moved.lambda_value[0] - base.lambda_value[0]) / t;
        EXPECT_GE(dq.absolute_precision(), 8 - m);
        EXPECT_EQ(dq.residue(8 - m), base.derivative(0, 0).residue(8 - m)) << m;
    }
}
