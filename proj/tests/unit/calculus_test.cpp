#include "ultrafix/calculus.hpp"
#include "ultrafix/identities.hpp"
#include "ultrafix/sampling.hpp"

#include <gtest/gtest.h>

using namespace ultrafix;

namespace {

const FieldDescriptor Q5 = FieldDescriptor::padic(5, 4);
const FieldDescriptor Q5_12 = FieldDescriptor::padic(5, 12);
const FieldDescriptor R = FieldDescriptor::real();
const FieldDescriptor Q = FieldDescriptor::rational();

Polynomial term(const Rational& c, Exponent e) { return Polynomial::monomial(c, std::move(e)); }

MapSpec square() { return MapSpec(1, {term(1, {2})}); }
MapSpec x_plus_x2() { return MapSpec(1, {term(1, {1}) + term(1, {2})}); }

Vector V(const FieldDescriptor& f, std::vector<Rational> v) { return Vector::from_rationals(f, v); }
Scalar S(const FieldDescriptor& f, Rational q) { return Scalar::from_rational(f, q); }

}  // namespace

TEST(Eval, Examples) {
    EXPECT_TRUE(same_at_precision(eval(square(), V(Q5, {5})), V(Q5, {25})));
    MapSpec f(2, {term(1, {1, 0}) + term(1, {0, 1}), term(1, {1, 1})});
    auto y = eval(f, V(R, {2, 3}));
    EXPECT_DOUBLE_EQ(y[0].to_double(), 5.0);
    EXPECT_DOUBLE_EQ(y[1].to_double(), 6.0);
    EXPECT_TRUE(eval(MapSpec(1, {Polynomial(1)}), V(Q, {3}))[0].is_zero());
}

TEST(Eval, DomainViolation) {
    MapSpec f(1, {term(1, {2})}, DomainSpec{{0}, Rational(1, 5)});
    EXPECT_NO_THROW(eval(f, V(Q5, {5})));
    try {
        eval(f, V(Q5, {1}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DomainViolation);
    }
}

TEST(DiffQuotient, Examples) {
    EXPECT_EQ(diff_quotient(square(), {V(Q, {1}), V(Q, {1}), S(Q, 0)})[0].rational_value(), 2);
    EXPECT_TRUE(same_at_precision(diff_quotient(square(), {V(Q5, {1}), V(Q5, {1}), S(Q5, 1)}), V(Q5, {3})));
    MapSpec lin(2, {term(3, {1, 0}) + term(-2, {0, 1})});
    Rng rng(1);
    for (int i = 0; i < 20; ++i) {
        Vector x = V(Q, {random_rational(rng, 9, 5), random_rational(rng, 9, 5)});
        Vector y = V(Q, {random_rational(rng, 9, 5), random_rational(rng, 9, 5)});
        Scalar t = S(Q, random_rational(rng, 9, 5));
        EXPECT_TRUE(same_at_precision(diff_quotient(lin, {x, y, t}), eval(lin.unrestricted(), y)));
    }
}

TEST(DiffQuotient, TZeroMatchesJacobian) {
    Rng rng(2);
    MapSpec f = random_map(rng, 3, 2, 4, 5);
    for (int i = 0; i < 20; ++i) {
        Vector x = V(Q, {random_rational(rng, 9, 5), random_rational(rng, 9, 5), random_rational(rng, 9, 5)});
        Vector y = V(Q, {random_rational(rng, 9, 5), random_rational(rng, 9, 5), random_rational(rng, 9, 5)});
        EXPECT_TRUE(same_at_precision(diff_quotient(f, {x, y, S(Q, 0)}), jacobian(f, x).apply(y)));
        // Quotient map agrees with the literal quotient.
        Scalar t = S(Q, random_rational(rng, 9, 5));
        if (t.is_zero()) continue;
        Vector flat = concat(concat(x, y), Vector(Q, {t}));
        EXPECT_TRUE(same_at_precision(eval(quotient_map(f), flat), diff_quotient(f, {x, y, t})));
    }
}

TEST(SecondQuotient, Examples) {
    // d^2 f(x; y1, y2) = 2 y1 y2 for f = x^2.
    SecondQuotientPoint p{{V(Q, {3}), V(Q, {2}), S(Q, 0)}, {V(Q, {5}), V(Q, {0}), S(Q, 0)}, S(Q, 0)};
    EXPECT_EQ(second_quotient(square(), p)[0].rational_value(), 20);
    SecondQuotientPoint p2{{V(Q, {3}), V(Q, {2}), S(Q, 0)}, {V(Q, {5}), V(Q, {0}), S(Q, 0)}, S(Q, Rational(1, 7))};
    EXPECT_EQ(second_quotient(square(), p2)[0].rational_value(), 20);
    MapSpec lin(1, {term(4, {1})});
    EXPECT_TRUE(second_quotient(lin, p2)[0].is_zero());
    // x^3 at 0: d^2 f(0; 1, 1) = 0, and the small-s quotients of quotients shrink with s.
    MapSpec cube(1, {term(1, {3})});
    SecondQuotientPoint c{{V(Q, {0}), V(Q, {1}), S(Q, 0)}, {V(Q, {1}), V(Q, {0}), S(Q, 0)}, S(Q, 0)};
    EXPECT_EQ(second_quotient(cube, c)[0].rational_value(), 0);
    for (int k = 1; k <= 6; ++k) {
        Rational s(1, 1 << (3 * k));
        c.s = S(Q, s);
        EXPECT_EQ(second_quotient(cube, c)[0].rational_value(), 3 * s);
    }
}

TEST(Jacobian, Examples) {
    MapSpec f(2, {term(1, {1, 1}), term(1, {1, 0}) + term(1, {0, 1})});
    auto J = jacobian(f, V(Q, {2, 3}));
    EXPECT_EQ(J(0, 0).rational_value(), 3);
    EXPECT_EQ(J(0, 1).rational_value(), 2);
    EXPECT_EQ(J(1, 0).rational_value(), 1);
    EXPECT_EQ(J(1, 1).rational_value(), 1);
    EXPECT_TRUE(same_at_precision(jacobian(x_plus_x2(), V(Q5, {0})), Operator::identity(Q5, 1)));
}

TEST(Compose, Examples) {
    MapSpec f(1, {term(1, {1}) + term(1, {0})});
    MapSpec c = compose(square(), f);
    EXPECT_EQ(c.outputs[0], term(1, {2}) + term(2, {1}) + term(1, {0}));
    MapSpec id(1, {term(1, {1})});
    EXPECT_EQ(compose(id, x_plus_x2()).outputs, x_plus_x2().outputs);
    EXPECT_THROW(compose(MapSpec(2, {term(1, {1, 1})}), square()), Error);
}

TEST(Lipschitz, Examples) {
    Ball b5(V(Q5, {0}), Magnitude::exact(1, 5));
    EXPECT_EQ(lipschitz_bound(square(), b5), Magnitude::exact(1, 5));
    Ball r1(V(R, {0}), Magnitude(1.0));
    MapSpec f(1, {term(Rational(1, 10), {2})});
    EXPECT_NEAR(lipschitz_bound(f, r1).to_double(), 0.2, 1e-15);
    MapSpec affine(2, {term(1, {1, 0}) + term(2, {0, 1}) + term(7, {0, 0}), term(3, {1, 0}) + term(4, {0, 1})});
    Ball r2(V(R, {1, -1}), Magnitude(0.3));
    EXPECT_DOUBLE_EQ(lipschitz_bound(affine, r2).to_double(), 7.0);
}

TEST(Lipschitz, DominatesJacobianAndSampledQuotients) {
    Rng rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        MapSpec f = random_map(rng, 2, 2, 3, 4);
        for (const auto& fd : {Q5_12, R}) {
            Ball b(V(fd, {random_rational(rng, 3, 2), random_rational(rng, 3, 2)}),
                   fd.ultrametric() ? Magnitude::exact(1, 5) : Magnitude(0.5));
            Magnitude L = lipschitz_bound(f, b);
            for (int i = 0; i < 100; ++i) {
                Vector y = sample_in_ball(b, rng), z = sample_in_ball(b, rng);
                EXPECT_TRUE(within(operator_norm(jacobian(f, y)), L, 1e-12));
                Magnitude d = norm(z - y);
                if (d.is_zero()) continue;
                EXPECT_TRUE(within(norm(eval(f, z) - eval(f, y)) / d, L, 1e-12));
            }
        }
    }
}

TEST(Strictness, Examples) {
    Ball b5(V(Q5, {0}), Magnitude::exact(1, 5));
    EXPECT_EQ(strictness_modulus(x_plus_x2(), Operator::identity(Q5, 1), b5), Magnitude::exact(1, 5));
    MapSpec affine(1, {term(3, {1}) + term(1, {0})});
    EXPECT_TRUE(strictness_modulus(affine, Operator::from_rationals(Q5, {{3}}), b5).is_zero());
    MapSpec f(1, {term(1, {1}) + term(Rational(1, 10), {2})});
    Ball r1(V(R, {0}), Magnitude(1.0));
    EXPECT_NEAR(strictness_modulus(f, Operator::identity(R, 1), r1).to_double(), 0.2, 1e-15);
}

TEST(Strictness, CenterShiftIsTaylorExpanded) {
    // x^2 on B(3, 1/2) with A = 6: residual (x-3)^2 has Lipschitz bound 2 * 1/2 = 1.
    Ball b(V(Q, {3}), Magnitude::exact(1, 2));
    EXPECT_EQ(strictness_modulus(square(), Operator::from_rationals(Q, {{6}}), b), Magnitude::exact(1));
    EXPECT_EQ(lipschitz_bound(square(), b), Magnitude::exact(7));
}

TEST(Identities, PassForPolynomials) {
    for (const auto& fd : {Q, Q5_12}) {
        auto rep = check_identities(square(), fd, 100, 1);
        EXPECT_TRUE(rep.passed()) << fd.to_string();
        MapSpec lin(2, {term(3, {1, 0}) + term(-2, {0, 1}), term(1, {0, 1})});
        EXPECT_TRUE(check_identities(lin, fd, 50, 2).passed());
    }
}

TEST(Identities, MutationIsCaught) {
    auto rep = check_identities(square(), Q, 100, 1, Execution::serial, quotient_plus_one);
    ASSERT_EQ(rep.identities.size(), 4u);
    EXPECT_FALSE(rep.passed());
    const auto& rescaling = rep.identities[2];
    EXPECT_EQ(rescaling.name, "rescaling");
    ASSERT_TRUE(rescaling.witness.has_value());
    EXPECT_FALSE(same_at_precision(rescaling.witness->lhs, rescaling.witness->rhs));
}

TEST(Identities, SerialAndParallelAgree) {
    Rng rng(4);
    MapSpec f = random_map(rng, 2, 2, 4, 5);
    auto a = check_identities(f, Q, 60, 3, Execution::serial, quotient_plus_one);
    auto b = check_identities(f, Q, 60, 3, Execution::parallel, quotient_plus_one);
    ASSERT_EQ(a.identities.size(), b.identities.size());
    for (std::size_t i = 0; i < a.identities.size(); ++i) {
        EXPECT_EQ(a.identities[i].failures, b.identities[i].failures);
        ASSERT_EQ(a.identities[i].witness.has_value(), b.identities[i].witness.has_value());
        if (a.identities[i].witness) EXPECT_EQ(a.identities[i].witness->sample, b.identities[i].witness->sample);
    }
}
