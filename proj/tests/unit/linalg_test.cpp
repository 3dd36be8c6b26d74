#include "ultrafix/linalg.hpp"
#include "ultrafix/sampling.hpp"

#include <gtest/gtest.h>

using namespace ultrafix;

namespace {

const FieldDescriptor Q5 = FieldDescriptor::padic(5, 4);
const FieldDescriptor Q5_8 = FieldDescriptor::padic(5, 8);
const FieldDescriptor R = FieldDescriptor::real();

using Rows = std::vector<std::vector<Rational>>;

}  // namespace

TEST(Norms, VectorMaxNorm) {
    EXPECT_EQ(norm(Vector::from_rationals(Q5, {5, 1})), Magnitude::exact(1));
    EXPECT_EQ(norm(Vector::from_rationals(Q5, {0, 0})), Magnitude::exact(0));
    EXPECT_DOUBLE_EQ(norm(Vector::from_rationals(R, {3, -4})).to_double(), 4.0);
}

TEST(Norms, OperatorNormClosedForms) {
    EXPECT_EQ(operator_norm(Operator::from_rationals(Q5, Rows{{5, 1}, {25, 5}})), Magnitude::exact(1));
    EXPECT_DOUBLE_EQ(operator_norm(Operator::from_rationals(R, Rows{{1, 2}, {3, 4}})).to_double(), 7.0);
    EXPECT_TRUE(operator_norm(Operator(Q5, 2, 2)).is_zero());
}

TEST(Norms, RealOperatorNormAttainedOnSignVectors) {
    auto a = Operator::from_rationals(R, Rows{{1, 2}, {3, 4}});
    double best = 0;
    for (int s0 : {-1, 1})
        for (int s1 : {-1, 1}) best = std::max(best, norm(a.apply(Vector::from_rationals(R, {s0, s1}))).to_double());
    EXPECT_DOUBLE_EQ(best, operator_norm(a).to_double());
}

TEST(Norms, SubmultiplicativeAndMinimalDistortion) {
    Rng rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        for (const auto& f : {Q5_8, R}) {
            Rows ra(3, std::vector<Rational>(3)), rb(3, std::vector<Rational>(3));
            for (auto& row : ra)
                for (auto& x : row) x = random_rational(rng, 30, 7);
            for (auto& row : rb)
                for (auto& x : row) x = random_rational(rng, 30, 7);
            auto a = Operator::from_rationals(f, ra);
            auto b = Operator::from_rationals(f, rb);
            EXPECT_TRUE(within(operator_norm(a * b), operator_norm(a) * operator_norm(b), 1e-12));
            Operator ai;
            try {
                ai = invert_exact(a);
            } catch (const Error&) {
                continue;
            }
            Vector u = Vector::from_rationals(f, {random_rational(rng, 9, 4), random_rational(rng, 9, 4), 1});
            Magnitude lhs = norm(a.apply(u));
            Magnitude rhs = norm(u) / operator_norm(ai);
            EXPECT_TRUE(within(rhs, lhs, 1e-9)) << f.to_string();
        }
    }
}

TEST(Invert, Examples) {
    auto id = Operator::identity(Q5, 2);
    EXPECT_TRUE(same_at_precision(invert_exact(id), id));
    auto d = Operator::from_rationals(Q5, Rows{{5, 0}, {0, 1}});
    EXPECT_TRUE(same_at_precision(invert_exact(d), Operator::from_rationals(Q5, Rows{{Rational(1, 5), 0}, {0, 1}})));
    auto u = Operator::from_rationals(R, Rows{{1, 1}, {0, 1}});
    auto ui = invert_exact(u);
    EXPECT_DOUBLE_EQ(ui(0, 1).to_double(), -1.0);
    EXPECT_THROW(invert_exact(Operator::from_rationals(Q5, Rows{{1, 2}, {2, 4}})), Error);
}

TEST(Neumann, NilpotentReal) {
    auto alpha = Operator::from_rationals(R, Rows{{0, Rational(1, 2)}, {0, 0}});
    auto r = neumann_invert(alpha);
    EXPECT_DOUBLE_EQ(r.inverse(0, 1).to_double(), 0.5);
    EXPECT_DOUBLE_EQ(r.bound.to_double(), 2.0);
    EXPECT_DOUBLE_EQ(operator_norm(r.inverse).to_double(), 1.5);
}

TEST(Neumann, PadicGeometricSeries) {
    auto alpha = Operator::from_rationals(Q5, Rows{{5}});
    auto r = neumann_invert(alpha);
    EXPECT_EQ(r.inverse(0, 0).unit_digits(), (std::vector<std::int64_t>{1, 1, 1, 1}));
    EXPECT_EQ(r.bound, Magnitude::exact(5, 4));
    EXPECT_TRUE(same_at_precision(r.inverse(0, 0), Scalar::from_rational(Q5, Rational(-1, 4))));
}

TEST(Neumann, ZeroAndRejection) {
    auto r = neumann_invert(Operator(Q5, 2, 2));
    EXPECT_TRUE(same_at_precision(r.inverse, Operator::identity(Q5, 2)));
    EXPECT_EQ(r.bound, Magnitude::exact(1));
    try {
        neumann_invert(Operator::from_rationals(Q5, Rows{{1}}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotAContraction);
    }
}

TEST(Neumann, InverseOfIdMinusAlphaRandom) {
    Rng rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        Rows rows(3, std::vector<Rational>(3));
        for (auto& row : rows)
            for (auto& x : row) x = random_rational(rng, 20, 4) * 5;
        auto alpha = Operator::from_rationals(Q5_8, rows);
        auto r = neumann_invert(alpha);
        auto prod = (Operator::identity(Q5_8, 3) - alpha) * r.inverse;
        EXPECT_TRUE(same_at_precision(prod, Operator::identity(Q5_8, 3)));
        EXPECT_LE(operator_norm(r.inverse), r.bound);
    }
}

TEST(Isometry, Examples) {
    auto a = Operator::from_rationals(Q5, Rows{{1, 5}, {0, 1}});
    auto rep = classify_isometry(a, 200, 1);
    EXPECT_EQ(rep.classification, IsometryClass::in_omega);
    EXPECT_EQ(rep.distance_to_identity, Magnitude::exact(1, 5));
    EXPECT_TRUE(rep.exact_isometry);
    EXPECT_TRUE(rep.sampled_isometry);

    auto d = classify_isometry(Operator::from_rationals(Q5, Rows{{5, 0}, {0, 1}}));
    EXPECT_EQ(d.classification, IsometryClass::neither);
    EXPECT_FALSE(d.sampled_isometry);

    auto perm = classify_isometry(Operator::from_rationals(Q5, Rows{{0, 1}, {1, 0}}));
    EXPECT_EQ(perm.classification, IsometryClass::isometry);
    EXPECT_TRUE(perm.sampled_isometry);

    EXPECT_EQ(classify_isometry(Operator::identity(Q5, 3)).classification, IsometryClass::in_omega);
}

TEST(Ball, PadicMembershipAndRadii) {
    Ball b(Vector::from_rationals(Q5, {0}), Magnitude::exact(1, 5));
    EXPECT_TRUE(b.contains(Vector::from_rationals(Q5, {5})));
    EXPECT_FALSE(b.contains(Vector::from_rationals(Q5, {1})));
    EXPECT_THROW(Ball(Vector::from_rationals(Q5, {0}), Magnitude::exact(1, 3)), Error);
    Ball open(Vector::from_rationals(Q5, {0}), Magnitude::exact(1), false);
    EXPECT_EQ(open.closed_exponent(), -1);
    Rng rng(5);
    for (int i = 0; i < 200; ++i) EXPECT_TRUE(b.contains(sample_in_ball(b, rng)));
}
