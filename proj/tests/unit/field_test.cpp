#include "ultrafix/field.hpp"

#include <gtest/gtest.h>

#include <vector>

using namespace ultrafix;

namespace {

const FieldDescriptor Q5 = FieldDescriptor::padic(5, 4);

Scalar digits(const FieldDescriptor& f, int start, std::vector<std::int64_t> d) {
    return Scalar::from_padic_digits(f, start, d);
}

}  // namespace

TEST(FieldDescriptor, RejectsCompositePrime) {
    EXPECT_THROW(FieldDescriptor::padic(6, 4), Error);
    EXPECT_THROW(FieldDescriptor::padic(5, 0), Error);
    EXPECT_THROW(FieldDescriptor::padic(5, 40), Error);
    EXPECT_NO_THROW(FieldDescriptor::padic(5, 26));
}

TEST(Padic, MinusQuarterDigits) {
    // -1/4 = ...1111 in Z_5; residue 156 mod 625.
    Scalar x = Scalar::from_rational(Q5, Rational(-1, 4));
    EXPECT_EQ(x.valuation(), 0);
    EXPECT_EQ(x.unit(), 156);
    EXPECT_EQ(x.unit_digits(), (std::vector<std::int64_t>{1, 1, 1, 1}));
}

TEST(Padic, AbsoluteValueIsExactPowerOfP) {
    Scalar x = Scalar::from_rational(Q5, Rational(50, 3));
    EXPECT_EQ(x.valuation(), 2);
    EXPECT_EQ(x.abs(), Magnitude::exact(1, 25));
    EXPECT_EQ(Scalar::from_rational(Q5, Rational(1, 5)).abs(), Magnitude::exact(5));
}

TEST(Padic, FieldAxiomsOnSamples) {
    for (int a = -7; a <= 7; ++a) {
        for (int b = 1; b <= 9; ++b) {
            Scalar x = Scalar::from_rational(Q5, Rational(a, b));
            Scalar y = Scalar::from_rational(Q5, Rational(b, 3));
            EXPECT_TRUE(same_at_precision(x + y, y + x));
            EXPECT_TRUE(same_at_precision((x + y) - y, x));
            EXPECT_TRUE(same_at_precision(x * y / y, x));
            EXPECT_TRUE(same_at_precision(x * (y + y), x * y + x * y));
        }
    }
}

TEST(Padic, CancellationLosesPrecision) {
    Scalar a = digits(Q5, 0, {1, 2, 3, 4});
    Scalar b = digits(Q5, 0, {1, 2, 3, 0});
    Scalar d = a - b;
    EXPECT_EQ(d.valuation(), 3);
    EXPECT_EQ(d.absolute_precision(), 4);
    EXPECT_EQ(d.relative_precision(), 1);

    Scalar z = a - a;
    EXPECT_TRUE(z.is_zero());
    EXPECT_FALSE(z.is_exact_zero());
    EXPECT_EQ(z.absolute_precision(), 4);
}

TEST(Padic, DivisionErrors) {
    Scalar one = Scalar::one(Q5);
    try {
        (void)(one / Scalar::zero(Q5));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DivisionByZero);
    }
    try {
        Scalar a = digits(Q5, 0, {1, 2, 3, 4});
        (void)(one / (a - a));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::PrecisionExhausted);
    }
}

TEST(Padic, ExactInputsCancelExactly) {
    Scalar three = Scalar::from_int(Q5, 3);
    EXPECT_TRUE((three - three).is_exact_zero());
    Scalar big = Scalar::from_rational(Q5, Rational(1) + Rational(9765625));   // 1 + 5^10
    Scalar diff = big - Scalar::one(Q5);
    EXPECT_EQ(diff.valuation(), 10);
    EXPECT_EQ(diff.relative_precision(), 4);
    EXPECT_EQ(digits(Q5, 0, {3}).exact_rational(), nullptr);
}

TEST(Padic, MultiplicationKeepsMinimumRelativePrecision) {
    Scalar a = digits(Q5, 1, {2, 1});        // 5*(2 + 5) known to 5^3
    Scalar b = Scalar::from_int(Q5, 3);      // full N digits
    Scalar c = a * b;
    EXPECT_EQ(c.valuation(), 1);
    EXPECT_EQ(c.relative_precision(), 2);
    EXPECT_EQ(c.unit(), 21 % 25);
}

TEST(Padic, DigitsWithLeadingZerosNormalize) {
    Scalar x = digits(Q5, 0, {0, 1, 4, 1});
    EXPECT_EQ(x.valuation(), 1);
    EXPECT_EQ(x.absolute_precision(), 4);
    EXPECT_EQ(x.residue(4), 230);
}

TEST(Padic, NegativeValuation) {
    Scalar x = Scalar::from_rational(Q5, Rational(2, 25));
    EXPECT_EQ(x.valuation(), -2);
    Scalar y = x * Scalar::from_int(Q5, 25);
    EXPECT_TRUE(same_at_precision(y, Scalar::from_int(Q5, 2)));
}

TEST(Padic, CertifiedDigits) {
    EXPECT_EQ(padic_digits_certified(5, Magnitude::exact(1, 625)), 4);
    EXPECT_EQ(padic_digits_certified(5, Magnitude::exact(1, 600)), 3);
    EXPECT_EQ(padic_digits_certified(5, Magnitude::exact(1)), 0);
    EXPECT_EQ(padic_digits_certified(5, Magnitude::exact(7)), -2);
    EXPECT_EQ(padic_radius_exponent(5, Magnitude::exact(1, 25)), -2);
    EXPECT_THROW(padic_radius_exponent(5, Magnitude::exact(1, 3)), Error);
}

TEST(Real, ToleranceEquality) {
    auto R = FieldDescriptor::real(1e-9);
    EXPECT_TRUE(same_at_precision(Scalar::from_double(R, 1.0), Scalar::from_double(R, 1.0 + 1e-12)));
    EXPECT_FALSE(same_at_precision(Scalar::from_double(R, 1.0), Scalar::from_double(R, 1.001)));
    EXPECT_THROW((void)(Scalar::one(R) / Scalar::zero(R)), Error);
}

TEST(RationalField, ExactArithmetic) {
    auto Q = FieldDescriptor::rational();
    Scalar x = Scalar::from_rational(Q, Rational(1, 3));
    EXPECT_EQ((x + x + x).rational_value(), Rational(1));
    EXPECT_EQ(x.abs(), Magnitude::exact(1, 3));
}

TEST(Field, MismatchIsRejected) {
    auto Q7 = FieldDescriptor::padic(7, 4);
    EXPECT_THROW((void)(Scalar::one(Q5) + Scalar::one(Q7)), Error);
}
