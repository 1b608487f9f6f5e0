#include <gtest/gtest.h>

#include "skl/gl2.hpp"

using namespace skl;

TEST(GL2, DeltaCoefficients) {
    auto d = delta_series(10);
    std::vector<long> tau = {0, 1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643};
    for (long n = 0; n < 10; ++n) EXPECT_EQ(d.at(n), tau[n]);
}

TEST(GL2, EisensteinIsSigma) {
    auto e4 = eisenstein_series(4, 50), e6 = eisenstein_series(6, 50);
    for (long n = 1; n < 50; ++n) {
        EXPECT_EQ(e4.at(n), 240 * sigma(3, n));
        EXPECT_EQ(e6.at(n), -504 * sigma(5, n));
    }
}

TEST(GL2, DimensionFormula) {
    EXPECT_EQ(dim_cusp_level1(12), 1);
    EXPECT_EQ(dim_cusp_level1(14), 0);
    EXPECT_EQ(dim_cusp_level1(24), 2);
    EXPECT_EQ(dim_cusp_level1(34), 2);
    EXPECT_EQ(dim_cusp_level1(46), 3);
}

TEST(GL2, VictorMillerIsEchelon) {
    auto b = victor_miller_basis(36, 20);
    ASSERT_EQ(b.size(), 3u);
    for (long i = 0; i < 3; ++i)
        for (long j = 1; j <= 3; ++j) EXPECT_EQ(b[i].at(j), i + 1 == j ? 1 : 0);
}

TEST(GL2, Weight24EigenvaluesMatchClosedForm) {
    DigitsGuard g(50);
    auto e = eigenbasis_level1(24, 20);
    ASSERT_EQ(e.forms.size(), 2u);
    Real s = 12 * sqrt(Real(144169));
    Real lo = 540 - s, hi = 540 + s;
    Real a = e.forms[0].a(2), b = e.forms[1].a(2);
    if (a > b) std::swap(a, b);
    EXPECT_LT(abs(a - lo), eps_digits(40));
    EXPECT_LT(abs(b - hi), eps_digits(40));
    EXPECT_LT(e.max_residual, eps_digits(30));
}

TEST(GL2, EigenformsAreMultiplicativeAndSatisfyDeligne) {
    DigitsGuard g(50);
    for (long w : {22L, 24L, 34L}) {
        for (auto& f : eigenbasis_level1(w, 120).forms) {
            for (long m = 1; m <= 10; ++m)
                for (long n = 1; n <= 10; ++n) {
                    if (gcd(m, n) != 1) continue;
                    EXPECT_LT(abs(f.a(m * n) - f.a(m) * f.a(n)), eps_digits(30) * (abs(f.a(m * n)) + 1));
                }
            for (long p : primes_upto(120)) EXPECT_LE(abs(f.lambda(p)), Real(2));
        }
    }
}

TEST(GL2, RationalEigenformMatchesDelta) {
    DigitsGuard g(40);
    auto e = eigenbasis_level1(12, 60);
    ASSERT_EQ(e.forms.size(), 1u);
    ASSERT_TRUE(e.forms[0].exact());
    auto d = delta_series(61);
    for (long n = 1; n <= 60; ++n) EXPECT_EQ(e.forms[0].a_exact(n), d.at(n));
    EXPECT_EQ(e.forms[0].label(), "12.1.a");
}

TEST(GL2, NewformRejectsBadInput) {
    std::vector<Real> a = {Real(0), Real(2)};
    EXPECT_THROW(NewformGL2("x", 1, 12, a), DataError);
    std::vector<Real> b = {Real(0), Real(1)};
    EXPECT_THROW(NewformGL2("x", 15, 2, b, {}, {{3, 1}}), DataError);
    EXPECT_NO_THROW(NewformGL2("x", 15, 2, b, {}, {{3, 1}, {5, -1}}));
}

TEST(GL2, OldBasisGramRatioAtTrivialIndex) {
    DigitsGuard g(30);
    auto f = eigenbasis_level1(12, 40).forms[0];
    EXPECT_EQ(gram_ratio(f, 1, 1, 3), 1);
    // <f|B_3, f|B_3> = <f, f> for the normalized B
    EXPECT_EQ(gram_ratio(f, 3, 3, 3), 1);
    auto ob = old_basis(f, 3, 30);
    EXPECT_EQ(ob.size(), 2u);
    EXPECT_EQ(ob[0].series.at(3), f.a_exact(3) + 729);  // sigma = +1: f + f|B_3
}

TEST(GL2, FormalAtkinLehnerIsInvolution) {
    std::map<long, int> v = {{1, 1}, {5, -1}};
    auto w = formal_W(formal_W(v, 3), 3);
    EXPECT_EQ(w, v);
    EXPECT_EQ(star(15, 3), 5);
}
