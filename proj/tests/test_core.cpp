#include <gtest/gtest.h>

#include "skl/gl2.hpp"
#include "skl/kohnen.hpp"

using namespace skl;

namespace {

QSeries<mpz_class> zs(std::vector<long> v, long prec, long w = 0, long N = 1) {
    std::vector<mpz_class> c(v.begin(), v.end());
    c.resize(std::max<std::size_t>(c.size(), prec), 0);
    return QSeries<mpz_class>(c, prec, w, N);
}

}  // namespace

TEST(Series, MulHandCases) {
    // (1 + q)(1 - q) = 1 - q^2
    auto a = zs({1, 1, 0, 0}, 4), b = zs({1, -1, 0, 0}, 4);
    auto c = a * b;
    EXPECT_EQ(c.prec(), 4);
    EXPECT_EQ(c.at(0), 1);
    EXPECT_EQ(c.at(1), 0);
    EXPECT_EQ(c.at(2), -1);
    EXPECT_EQ(c.at(3), 0);
    // (1 + 2q + 3q^2)^2 = 1 + 4q + 10q^2 + ...
    auto d = zs({1, 2, 3}, 3);
    auto e = d * d;
    EXPECT_EQ(e.at(1), 4);
    EXPECT_EQ(e.at(2), 10);
}

TEST(Series, ValuationExtendsPrecision) {
    // (q^2 + O(q^5)) (1 + q + q^2 + O(q^3)) is known to O(q^5)
    auto a = zs({0, 0, 1, 0, 0}, 5), b = zs({1, 1, 1}, 3);
    auto c = a * b;
    EXPECT_EQ(c.prec(), 5);
    EXPECT_EQ(c.at(2), 1);
    EXPECT_EQ(c.at(3), 1);
    EXPECT_EQ(c.at(4), 1);
}

TEST(Series, ReadingBeyondPrecisionThrows) {
    auto a = zs({1, 2, 3}, 3);
    EXPECT_THROW(a.at(3), PrecisionError);
    EXPECT_THROW(a.at(-1), PrecisionError);
    // entries stored past prec are never exposed
    QSeries<mpz_class> b(std::vector<mpz_class>{1, 2, 999}, 2);
    EXPECT_THROW(b.at(2), PrecisionError);
    EXPECT_EQ((b * b).prec(), 2);
}

TEST(Series, SumChecksWeightAndLevel) {
    auto a = zs({1, 1}, 2, 4, 1), b = zs({1, 1}, 2, 6, 1), c = zs({1, 1}, 2, 4, 3);
    EXPECT_THROW(a + b, DomainError);
    EXPECT_THROW(a + c, DomainError);
    EXPECT_EQ((a * c).level(), 3);
    EXPECT_EQ((a * b).weight(), 10);
}

TEST(Series, ThetaSquaredCountsLatticePoints) {
    const long P = 200;
    auto t = theta_pair(P).theta0;
    auto t2 = t * t;
    for (long n = 0; n < P; ++n) {
        long cnt = 0;
        for (long x = -15; x <= 15; ++x)
            for (long y = -15; y <= 15; ++y)
                if (x * x + y * y == n) ++cnt;
        EXPECT_EQ(t2.at(n), cnt) << "n = " << n;
    }
}

TEST(Series, InverseRoundTrip) {
    auto e4 = convert_series<mpq_class>(eisenstein_series(4, 30));
    auto one = e4 * series_inverse(e4);
    EXPECT_EQ(one.at(0), 1);
    for (long n = 1; n < 30; ++n) EXPECT_EQ(one.at(n), 0);
}

TEST(Series, UAfterBIsScalar) {
    auto d = delta_series(20);
    auto ub = op_U(op_B(d, 3, 12), 3);
    for (long n = 0; n < 20; ++n) EXPECT_EQ(ub.at(n), d.at(n) * 729);
}

TEST(Series, TpIsUPlusB) {
    // T(p) = U(p) + p^{w-1} V(p) on level one
    auto e = eisenstein_series(6, 60);
    for (long p : {2L, 3L, 5L}) {
        auto t = op_T(e, p, 6, 1);
        for (long n = 0; n < t.prec(); ++n) {
            mpz_class v = e.at(p * n);
            if (n % p == 0) v += ipow(p, 5) * e.at(n / p);
            EXPECT_EQ(t.at(n), v);
        }
    }
}

TEST(Series, DeltaIsT2Eigenform) {
    auto d = delta_series(60);
    auto t = op_T(d, 2, 12, 1);
    for (long n = 0; n < t.prec(); ++n) EXPECT_EQ(t.at(n), -24 * d.at(n));
}

TEST(Series, HeckeOperatorsCommuteAndMultiply) {
    auto b = victor_miller_basis(24, 400);
    auto f = b[0] + b[1];  // not an eigenform
    auto t23 = op_T(op_T(f, 3, 24, 1), 2, 24, 1);
    auto t32 = op_T(op_T(f, 2, 24, 1), 3, 24, 1);
    auto t6 = op_T(f, 6, 24, 1);
    for (long n = 0; n < t6.prec(); ++n) {
        EXPECT_EQ(t23.at(n), t32.at(n));
        EXPECT_EQ(t23.at(n), t6.at(n));
    }
    EXPECT_THROW(op_T(f, 3, 24, 3), DomainError);
}

TEST(Arith, IndicesAndPartialZeta) {
    EXPECT_EQ(index_sl2(6), 12);
    EXPECT_EQ(index_sp4(3), 40);
    EXPECT_EQ(index_sp4(5), 156);
    EXPECT_EQ(index_sp4(15, 3), 156);
    EXPECT_EQ(zeta_partial(6, 2), mpq_class(3, 2));
    EXPECT_EQ(zeta_partial(1, 2), 1);
}

TEST(Arith, FracIsCanonical) {
    EXPECT_EQ(frac(6, 42).get_str(), "1/7");
    EXPECT_EQ(frac(0, 3).get_str(), "0");
    EXPECT_EQ(frac(4, -6).get_str(), "-2/3");
}

TEST(Arith, KroneckerAtTwoAndOddPrimes) {
    EXPECT_EQ(kronecker_prime(1, 2), 1);
    EXPECT_EQ(kronecker_prime(5, 2), -1);
    EXPECT_EQ(kronecker_prime(3, 2), -1);
    EXPECT_EQ(kronecker_prime(7, 2), 1);
    EXPECT_EQ(kronecker_prime(4, 2), 0);
    EXPECT_EQ(kronecker_prime(2, 7), 1);
    EXPECT_EQ(kronecker_prime(3, 7), -1);
    EXPECT_EQ(kronecker_prime(14, 7), 0);
}

TEST(Real, DigitsGuardRestores) {
    set_digits(40);
    {
        DigitsGuard g(80);
        EXPECT_EQ(current_digits(), 80u);
    }
    EXPECT_EQ(current_digits(), 40u);
}

TEST(Real, GammaAndZeta) {
    DigitsGuard g(50);
    EXPECT_LT(abs(real_gamma(Real(5)) - 24), eps_digits(45));
    EXPECT_LT(abs(real_zeta(2) - real_pi() * real_pi() / 6), eps_digits(45));
    Cx z = cgamma(Cx(Real(1) / 2));
    EXPECT_LT(abs(z - Cx(sqrt(real_pi()))), eps_digits(45));
}
