#include <gtest/gtest.h>

#include <random>

#include "skl/nonvanish.hpp"

using namespace skl;

namespace {

HalfIntForm<mpq_class> synthetic(long k, std::map<long, long> c, long P) {
    std::vector<mpq_class> v(P, 0);
    for (auto [D, x] : c) v[D] = x;
    return HalfIntForm<mpq_class>(4, k, v);
}

}  // namespace

TEST(Nonvanish, SturmWindow) {
    EXPECT_EQ(sturm_window(9, 1), 2);
    EXPECT_EQ(sturm_window(13, 1), 2);
    EXPECT_EQ(sturm_window(17, 1), 3);
    EXPECT_EQ(sturm_window(11, 3), 6);
    EXPECT_EQ(required_dmax(17, 1), 25);
}

TEST(Nonvanish, LevelOneVerdicts) {
    for (long k : {9L, 11L, 13L, 17L, 19L}) {
        bool expect = dim_cusp_level1(k + 1) > 0;
        for (auto& h : plus_basis_level4(k, required_dmax(k, 1))) {
            auto r = kernel_equivalence(h, 1, k);
            EXPECT_EQ(r.nonvanishing, expect) << "k = " << k;
            EXPECT_TRUE(r.unanimous);
            EXPECT_EQ(r.oracles.size(), 3u);
        }
    }
}

TEST(Nonvanish, RealEigenformsAgreeWithExact) {
    DigitsGuard dg(50);
    for (long k : {17L, 19L})
        for (auto& h : plus_eigenforms_level4(k, 60)) {
            auto r = kernel_equivalence(h, 1, k);
            EXPECT_TRUE(r.nonvanishing);
            EXPECT_TRUE(r.unanimous);
        }
}

TEST(Nonvanish, ScalingInvariance) {
    for (long k : {9L, 11L}) {
        auto h = plus_basis_level4(k, 40)[0];
        auto a = kernel_equivalence(h, 1, k), b = kernel_equivalence(h.scaled(mpq_class(7)), 1, k);
        EXPECT_EQ(a.nonvanishing, b.nonvanishing);
        EXPECT_EQ(a.witness, b.witness);
        auto fa = corollary_conditions(h), fb = corollary_conditions(h.scaled(mpq_class(7)));
        EXPECT_EQ(fa.any(), fb.any());
        EXPECT_EQ(fa.leading_index, fb.leading_index);
    }
}

TEST(Nonvanish, RandomCombinationsAreUnanimous) {
    std::mt19937 rng(7);
    for (long k : {17L, 19L}) {
        auto b = plus_basis_level4(k, required_dmax(k, 1));
        for (int t = 0; t < 10; ++t) {
            auto h = b[0].scaled(mpq_class(static_cast<long>(rng() % 21) - 10));
            for (std::size_t i = 1; i < b.size(); ++i) h = h + b[i].scaled(mpq_class(static_cast<long>(rng() % 21) - 10));
            if (h.first_nonzero() < 0) continue;
            auto r = kernel_equivalence(h, 1, k);
            EXPECT_TRUE(r.unanimous);
        }
    }
}

TEST(Nonvanish, SyntheticLeadingEven) {
    // h = q^4: H = h theta0 has a_H(4) = 1
    auto h = synthetic(9, {{4, 1}}, 17);
    auto f = corollary_conditions(h);
    EXPECT_TRUE(f.leading_even);
    auto r = kernel_equivalence(h, 1, 9);
    EXPECT_TRUE(r.nonvanishing);
    EXPECT_EQ(r.witness, 4);
}

TEST(Nonvanish, SyntheticTwoCPlusD) {
    // h = q^3 - 2 q^4: 2c + d = 0, so the sufficient condition fails
    auto h = synthetic(9, {{3, 1}, {4, -2}}, 17);
    auto f = corollary_conditions(h);
    EXPECT_EQ(f.leading_index, 3);
    EXPECT_FALSE(f.two_c_plus_d);
    EXPECT_FALSE(f.odd_support);
    // h = q^3 + q^4
    auto g = synthetic(9, {{3, 1}, {4, 1}}, 17);
    EXPECT_TRUE(corollary_conditions(g).two_c_plus_d);
    EXPECT_TRUE(kernel_equivalence(g, 1, 9).nonvanishing);
}

TEST(Nonvanish, SyntheticOddSupport) {
    auto h = synthetic(9, {{3, 1}, {7, 5}, {11, -2}}, 17);
    auto f = corollary_conditions(h);
    EXPECT_TRUE(f.odd_support);
    EXPECT_TRUE(kernel_equivalence(h, 1, 9).nonvanishing);
}

TEST(Nonvanish, KernelElement) {
    // h = q^3 theta1: the quotient is q^3, and theta0 theta1 has only even powers
    auto t1 = theta_pair(17).theta1;
    std::vector<mpq_class> v(17, 0);
    for (long n = 0; n + 3 < 17; ++n) v[n + 3] = mpq_class(t1.at(n));
    HalfIntForm<mpq_class> h(4, 9, v);
    auto q = theta1_quotient_test(h, 17);
    EXPECT_FALSE(q.nonvanishing);
    auto r = kernel_equivalence(h, 1, 9);
    EXPECT_FALSE(r.nonvanishing);
    EXPECT_TRUE(r.unanimous);
}

TEST(Nonvanish, RejectsNonPlusInput) {
    auto h = synthetic(9, {{1, 1}}, 17);
    EXPECT_THROW(h_even_scan(h, 1, 9), ComputationError);
}

TEST(Nonvanish, ShortPrecisionThrows) {
    auto h = plus_basis_level4(17, 10)[0];
    EXPECT_THROW(kernel_equivalence(h, 1, 17), PrecisionError);
}

TEST(Nonvanish, KernelLineInTwoDimensionalSpace) {
    // plus space of dimension 2 maps onto S_18 of dimension 1; 2 c(3) + c(4) = 0 spans the kernel
    auto b = plus_basis_level4(17, required_dmax(17, 1));
    ASSERT_EQ(b.size(), 2u);
    auto h = b[0].scaled(b[1].c(4)) + b[1].scaled(mpq_class(-2) * b[0].c(3));
    ASSERT_EQ(2 * h.c(3) + h.c(4), 0);
    auto r = kernel_equivalence(h, 1, 17);
    EXPECT_FALSE(r.nonvanishing);
    EXPECT_TRUE(r.unanimous);
}
