#include <gtest/gtest.h>

#include "skl/kohnen.hpp"

using namespace skl;

namespace {

// published coefficient tables of the level-one index-one Jacobi cusp forms of weight 10 and 12, by D = 4n - r^2
const std::vector<std::pair<long, long>> kWeight10 = {{3, 1}, {4, -2}, {7, -16}, {8, 36}, {11, 99}, {12, -272}, {15, -240}, {16, 1056}, {19, -253}};
const std::vector<std::pair<long, long>> kWeight12 = {{3, 1}, {4, 10}, {7, -88}, {8, -132}, {11, 1275}, {12, 736}, {15, -8040}, {16, -2880}, {19, 24035}};

}  // namespace

TEST(Kohnen, PlusFormsMatchJacobiTables) {
    auto h9 = plus_basis_level4(9, 20);
    auto h11 = plus_basis_level4(11, 20);
    ASSERT_EQ(h9.size(), 1u);
    ASSERT_EQ(h11.size(), 1u);
    auto a = h9[0].normalized(), b = h11[0].normalized();
    for (auto [D, v] : kWeight10) EXPECT_EQ(a.c(D), v) << "D = " << D;
    for (auto [D, v] : kWeight12) EXPECT_EQ(b.c(D), v) << "D = " << D;
}

TEST(Kohnen, PlusSupport) {
    for (long k : {9L, 11L, 13L, 17L, 19L}) {
        auto bs = plus_basis_level4(k, 200);
        EXPECT_EQ(static_cast<long>(bs.size()), dim_cusp_level1(2 * k));
        for (auto& h : bs)
            for (long D = 0; D < h.dmax(); ++D)
                if (!plus_support(D, k)) EXPECT_EQ(h.c(D), 0) << "k = " << k << ", D = " << D;
    }
}

TEST(Kohnen, ShimuraExactForRationalCases) {
    DigitsGuard g(50);
    for (long k : {9L, 11L, 13L}) {
        auto h = plus_basis_level4(k, 4 * 25 * 10 + 1)[0];
        auto f = eigenbasis_level1(2 * k, 30).forms[0];
        auto rep = shimura_match(h, f, {2, 3, 5}, eps_digits(30));
        EXPECT_TRUE(rep.pass) << "k = " << k;
        for (auto& r : rep.rows) EXPECT_TRUE(r.exact);
    }
}

TEST(Kohnen, T4OnWeight23Halves) {
    auto h = plus_basis_level4(11, 200)[0];
    auto t = kohnen_T_p2(h, 2);
    auto er = eigen_ratio(h, t);
    EXPECT_EQ(er.value, -288);  // a(2) of the weight 22 eigenform
    EXPECT_EQ(er.deviation, 0);
}

TEST(Kohnen, ShimuraNumericForTwoDimensionalSpace) {
    DigitsGuard g(60);
    auto fs = eigenbasis_level1(34, 30).forms;
    auto lf = level1_plus_eigenforms(17, 500, fs);
    ASSERT_EQ(lf.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(lf[i].label, fs[i].label());
        EXPECT_FALSE(lf[i].exact.has_value());
        auto rep = shimura_match(lf[i].h, fs[i], {3, 5}, eps_digits(30));
        EXPECT_TRUE(rep.pass);
    }
}

TEST(Kohnen, EigenformsAreNormalized) {
    DigitsGuard g(40);
    for (auto& h : plus_eigenforms_level4(17, 100)) EXPECT_EQ(h.c(h.first_nonzero()), 1);
}

TEST(Kohnen, ScalingCommutesWithHecke) {
    auto h = plus_basis_level4(13, 300)[0];
    auto a = kohnen_T_p2(h.scaled(mpq_class(7)), 3);
    auto b = kohnen_T_p2(h, 3).scaled(mpq_class(7));
    for (long D = 0; D < a.dmax(); ++D) EXPECT_EQ(a.c(D), b.c(D));
}

TEST(Kohnen, BadInputs) {
    EXPECT_THROW(plus_basis_level4(10, 20), DomainError);
    EXPECT_THROW(HalfIntForm<mpq_class>(6, 9, {}), Error);
    auto h = plus_basis_level4(9, 20)[0];
    EXPECT_THROW(h.c(20), PrecisionError);
}
