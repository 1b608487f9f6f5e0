#include <gtest/gtest.h>

#include "skl/sklift.hpp"

using namespace skl;

namespace {

HalfIntForm<mpq_class> plus_form(long k, long D) { return plus_basis_level4(k, D)[0].normalized(); }

// coefficients 1..d of an echelon basis determine the form; check the rest
bool in_level1_cusp_space(const QSeries<mpq_class>& s, long w) {
    auto vm = victor_miller_basis(w, s.prec());
    if (s.at(0) != 0) return false;
    for (long n = 1; n < s.prec(); ++n) {
        mpq_class v = 0;
        for (std::size_t i = 0; i < vm.size(); ++i) v += s.at(i + 1) * mpq_class(vm[i].at(n));
        if (v != s.at(n)) return false;
    }
    return true;
}

}  // namespace

TEST(Jacobi, ThetaDecompositionReconstructs) {
    auto h = plus_form(11, 200);
    JacobiForm<mpq_class> phi(h, 1);
    auto [h0, h1] = ThetaComponents::split(h);
    for (long n = 1; n <= 40; ++n)
        for (long r = -isqrt(4 * n - 1); r * r < 4 * n; ++r) EXPECT_EQ(theta_reconstruct(h0, h1, n, r), phi.c(n, r));
}

TEST(Jacobi, D0AndD2AreLevelOneCuspForms) {
    for (long k : {9L, 11L, 13L}) {
        JacobiForm<mpq_class> phi(plus_form(k, 4 * 40 + 1), 1);
        EXPECT_TRUE(in_level1_cusp_space(D0(phi, 40), k + 1)) << "k = " << k;
        EXPECT_TRUE(in_level1_cusp_space(D2(phi, 40), k + 3)) << "k = " << k;
    }
    // S_10 = 0, so D0 vanishes identically for k = 9
    JacobiForm<mpq_class> phi(plus_form(9, 4 * 40 + 1), 1);
    auto s = D0(phi, 40);
    for (long n = 0; n < 40; ++n) EXPECT_EQ(s.at(n), 0);
}

TEST(Jacobi, VmOfIndexOneIsCoefficientSum) {
    auto h = plus_form(11, 400);
    JacobiForm<mpq_class> phi(h, 1);
    // V_1 is the identity
    EXPECT_EQ(op_Vm_coeff(phi, 1, 3, 1), phi.c(3, 1));
    // (phi|V_2)(2, 2) = c(4, 2) + 2^11 c(1, 1)
    EXPECT_EQ(op_Vm_coeff(phi, 2, 2, 2), phi.c(4, 2) + 2048 * phi.c(1, 1));
}

TEST(SKLift, HandComputedCoefficients) {
    SKLift<mpq_class> F(plus_form(11, 200), 1);
    EXPECT_EQ(F.maass_coeff(QuadIndex(1, 1, 1)), 1);
    EXPECT_EQ(F.maass_coeff(QuadIndex(1, 0, 1)), 10);
    EXPECT_EQ(F.maass_coeff(QuadIndex(2, 0, 1)), -132);
    // content 2: c(12) + 2^11 c(3)
    EXPECT_EQ(F.maass_coeff(QuadIndex(2, 2, 2)), 736 + 2048);
}

TEST(SKLift, SymmetricUnderGL2Action) {
    SKLift<mpq_class> F(plus_form(13, 4 * 36 * 4 + 1), 1);
    for (long n = 1; n <= 6; ++n)
        for (long m = 1; m <= 6; ++m)
            for (long r = -isqrt(4 * n * m - 1); r * r < 4 * n * m; ++r) {
                auto v = F.maass_coeff(QuadIndex(n, r, m));
                EXPECT_EQ(v, F.maass_coeff(QuadIndex(m, r, n)));
                EXPECT_EQ(v, F.maass_coeff(QuadIndex(n, -r, m)));
                // [[1,1],[0,1]]: (n, r, m) -> (n, r + 2n, m + r + n)
                EXPECT_EQ(v, F.maass_coeff(QuadIndex(n, r + 2 * n, m + r + n)));
            }
}

TEST(SKLift, MaassEqualsFourierJacobi) {
    for (long k : {9L, 11L, 13L}) {
        auto h = plus_basis_level4(k, 4 * 100 + 1)[0];
        SKLift<mpq_class> F(h, 1);
        JacobiForm<mpq_class> phi(h, 1);
        auto a = F.pullback_grid(10, 10), b = fj_pullback_grid(phi, 10, 10);
        for (long n = 1; n <= 10; ++n)
            for (long m = 1; m <= 10; ++m) EXPECT_EQ(a[n][m], b[n][m]) << k << " " << n << " " << m;
        EXPECT_EQ(fj_pullback_coeff(phi, 3, 4), a[3][4]);
    }
}

TEST(SKLift, PullbackIsSymmetricAndHeckeEquivariant) {
    SKLift<mpq_class> F(plus_form(11, 4 * 200 + 1), 1);
    auto g = F.pullback_grid(8, 8);
    for (long n = 1; n <= 8; ++n)
        for (long m = 1; m <= 8; ++m) EXPECT_EQ(g[n][m], g[m][n]);
    for (long q : {2L, 3L}) {
        auto rep = hecke_equivariance_check(F, q, 5);
        EXPECT_TRUE(rep.pass) << "q = " << q << " first failure " << rep.first_failure;
        EXPECT_EQ(rep.checked, 25);
    }
}

TEST(SKLift, RejectsBadIndices) {
    EXPECT_THROW(QuadIndex(1, 2, 1), DomainError);
    EXPECT_THROW(QuadIndex(0, 0, 1), DomainError);
    auto h = plus_basis_level4(9, 20)[0];
    SKLift<mpq_class> F(h, 1);
    EXPECT_THROW(F.maass_coeff(QuadIndex(5, 0, 5)), PrecisionError);
    EXPECT_THROW(hecke_equivariance_check(F, 4, 2), Error);
}
