#include <gtest/gtest.h>

#include <random>

#include "skl/sklift.hpp"
#include "skl/spectral.hpp"

using namespace skl;

namespace {

Mat<Real> synthetic_grid(const std::vector<NewformGL2>& b, const Mat<Real>& c, long side) {
    Mat<Real> g = mat_zero<Real>(side + 1, side + 1);
    for (long n = 1; n <= side; ++n)
        for (long m = 1; m <= side; ++m)
            for (std::size_t i = 0; i < b.size(); ++i)
                for (std::size_t j = 0; j < b.size(); ++j) g[n][m] += c[i][j] * b[i].a(n) * b[j].a(m);
    return g;
}

}  // namespace

TEST(Spectral, RecoversZeroMatrix) {
    DigitsGuard dg(50);
    auto b = eigenbasis_level1(36, 40).forms;
    auto g = synthetic_grid(b, mat_zero<Real>(3, 3), 12);
    auto sm = expand_pullback(g, b);
    EXPECT_EQ(sm.max_diag, 0);
    EXPECT_EQ(sm.max_offdiag, 0);
    EXPECT_EQ(sm.holdout_residual, 0);
}

TEST(Spectral, RecoversRankOneMatrix) {
    DigitsGuard dg(50);
    auto b = eigenbasis_level1(36, 40).forms;
    Mat<Real> c = mat_zero<Real>(3, 3);
    std::vector<Real> u = {Real(2), Real(-1), Real(1) / 3};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) c[i][j] = u[i] * u[j];
    auto sm = expand_pullback(synthetic_grid(b, c, 12), b);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_LT(abs(sm.c[i][j] - c[i][j]), eps_digits(35));
    EXPECT_LT(sm.holdout_residual, eps_digits(35));
}

TEST(Spectral, HoldoutCatchesForeignTerm) {
    DigitsGuard dg(50);
    auto b = eigenbasis_level1(36, 40).forms;
    Mat<Real> c = mat_zero<Real>(3, 3);
    c[0][0] = 1;
    auto g = synthetic_grid(b, c, 12);
    g[9][10] += g[10][10] / 1000;  // held out: fit window is 5, holdout 10
    auto sm = expand_pullback(g, b);
    EXPECT_LT(sm.fit_residual, eps_digits(35));
    EXPECT_GT(sm.holdout_residual, Real(1e-10));
}

TEST(Spectral, PullbackOfLiftIsDiagonal) {
    DigitsGuard dg(50);
    auto h = plus_eigenforms_level4(17, 4 * 100 + 1)[0];
    auto b = eigenbasis_level1(18, 60).forms;
    ASSERT_EQ(b.size(), 1u);
    SKLift<Real> F(h, 1);
    auto sm = expand_pullback(F.pullback_grid(6, 6), b);
    EXPECT_LT(sm.holdout_residual, eps_digits(35));
    auto b2 = eigenbasis_level1(24, 60).forms;
    auto h2 = plus_eigenforms_level4(23, 4 * 144 + 1)[0];
    auto sm2 = expand_pullback(SKLift<Real>(h2, 1).pullback_grid(8, 8), b2);
    EXPECT_LT(sm2.max_offdiag, eps_digits(30) * sm2.max_diag);
    EXPECT_LT(sm2.holdout_residual, eps_digits(30));
}

TEST(Spectral, Phi0Projection) {
    DigitsGuard dg(50);
    auto h = to_real(plus_basis_level4(11, 4 * 30 + 1)[0]);
    auto p = phi0_projection(JacobiForm<Real>(h, 1), eigenbasis_level1(12, 40).forms, 30);
    EXPECT_LT(p.residual, eps_digits(35));
    EXPECT_FALSE(p.zero);
    auto z = phi0_projection(JacobiForm<Real>(to_real(plus_basis_level4(9, 4 * 30 + 1)[0]), 1), {}, 30);
    EXPECT_TRUE(z.zero);
}

TEST(Spectral, VanishingPatternLevel15) {
    // N_g = 5 inside N = 15: one prime in M_g
    auto plus = vanishing_pattern({{3, 1}}, 5, 15);
    ASSERT_EQ(plus.size(), 4u);
    for (auto& e : plus) EXPECT_EQ(e.predicted_zero, e.sigma != e.sigma_prime);
    auto minus = vanishing_pattern({{3, -1}}, 5, 15);
    for (auto& e : minus) EXPECT_TRUE(e.predicted_zero);
    EXPECT_EQ(vanishing_pattern({}, 15, 15).size(), 1u);
    EXPECT_THROW(vanishing_pattern({}, 5, 15), DomainError);
}

TEST(Spectral, OldclassScalars) {
    DigitsGuard dg(40);
    auto g = eigenbasis_level1(12, 20).forms[0];
    EXPECT_EQ(oldclass_ratio(g, 3, 3, 11), 1);
    Real r = oldclass_ratio(g, 1, 3, 11);
    Real expect = g.lambda(3) / pow(Real(3), 6) * Real(3) / Real(4);
    EXPECT_LT(abs(r - expect), eps_digits(35));
    EXPECT_EQ(sigma_relation_scalar({{3, -1}, {5, -1}}, 15), 1);
    EXPECT_EQ(sigma_relation_scalar({{3, -1}, {5, 1}}, 15), -1);
}

TEST(Spectral, HeckeSumIdentitiesExact) {
    DigitsGuard dg(60);
    std::mt19937 rng(20240611);
    for (long p : {3L, 5L, 7L})
        for (int i = 0; i < 20; ++i) {
            mpq_class lam = frac(static_cast<long>(rng() % 399) - 199, 100);
            auto r = hecke_sum_identities(p, 11, lam, 8);
            EXPECT_TRUE(r.recurrence_exact) << r.failure;
            EXPECT_TRUE(r.partial_sum_exact) << r.failure;
        }
    EXPECT_THROW(hecke_sum_identities(3, 11, mpq_class(2), 8), DomainError);
}

TEST(Spectral, HeckeSumConverges) {
    DigitsGuard dg(60);
    // |lambda| well inside (-2, 2): the tail decays like p^{-R}
    auto r = hecke_sum_identities(3, 11, frac(-3, 5), 60);
    EXPECT_LT(r.s_partial_error, eps_digits(20));
}

TEST(Spectral, HeckeSumArithmetic) {
    DigitsGuard dg(40);
    auto g = eigenbasis_level1(12, 10).forms[0];
    for (long p : {3L, 5L, 7L}) EXPECT_TRUE(hecke_sum_identities_arith(p, 11, g.a_exact(p), 8));
}
