#include <gtest/gtest.h>

#include "skl/lfun.hpp"

using namespace skl;

namespace {

struct Desk {
    NewformGL2 f, g;
};

const Desk& desk() {
    static Desk d = [] {
        DigitsGuard dg(50);
        return Desk{eigenbasis_level1(22, 3000).forms.at(0), eigenbasis_level1(12, 3000).forms.at(0)};
    }();
    return d;
}

}  // namespace

TEST(LFun, DirichletMatchesEulerExactly) {
    auto& d = desk();
    auto a = fsym2g_coeffs_exact(d.f, d.g, 200), b = fsym2g_euler_exact(d.f, d.g, 200);
    for (long n = 1; n <= 200; ++n) EXPECT_EQ(a[n], b[n]) << "n = " << n;
    EXPECT_EQ(a[1], 1);
}

TEST(LFun, AnalyticCoefficientsMatchExact) {
    DigitsGuard dg(50);
    auto& d = desk();
    auto a = fsym2g_coeffs_exact(d.f, d.g, 100);
    auto b = fsym2g_coeffs(d.f, d.g, 100);
    // arithmetic weight of f x sym^2 g is 2k - 1 + 2k = 43 here
    for (long n = 1; n <= 100; ++n) EXPECT_LT(abs(b[n] - to_real(a[n]) / pow(Real(n), Real(43) / 2)), eps_digits(35));
}

TEST(LFun, TripleProductFactorization) {
    DigitsGuard dg(50);
    auto r = triple_factorization_check(desk().f, desk().g, 200);
    EXPECT_LT(r.max_deviation, eps_digits(35)) << "worst n = " << r.worst_n;
}

TEST(LFun, DeltaAgainstIncompleteGamma) {
    DigitsGuard dg(40);
    auto sp = spec_gl2(desk().g, 200);
    EXPECT_EQ(sp.eps, 1);
    for (Real s : {Real(1) / 2, Real(3) / 2, Real(2)}) {
        Cx lam = completed_lambda(sp, Cx(s), 0, afe_contour(Cx(s)));
        Real inc = lambda_incgamma_degree2(sp, s);
        EXPECT_LT(abs(lam.re - inc) / abs(inc), eps_digits(30)) << s;
        EXPECT_LT(abs(lam.im), eps_digits(30));
    }
}

TEST(LFun, FunctionalEquationDegreeTwo) {
    DigitsGuard dg(40);
    auto sp = spec_gl2(desk().f, 400);
    EXPECT_EQ(sp.eps, -1);  // weight 22: i^22 = -1
    Cx s(Real(7) / 10, Real(3) / 10);
    auto r = afe_symmetry(sp, s, afe_contour(s));
    EXPECT_LT(r.relative, eps_digits(25));
}

TEST(LFun, SymmetricSquareGivesPeterssonNorm) {
    DigitsGuard dg(40);
    auto sp = spec_sym2(desk().g, afe_required_length(spec_sym2(desk().g, 1), Cx(Real(1))) + 10);
    Real l = lvalue(sp, Cx(Real(1))).re;
    Real nn = petersson_norm_ils(12, 1, l);
    Real known("1.0353620568043209223e-6");
    EXPECT_LT(abs(nn - known) / known, Real(1e-18));
}

TEST(LFun, QuadratureMatchesSymmetricSquare) {
    DigitsGuard dg(30);
    auto& g = desk().g;
    Real l = lvalue(spec_sym2(g, afe_required_length(spec_sym2(g, 1), Cx(Real(1))) + 10), Cx(Real(1))).re;
    Real nn = petersson_norm_ils(12, 1, l);
    QuadOptions o;
    o.nx = 16;
    o.ny = 16;
    Real q = norm_gl2_quadrature(g, o);
    EXPECT_LT(abs(q - nn) / nn, eps_digits(20));
}

TEST(LFun, GaussLegendreIsExactOnPolynomials) {
    DigitsGuard dg(40);
    auto& r = gauss_legendre(10);
    // int_{-1}^{1} x^18 = 2/19
    Real s = 0;
    for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * pow(r.x[i], 18);
    EXPECT_LT(abs(s - Real(2) / 19), eps_digits(35));
}

TEST(LFun, TooShortTableThrows) {
    DigitsGuard dg(40);
    auto sp = spec_gl2(desk().f, 3);
    EXPECT_THROW(lvalue(sp, Cx(Real(1) / 2)), PrecisionError);
    EXPECT_THROW(spec_gl2(desk().f, 5000), Error);
}

TEST(LFun, HalfIntegralNormTwoRoutes) {
    DigitsGuard dg(30);
    auto h = to_real(plus_basis_level4(11, 400)[0]);
    QuadOptions a;
    a.nx = 12;
    a.ny = 12;
    auto t = norm_h_quadrature(h, a, false);
    auto c = norm_h_quadrature(h, a, true);
    EXPECT_LT(t.relative_change, eps_digits(15));
    EXPECT_LT(abs(t.refined - c.refined) / t.refined, eps_digits(12));
}
