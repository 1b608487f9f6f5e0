#include <gtest/gtest.h>

#include "skl/sp4coset.hpp"

using namespace skl;

TEST(Sp4, EmbeddingIsSymplectic) {
    Mat2 a = {2, 1, 1, 1}, b = {1, 3, 0, 1};
    auto g = embed(a, b);
    EXPECT_TRUE(is_symplectic(g));
    EXPECT_EQ(g * sp4_inverse(g), Sp4Mat::identity());
    Sp4Mat z;
    EXPECT_FALSE(is_symplectic(z));
}

TEST(Sp4, LagrangianInvariant) {
    auto I = Sp4Mat::identity();
    std::array<long, 8> e = {0, 0, 1, 0, 0, 0, 0, 1};
    EXPECT_EQ(lagrangian_mod_p(I, 3), e);
    // an element of Gamma0^(2)(3) has the same invariant
    Mat2 a = {1, 0, 3, 1};
    EXPECT_EQ(lagrangian_mod_p(embed(a, {1, 0, 0, 1}), 3), e);
    // zero bottom block
    EXPECT_THROW(lagrangian_mod_p(Sp4Mat(), 3), ComputationError);
    // rank one mod 3
    Sp4Mat r = Sp4Mat::identity();
    r(3, 3) = 3;
    EXPECT_THROW(lagrangian_mod_p(r, 3), ComputationError);
}

TEST(Sp4, FamilySizesAtPrimeLevel) {
    auto cs = coset_family(3, 1);
    EXPECT_EQ(cs.reps.size(), 40u);
    EXPECT_EQ(cs.family_sizes.at(1), 4);
    EXPECT_EQ(cs.family_sizes.at(3), 36);
    auto c5 = coset_family(5, 1);
    EXPECT_EQ(c5.reps.size(), 156u);
}

TEST(Sp4, CompletenessDirect) {
    for (auto [N, M] : std::vector<std::pair<long, long>>{{3, 1}, {5, 1}, {15, 3}, {15, 5}}) {
        auto r = verify_complete(N, M);
        EXPECT_TRUE(r.pass()) << N << "," << M << " " << r.diagnostic;
        EXPECT_EQ(r.method, "direct");
        EXPECT_EQ(r.count, index_sp4(N, M));
    }
}

TEST(Sp4, InvariantMethodAgreesWithDirect) {
    auto a = verify_complete(5, 1, 0);
    EXPECT_EQ(a.method, "invariant");
    EXPECT_TRUE(a.pass());
    auto b = verify_complete(15, 1);
    EXPECT_EQ(b.method, "invariant");
    EXPECT_TRUE(b.pass());
    EXPECT_EQ(b.count, 40 * 156);
}

TEST(Sp4, DetectsEquivalentPair) {
    auto cs = coset_family(3, 1);
    std::vector<Sp4Mat> reps;
    for (auto& r : cs.reps) reps.push_back(r.g);
    // replace one representative by gamma * (another one), gamma in Gamma0^(2)(3)
    Sp4Mat gamma = embed({1, 0, 3, 1}, {2, 1, 3, 2});
    reps[7] = gamma * reps[11];
    for (long lim : {2500L, 0L}) {
        auto r = verify_reps(reps, 3, 1, lim);
        EXPECT_FALSE(r.inequivalent) << r.method;
        EXPECT_FALSE(r.pass());
    }
    EXPECT_TRUE(same_coset(reps[7], reps[11], 3));
    EXPECT_FALSE(same_coset(reps[7], reps[12], 3));
}

TEST(Sp4, DetectsMissingAndForeign) {
    auto cs = coset_family(3, 1);
    std::vector<Sp4Mat> reps;
    for (auto& r : cs.reps) reps.push_back(r.g);
    reps.pop_back();
    EXPECT_FALSE(verify_reps(reps, 3, 1).pass());
    reps.push_back(Sp4Mat());
    auto r = verify_reps(reps, 3, 1);
    EXPECT_FALSE(r.all_symplectic);
}

TEST(Sp4, FactorMapAndDegreeOne) {
    EXPECT_TRUE(verify_factor_map(15, 1));
    EXPECT_TRUE(verify_gamma0_cosets(15, 1));
    EXPECT_TRUE(verify_gamma0_cosets(35, 5));
    EXPECT_EQ(gamma0_cosets(15, 1).size(), static_cast<std::size_t>(index_sl2(15)));
}

TEST(Sp4, RejectsBadLevels) {
    EXPECT_THROW(coset_family(9, 1), Error);
    EXPECT_THROW(coset_family(15, 2), Error);
}
