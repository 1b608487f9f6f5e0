#pragma once
// Coset representatives for Gamma0^(2)(N) \ Gamma0^(2)(M), N square-free, M | N.

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"

namespace skl {

using Mat2 = std::array<mpz_class, 4>;  // (a b; c d) row major

inline Mat2 mat2_mul(const Mat2& x, const Mat2& y) {
    return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
            x[2] * y[1] + x[3] * y[3]};
}
inline Mat2 mat2_inv(const Mat2& x) { return {x[3], -x[1], -x[2], x[0]}; }  // det 1
inline mpz_class mat2_det(const Mat2& x) { return x[0] * x[3] - x[1] * x[2]; }

struct Sp4Mat {
    std::array<mpz_class, 16> e;  // row major
    Sp4Mat() {
        for (auto& x : e) x = 0;
    }
    static Sp4Mat identity() {
        Sp4Mat m;
        for (int i = 0; i < 4; ++i) m(i, i) = 1;
        return m;
    }
    mpz_class& operator()(int i, int j) { return e[4 * i + j]; }
    const mpz_class& operator()(int i, int j) const { return e[4 * i + j]; }
    bool operator==(const Sp4Mat& o) const { return e == o.e; }
};

inline Sp4Mat operator*(const Sp4Mat& x, const Sp4Mat& y) {
    Sp4Mat r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            mpz_class s = 0;
            for (int k = 0; k < 4; ++k) s += x(i, k) * y(k, j);
            r(i, j) = s;
        }
    return r;
}

// 2x2 block (bi, bj) of a 4x4 matrix, blocks ordered A B / C D
inline Mat2 block(const Sp4Mat& g, int bi, int bj) {
    return {g(2 * bi, 2 * bj), g(2 * bi, 2 * bj + 1), g(2 * bi + 1, 2 * bj), g(2 * bi + 1, 2 * bj + 1)};
}

inline Mat2 transpose(const Mat2& x) { return {x[0], x[2], x[1], x[3]}; }
inline Mat2 mat2_sub(const Mat2& x, const Mat2& y) { return {x[0] - y[0], x[1] - y[1], x[2] - y[2], x[3] - y[3]}; }

// A^T C = C^T A, B^T D = D^T B, A^T D - C^T B = I
inline bool is_symplectic(const Sp4Mat& g) {
    Mat2 A = block(g, 0, 0), B = block(g, 0, 1), C = block(g, 1, 0), D = block(g, 1, 1);
    Mat2 I = {1, 0, 0, 1};
    return mat2_mul(transpose(A), C) == mat2_mul(transpose(C), A) &&
           mat2_mul(transpose(B), D) == mat2_mul(transpose(D), B) &&
           mat2_sub(mat2_mul(transpose(A), D), mat2_mul(transpose(C), B)) == I;
}

// inverse of a symplectic matrix: (D^T -B^T; -C^T A^T)
inline Sp4Mat sp4_inverse(const Sp4Mat& g) {
    Sp4Mat r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            r(i, j) = g(j + 2, i + 2);
            r(i, j + 2) = -g(j, i + 2);
            r(i + 2, j) = -g(j + 2, i);
            r(i + 2, j + 2) = g(j, i);
        }
    return r;
}

inline bool in_gamma0_2(const Sp4Mat& g, long N) {
    for (int i = 2; i < 4; ++i)
        for (int j = 0; j < 2; ++j)
            if (mpz_divisible_ui_p(g(i, j).get_mpz_t(), static_cast<unsigned long>(N)) == 0) return false;
    return true;
}

// diagonal embedding of SL2 x SL2
inline Sp4Mat embed(const Mat2& x, const Mat2& y) {
    Sp4Mat m;
    m(0, 0) = x[0];
    m(0, 2) = x[1];
    m(2, 0) = x[2];
    m(2, 2) = x[3];
    m(1, 1) = y[0];
    m(1, 3) = y[1];
    m(3, 1) = y[2];
    m(3, 3) = y[3];
    return m;
}

// integral det-1 matrix congruent to (a0 b0; c0 d0) mod N, N square-free, det = 1 mod N
inline Mat2 sl2_lift(long a0, long b0, long c0, long d0, long N) {
    require(mod(a0 * d0 - b0 * c0, N) == mod(1, N), "sl2_lift: determinant must be 1 mod N");
    long c = mod(c0, N), d = mod(d0, N);
    if (c == 0) c = N;
    while (gcd(c, d) != 1) d += N;
    long x, y, g;
    ext_gcd(d, c, x, y, g);  // d x + c y = 1, so (x, -y; c, d) has det 1
    long a1 = x, b1 = -y;
    // adjust (a, b) += t (c, d) prime by prime
    std::vector<long> rs, ms;
    for (long p : prime_divisors(N)) {
        long t;
        if (c % p != 0)
            t = mod((a0 - a1) % p * modinv(c % p, p), p);
        else
            t = mod((b0 - b1) % p * modinv(d % p, p), p);
        rs.push_back(t);
        ms.push_back(p);
    }
    long t = N == 1 ? 0 : crt(rs, ms);
    Mat2 r = {mpz_class(a1) + mpz_class(t) * c, mpz_class(b1) + mpz_class(t) * d, mpz_class(c), mpz_class(d)};
    return r;
}

// gamma_d(a): (0 1; -1 a) mod p for p | N/d, identity mod p for p | d
inline Mat2 gamma_da(long N, long d, long a) {
    require(is_squarefree(N), "gamma_da: N must be square-free");
    require(d >= 1 && N % d == 0, "gamma_da: d must divide N");
    std::vector<long> ps = prime_divisors(N);
    if (ps.empty()) return {1, 0, 0, 1};
    std::vector<long> ra, rb, rc, rd;
    for (long p : ps) {
        if (d % p == 0) {
            ra.push_back(1);
            rb.push_back(0);
            rc.push_back(0);
            rd.push_back(1);
        } else {
            ra.push_back(0);
            rb.push_back(1);
            rc.push_back(p - 1);
            rd.push_back(mod(a, p));
        }
    }
    return sl2_lift(crt(ra, ps), crt(rb, ps), crt(rc, ps), crt(rd, ps), N);
}

// B_{d1}(a): identity with x = d1 * inv(d1 mod N/d1) * a at (3,2) and (4,1)
inline Sp4Mat b_upper(long d1, long N, long a) {
    require(N % d1 == 0, "b_upper: d1 must divide N");
    long d2 = N / d1;
    long inv = modinv(d1, d2);
    if (d2 == 1) inv = 1;
    Sp4Mat m = Sp4Mat::identity();
    mpz_class x = mpz_class(d1) * inv * a;
    m(2, 1) = x;
    m(3, 0) = x;
    return m;
}

struct CosetRep {
    Sp4Mat g;
    long family;  // d, with 1 for the degree-one family
    long a, b;    // parameters mod d (0 for the degree-one family)
    long gamma_index;
};

struct CosetSet {
    long N, M;
    std::vector<CosetRep> reps;
    std::map<long, long> family_sizes;
};

// representatives of Gamma0(N) \ Gamma0(M): one gamma_{d'}(a) per choice of primes S of N/M and residues
inline std::vector<Mat2> gamma0_cosets(long N, long M) {
    require(is_squarefree(N) && M >= 1 && N % M == 0, "gamma0_cosets: need square-free N and M | N");
    auto ps = prime_divisors(N / M);
    std::vector<Mat2> out;
    for (unsigned mask = 0; mask < (1u << ps.size()); ++mask) {
        long sprod = 1;
        std::vector<long> sp;
        for (std::size_t i = 0; i < ps.size(); ++i)
            if (mask >> i & 1u) {
                sprod *= ps[i];
                sp.push_back(ps[i]);
            }
        // iterate residues a mod sprod
        for (long a = 0; a < sprod; ++a) out.push_back(gamma_da(N, N / sprod, a));
    }
    return out;
}

inline CosetSet coset_family(long N, long M) {
    require(is_squarefree(N), "coset_family: N must be square-free");
    require(M >= 1 && N % M == 0, "coset_family: M must divide N");
    CosetSet cs{N, M, {}, {}};
    auto gam = gamma0_cosets(N, M);
    Mat2 I = {1, 0, 0, 1};
    for (std::size_t i = 0; i < gam.size(); ++i) cs.reps.push_back({embed(gam[i], I), 1, 0, 0, static_cast<long>(i)});
    cs.family_sizes[1] = static_cast<long>(gam.size());
    for (long d : divisors(N / M)) {
        if (d == 1) continue;
        long cnt = 0;
        for (long a = 0; a < d; ++a)
            for (long b = 0; b < d; ++b) {
                Sp4Mat B = b_upper(N / d, N, a);
                Mat2 gb = gamma_da(N, N / d, b);
                for (std::size_t i = 0; i < gam.size(); ++i) {
                    cs.reps.push_back({B * embed(gam[i], gb), d, a, b, static_cast<long>(i)});
                    ++cnt;
                }
            }
        cs.family_sizes[d] = cnt;
    }
    return cs;
}

inline bool same_coset(const Sp4Mat& g1, const Sp4Mat& g2, long N) {
    if (!is_symplectic(g1) || !is_symplectic(g2)) throw DomainError("same_coset: non-symplectic input");
    return in_gamma0_2(g1 * sp4_inverse(g2), N);
}

// row space mod p of the bottom 2x4 block, as a reduced echelon form
inline std::array<long, 8> lagrangian_mod_p(const Sp4Mat& g, long p) {
    std::array<long, 8> r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 4; ++j) {
            mpz_class v = g(i + 2, j) % p;
            if (v < 0) v += p;
            r[4 * i + j] = v.get_si();
        }
    int row = 0;
    for (int c = 0; c < 4 && row < 2; ++c) {
        int piv = -1;
        for (int i = row; i < 2; ++i)
            if (r[4 * i + c] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != row)
            for (int j = 0; j < 4; ++j) std::swap(r[4 * piv + j], r[4 * row + j]);
        long inv = modinv(r[4 * row + c], p);
        for (int j = 0; j < 4; ++j) r[4 * row + j] = mod(r[4 * row + j] * inv, p);
        for (int i = 0; i < 2; ++i) {
            if (i == row || r[4 * i + c] == 0) continue;
            long f = r[4 * i + c];
            for (int j = 0; j < 4; ++j) r[4 * i + j] = mod(r[4 * i + j] - f * r[4 * row + j], p);
        }
        ++row;
    }
    if (row != 2) throw ComputationError("lagrangian_mod_p: bottom block has rank < 2 mod p");
    return r;
}

// per-prime Lagrangian subspaces; equal invariants iff same Gamma0^(2)(N) coset
inline std::vector<std::array<long, 8>> coset_invariant(const Sp4Mat& g, long N) {
    std::vector<std::array<long, 8>> out;
    for (long p : prime_divisors(N)) out.push_back(lagrangian_mod_p(g, p));
    return out;
}

struct CosetReport {
    long N, M;
    long count = 0;
    long expected = 0;
    bool all_symplectic = true;
    bool all_in_gamma0_M = true;
    bool inequivalent = true;
    std::string method;
    std::string diagnostic;
    bool pass() const { return count == expected && all_symplectic && all_in_gamma0_M && inequivalent; }
};

inline CosetReport verify_reps(const std::vector<Sp4Mat>& reps, long N, long M, long direct_limit = 2500) {
    CosetReport rep{N, M};
    rep.count = static_cast<long>(reps.size());
    rep.expected = index_sp4(N, M);
    for (std::size_t i = 0; i < reps.size(); ++i) {
        if (!is_symplectic(reps[i])) {
            if (rep.all_symplectic) rep.diagnostic = "non-symplectic representative #" + std::to_string(i);
            rep.all_symplectic = false;
        } else if (!in_gamma0_2(reps[i], M)) {
            rep.all_in_gamma0_M = false;
        }
    }
    if (!rep.all_symplectic) {
        rep.inequivalent = false;
        return rep;
    }
    if (rep.count <= direct_limit) {
        rep.method = "direct";
        std::vector<Sp4Mat> inv;
        for (auto& g : reps) inv.push_back(sp4_inverse(g));
        for (std::size_t i = 0; i < reps.size() && rep.inequivalent; ++i)
            for (std::size_t j = i + 1; j < reps.size(); ++j)
                if (in_gamma0_2(reps[i] * inv[j], N)) {
                    rep.inequivalent = false;
                    rep.diagnostic = "equivalent pair (" + std::to_string(i) + ", " + std::to_string(j) + ")";
                    break;
                }
    } else {
        rep.method = "invariant";
        std::map<std::vector<std::array<long, 8>>, std::size_t> seen;
        for (std::size_t i = 0; i < reps.size(); ++i) {
            auto key = coset_invariant(reps[i], N);
            auto [it, fresh] = seen.emplace(key, i);
            if (!fresh) {
                rep.inequivalent = false;
                rep.diagnostic = "equivalent pair (" + std::to_string(it->second) + ", " + std::to_string(i) + ")";
                break;
            }
        }
    }
    return rep;
}

inline CosetReport verify_complete(long N, long M, long direct_limit = 2500) {
    auto cs = coset_family(N, M);
    std::vector<Sp4Mat> reps;
    for (auto& r : cs.reps) reps.push_back(r.g);
    return verify_reps(reps, N, M, direct_limit);
}

// the factor map to prod_i Gamma0^(2)(M p_i) \ Gamma0^(2)(M) is a bijection onto the product of the factor families
inline bool verify_factor_map(long N, long M) {
    auto cs = coset_family(N, M);
    auto ps = prime_divisors(N / M);
    std::vector<std::set<std::array<long, 8>>> factor_sets;
    for (long p : ps) {
        std::set<std::array<long, 8>> s;
        for (auto& r : coset_family(M * p, M).reps) s.insert(lagrangian_mod_p(r.g, p));
        if (static_cast<long>(s.size()) != index_sp4(M * p, M)) return false;
        factor_sets.push_back(std::move(s));
    }
    std::set<std::vector<std::array<long, 8>>> images;
    for (auto& r : cs.reps) {
        std::vector<std::array<long, 8>> key;
        for (std::size_t i = 0; i < ps.size(); ++i) {
            auto inv = lagrangian_mod_p(r.g, ps[i]);
            if (!factor_sets[i].count(inv)) return false;
            key.push_back(inv);
        }
        images.insert(key);
    }
    long prod = 1;
    for (auto& s : factor_sets) prod *= static_cast<long>(s.size());
    return static_cast<long>(images.size()) == prod && static_cast<long>(cs.reps.size()) == prod;
}

// degree-one analogue: gamma0_cosets(N, M) is complete and inequivalent
inline bool verify_gamma0_cosets(long N, long M) {
    auto g = gamma0_cosets(N, M);
    if (static_cast<long>(g.size()) != index_sl2(N) / index_sl2(M)) return false;
    for (auto& x : g)
        if (mat2_det(x) != 1 || x[2] % M != 0) return false;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i + 1; j < g.size(); ++j) {
            Mat2 y = mat2_mul(g[i], mat2_inv(g[j]));
            if (y[2] % N == 0) return false;
        }
    return true;
}

}  // namespace skl
