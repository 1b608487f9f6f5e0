#pragma once
// Spectral expansion of the pullback in eigenform tensors, predicted vanishing patterns, Hecke-sum identities.

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "gl2.hpp"
#include "jacobi.hpp"
#include "linalg.hpp"
#include "real.hpp"

namespace skl {

struct SpectralMatrix {
    std::vector<std::string> labels;
    Mat<Real> c;                 // c[i][j] multiplies g_i(tau) g_j(tau')
    long fit_size = 0;           // fit grid [1..fit]^2
    long holdout_size = 0;       // held-out grid [1..holdout]^2 minus the fit grid
    Real fit_residual = 0;       // relative to the largest grid coefficient
    Real holdout_residual = 0;
    Real max_offdiag = 0;
    Real max_diag = 0;
};

// grid[n][m] = a_{F°}(n, m) for 1 <= n, m <= holdout; basis evaluated through a(n)
inline SpectralMatrix expand_pullback(const Mat<Real>& grid, const std::vector<NewformGL2>& basis, long fit = -1,
                                      long holdout = -1) {
    long d = static_cast<long>(basis.size());
    if (fit < 0) fit = d + 2;
    if (holdout < 0) holdout = 2 * fit;
    require(fit >= d, "expand_pullback: fit grid smaller than the dimension");
    require(holdout >= fit, "expand_pullback: held-out grid must contain the fit grid");
    require(static_cast<long>(grid.size()) > holdout, "expand_pullback: coefficient grid too small");
    SpectralMatrix sm;
    sm.fit_size = fit;
    sm.holdout_size = holdout;
    for (auto& g : basis) sm.labels.push_back(g.label());
    Real scale = 0;
    for (long n = 1; n <= holdout; ++n)
        for (long m = 1; m <= holdout; ++m) scale = std::max(scale, Real(abs(grid[n][m])));
    if (scale == 0) scale = 1;
    sm.c = mat_zero<Real>(d, d);
    if (d > 0) {
        Mat<Real> A;
        std::vector<Real> b;
        for (long n = 1; n <= fit; ++n)
            for (long m = 1; m <= fit; ++m) {
                std::vector<Real> row;
                for (long i = 0; i < d; ++i)
                    for (long j = 0; j < d; ++j) row.push_back(basis[i].a(n) * basis[j].a(m));
                A.push_back(row);
                b.push_back(grid[n][m]);
            }
        auto ls = lstsq(A, b);
        for (long i = 0; i < d; ++i)
            for (long j = 0; j < d; ++j) sm.c[i][j] = ls.x[i * d + j];
    }
    auto predict = [&](long n, long m) {
        Real s = 0;
        for (long i = 0; i < d; ++i)
            for (long j = 0; j < d; ++j) s += sm.c[i][j] * basis[i].a(n) * basis[j].a(m);
        return s;
    };
    for (long n = 1; n <= holdout; ++n)
        for (long m = 1; m <= holdout; ++m) {
            Real r = abs(predict(n, m) - grid[n][m]) / scale;
            if (n <= fit && m <= fit)
                sm.fit_residual = std::max(sm.fit_residual, r);
            else
                sm.holdout_residual = std::max(sm.holdout_residual, r);
        }
    for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j) {
            if (i == j)
                sm.max_diag = std::max(sm.max_diag, Real(abs(sm.c[i][j])));
            else
                sm.max_offdiag = std::max(sm.max_offdiag, Real(abs(sm.c[i][j])));
        }
    return sm;
}

struct VanishingEntry {
    std::map<long, int> sigma, sigma_prime;
    bool predicted_zero;
    std::string reason;
};

// zero iff sigma != sigma', or some p | M_g has w_f(p) = -1
inline std::vector<VanishingEntry> vanishing_pattern(const std::map<long, int>& wf, long Ng, long N) {
    require(is_squarefree(N) && N % Ng == 0, "vanishing_pattern: need square-free N and N_g | N");
    long Mg = N / Ng;
    auto ps = prime_divisors(Mg);
    bool outside_Lf = false;
    for (long p : ps) {
        auto it = wf.find(p);
        if (it == wf.end()) throw DomainError("vanishing_pattern: missing w_f(" + std::to_string(p) + ")");
        if (it->second == -1) outside_Lf = true;
    }
    std::vector<std::map<long, int>> chars;
    for (unsigned mask = 0; mask < (1u << ps.size()); ++mask) {
        std::map<long, int> s;
        for (std::size_t i = 0; i < ps.size(); ++i) s[ps[i]] = (mask >> i & 1u) ? -1 : 1;
        chars.push_back(s);
    }
    std::vector<VanishingEntry> out;
    for (auto& s : chars)
        for (auto& t : chars) {
            VanishingEntry e{s, t, false, ""};
            if (s != t) {
                e.predicted_zero = true;
                e.reason = "distinct characters";
            } else if (outside_Lf) {
                e.predicted_zero = true;
                e.reason = "M_g outside L_f";
            }
            out.push_back(e);
        }
    return out;
}

// scalar relating <F°, g x g|B_M> to <F°, g x g|B_{M_g}>:
// M^{(k+1)/2} lambda_g(M_g/M) / M_g^{(k+1)/2} * prod_{p | M_g/M} (1 + 1/p)^{-1}
inline Real oldclass_ratio(const NewformGL2& g, long M, long Mg, long k) {
    require(M >= 1 && Mg % M == 0, "oldclass_ratio: need M | M_g");
    Real e = Real(k + 1) / 2;
    Real r = pow(Real(M), e) * g.lambda(Mg / M) / pow(Real(Mg), e);
    for (long p : prime_divisors(Mg / M)) r *= Real(p) / Real(p + 1);
    return r;
}

// <F°, g_s x g_s>/<g_s, g_s> = sigma(M_g) <F°, g x g|B_{M_g}>/<g, g>
inline int sigma_relation_scalar(const std::map<long, int>& sigma, long Mg) {
    int s = 1;
    for (long p : prime_divisors(Mg)) {
        auto it = sigma.find(p);
        if (it == sigma.end()) throw DomainError("sigma_relation_scalar: sigma undefined at a prime of M_g");
        s *= it->second;
    }
    return s;
}

struct Phi0Projection {
    std::vector<std::string> labels;
    std::vector<Real> coeffs;
    Real residual = 0;  // relative, over the checked window
    bool zero = false;
};

// expand phi(tau, 0) = D0(phi) in level-one eigenforms of weight k + 1
template <class T>
Phi0Projection phi0_projection(const JacobiForm<T>& phi, const std::vector<NewformGL2>& forms, long P) {
    require(phi.level() == 1, "phi0_projection: only level one is constructed here");
    auto s = D0(phi, P);
    Phi0Projection pr;
    Real scale = 0;
    std::vector<Real> target(P);
    for (long n = 0; n < P; ++n) {
        target[n] = to_real(s.at(n));
        scale = std::max(scale, Real(abs(target[n])));
    }
    long d = static_cast<long>(forms.size());
    if (d == 0) {
        pr.zero = scale == 0;
        pr.residual = scale;
        return pr;
    }
    Mat<Real> A;
    std::vector<Real> b;
    for (long n = 1; n < P; ++n) {
        std::vector<Real> row;
        for (auto& f : forms) row.push_back(f.a(n));
        A.push_back(row);
        b.push_back(target[n]);
    }
    auto ls = lstsq(A, b);
    for (auto& f : forms) pr.labels.push_back(f.label());
    pr.coeffs = ls.x;
    if (scale == 0) scale = 1;
    for (long n = 1; n < P; ++n) {
        Real v = 0;
        for (long i = 0; i < d; ++i) v += ls.x[i] * forms[i].a(n);
        pr.residual = std::max(pr.residual, Real(abs(v - target[n]) / scale));
    }
    pr.zero = scale == 0;
    return pr;
}

// Hecke-combinatorial identities in the analytic scaling lambda(p^r) = p^{rk/2} l_r, L_p(r) = p^{rk/2 + k} L_r
struct HeckeSumReport {
    long p, k, R;
    mpq_class lambda;
    bool recurrence_exact = true;
    bool partial_sum_exact = true;
    Real s_partial_error = 0;  // |sum_{t <= R} l_t L_t / p^{t+1} - (p+1)/(p-1)|
    std::string failure;
};

struct HeckeScaled {
    std::vector<mpq_class> l;  // l[r], r = 0..R+2
    std::vector<mpq_class> L;  // L[r], r = 0..R+1
};

inline HeckeScaled hecke_scaled_tables(long p, const mpq_class& lam, long R) {
    HeckeScaled t;
    t.l.resize(R + 4);
    t.l[0] = 1;
    t.l[1] = lam;
    for (long r = 1; r + 1 < R + 4; ++r) t.l[r + 1] = lam * t.l[r] - t.l[r - 1];
    auto l = [&](long r) -> mpq_class { return r < 0 ? mpq_class(0) : t.l[r]; };
    mpq_class P(p), Pinv(1, p);
    t.L.resize(R + 2);
    t.L[0] = P + 1 + Pinv - l(2);
    for (long r = 1; r < R + 2; ++r) t.L[r] = P * l(r) - l(r + 2) - l(r - 2) + l(r) * Pinv;
    return t;
}

inline HeckeSumReport hecke_sum_identities(long p, long k, const mpq_class& lam, long R) {
    if (!(lam > -2 && lam < 2)) throw DomainError("hecke_sum_identities: need |lambda| < 2");
    require(is_prime(p) && p > 2, "hecke_sum_identities: p must be an odd prime");
    HeckeSumReport rep{p, k, R, lam};
    auto t = hecke_scaled_tables(p, lam, R);
    // l L_t = L_{t+1} + L_{t-1}
    for (long s = 0; s <= R; ++s) {
        mpq_class prev = s == 0 ? mpq_class(0) : t.L[s - 1];
        if (lam * t.L[s] != t.L[s + 1] + prev) {
            if (rep.recurrence_exact) rep.failure = "recurrence at t=" + std::to_string(s);
            rep.recurrence_exact = false;
        }
    }
    mpq_class acc = 0, geo = 0;
    for (long r = 0; r <= R; ++r) {
        acc += t.l[r] * t.L[r] / mpq_class(ipow(p, r + 1));
        geo += mpq_class(1) / mpq_class(ipow(p, r));
        mpq_class rhs = (1 + mpq_class(1, p)) * geo + t.l[r] * t.l[r] / mpq_class(ipow(p, r + 2)) -
                        t.l[r] * t.l[r + 2] / mpq_class(ipow(p, r + 1));
        if (acc != rhs) {
            if (rep.partial_sum_exact) rep.failure += " partial sum at r=" + std::to_string(r);
            rep.partial_sum_exact = false;
        }
    }
    rep.s_partial_error = abs(to_real(acc) - Real(p + 1) / Real(p - 1));
    return rep;
}

// the same identities in arithmetic normalization for an integral a(p) of weight k + 1
inline bool hecke_sum_identities_arith(long p, long k, const mpz_class& ap, long R) {
    std::vector<mpz_class> lam(R + 4);
    mpz_class pk = ipow(p, k);
    lam[0] = 1;
    lam[1] = ap;
    for (long r = 1; r + 1 < R + 4; ++r) lam[r + 1] = ap * lam[r] - pk * lam[r - 1];
    auto l = [&](long r) -> mpz_class { return r < 0 ? mpz_class(0) : lam[r]; };
    std::vector<mpz_class> L(R + 2);
    L[0] = ipow(p, k + 1) + pk + ipow(p, k - 1) - l(2);
    for (long r = 1; r < R + 2; ++r) L[r] = ipow(p, k + 1) * l(r) - l(r + 2) - ipow(p, k - 1) * (ipow(p, k + 1) * l(r - 2) - l(r));
    for (long s = 0; s <= R; ++s)
        if (ap * L[s] != L[s + 1] + pk * (s == 0 ? mpz_class(0) : L[s - 1])) return false;
    mpq_class acc = 0, geo = 0;
    for (long r = 0; r <= R; ++r) {
        acc += mpq_class(l(r) * L[r]) / mpq_class(ipow(p, (r + 1) * (k + 1)));
        geo += mpq_class(1) / mpq_class(ipow(p, r));
        mpq_class rhs = (1 + mpq_class(1, p)) * geo + mpq_class(l(r) * l(r)) / mpq_class(ipow(p, r * (k + 1) + 2)) -
                        mpq_class(l(r) * l(r + 2)) / mpq_class(ipow(p, (r + 1) * (k + 1)));
        if (acc != rhs) return false;
    }
    return true;
}

}  // namespace skl
