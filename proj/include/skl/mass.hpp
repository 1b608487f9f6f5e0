#pragma once
// L^2-mass of the pullback, the conjectural and averaged main terms, proportion bounds.

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "gl2.hpp"
#include "kohnen.hpp"
#include "lfun.hpp"
#include "real.hpp"
#include "sklift.hpp"
#include "spectral.hpp"

namespace skl {

// rational functions in one variable u over Q, kept as an unreduced fraction of polynomials
class RatFunc {
public:
    using Poly = std::vector<mpq_class>;
    RatFunc(const mpq_class& c = 0) : num_{c}, den_{mpq_class(1)} {}
    RatFunc(Poly n, Poly d) : num_(std::move(n)), den_(std::move(d)) { trim(num_), trim(den_); }
    static RatFunc u() { return RatFunc(Poly{0, 1}, Poly{1}); }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        return RatFunc(add(mul(a.num_, b.den_), mul(b.num_, a.den_)), mul(a.den_, b.den_));
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + b * RatFunc(-1); }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        return RatFunc(mul(a.num_, b.num_), mul(a.den_, b.den_));
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.num_.size() == 1 && b.num_[0] == 0) throw DomainError("RatFunc: division by zero");
        return RatFunc(mul(a.num_, b.den_), mul(a.den_, b.num_));
    }

    // value at u = 0 after cancelling common powers of u
    mpq_class limit_at_zero() const {
        long vn = val(num_), vd = val(den_);
        if (vn < 0) return 0;
        if (vn < vd) throw DomainError("RatFunc: pole at u = 0");
        if (vn > vd) return 0;
        return num_[vn] / den_[vd];
    }

    mpq_class eval(const mpq_class& x) const {
        mpq_class d = horner(den_, x);
        if (d == 0) throw DomainError("RatFunc: pole");
        return horner(num_, x) / d;
    }

private:
    Poly num_, den_;
    static void trim(Poly& p) {
        while (p.size() > 1 && p.back() == 0) p.pop_back();
        if (p.empty()) p.push_back(0);
    }
    static Poly add(const Poly& a, const Poly& b) {
        Poly r(std::max(a.size(), b.size()), 0);
        for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
        for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
        return r;
    }
    static Poly mul(const Poly& a, const Poly& b) {
        Poly r(a.size() + b.size() - 1, 0);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
        return r;
    }
    static long val(const Poly& p) {
        for (std::size_t i = 0; i < p.size(); ++i)
            if (p[i] != 0) return static_cast<long>(i);
        return -1;
    }
    static mpq_class horner(const Poly& p, const mpq_class& x) {
        mpq_class r = 0;
        for (std::size_t i = p.size(); i-- > 0;) r = r * x + p[i];
        return r;
    }
};

// main terms at a prime level, written once for exact rationals and for rational functions in u = 1/p
template <class T>
T conjecture_main_prime_expr(const T& p, int w) {
    T one(1);
    T z2 = one / (one - one / (p * p));
    T phi = p - one;
    T wp(w);
    T opw = one + wp;
    T inner = one + z2 / phi * (one + one / p) * (one + one / p) * (one + one / p) * opw * opw;
    return T(2) * phi * z2 / p / (one + wp / p) * inner;
}

template <class T>
T appendix_main_prime_expr(const T& p) {
    T one(1);
    T z2 = one / (one - one / (p * p));
    T phi = p - one;
    T sum = one + T(2) / (phi * p * p) * (p + one) * (p + one);
    return T(2) * z2 * z2 * phi / p * sum;
}

template <class T>
T heuristic_p_expr(const T& p) {
    T one(1);
    T z2 = one / (one - one / (p * p));
    T phi = p - one;
    T c = z2 * (p + one) * (p + one) * (p + one) / phi;
    return T(2) * z2 * z2 * phi / p * (one + T(2) * c / (p * p * p) - T(2) * c / (p * p * p * p));
}

// conjectural main term for odd square-free N with Atkin-Lehner signs w
inline mpq_class conjecture_main(long N, const std::map<long, int>& w) {
    require(N % 2 == 1 && is_squarefree(N), "conjecture_main: N must be odd and square-free");
    for (long p : prime_divisors(N))
        if (!w.count(p)) throw DomainError("conjecture_main: missing w_f(" + std::to_string(p) + ")");
    mpq_class pre = mpq_class(2 * euler_phi(N)) * zeta_partial(N, 2) / N;
    for (long p : prime_divisors(N)) pre /= 1 + frac(w.at(p), p);
    mpq_class sum = 0;
    for (long d : divisors(N)) {
        mpq_class t = zeta_partial(d, 2) / euler_phi(d);
        for (long p : prime_divisors(d)) {
            mpq_class a = 1 + mpq_class(1, p);
            t *= a * a * a * (1 + w.at(p)) * (1 + w.at(p));
        }
        sum += t;
    }
    return pre * sum;
}

// averaged main term 2 zeta_(N)(2)^2 phi(N)/N sum_{L | N} 2^{omega(L)} prod (p+1)^2 / (phi(L) L^2)
inline mpq_class appendix_main(long N) {
    require(N % 2 == 1 && is_squarefree(N), "appendix_main: N must be odd and square-free");
    mpq_class z = zeta_partial(N, 2);
    mpq_class sum = 0;
    for (long L : divisors(N)) {
        mpq_class t = mpq_class(ipow(2, omega(L))) / (mpq_class(euler_phi(L)) * L * L);
        for (long p : prime_divisors(L)) t *= (p + 1) * (p + 1);
        sum += t;
    }
    return 2 * z * z * euler_phi(N) / mpq_class(N) * sum;
}

// the same as a product over the primes of N
inline mpq_class appendix_main_product(long N) {
    mpq_class z = zeta_partial(N, 2);
    mpq_class r = 2 * z * z * euler_phi(N) / mpq_class(N);
    for (long p : prime_divisors(N)) r *= 1 + frac(2 * (p + 1) * (p + 1), (p - 1) * p * p);
    return r;
}

inline mpq_class heuristic_p(long p) {
    require(is_prime(p) && p > 2, "heuristic_p: p must be an odd prime");
    return heuristic_p_expr(mpq_class(p));
}

struct MainTermLimits {
    mpq_class appendix, heuristic, conjecture_plus;
    bool identical_functions;  // appendix and heuristic agree as rational functions of 1/p
};

inline MainTermLimits main_term_limits() {
    RatFunc u = RatFunc::u();
    RatFunc p = RatFunc(1) / u;
    auto a = appendix_main_prime_expr(p), h = heuristic_p_expr(p), c = conjecture_main_prime_expr(p, 1);
    MainTermLimits m{a.limit_at_zero(), h.limit_at_zero(), c.limit_at_zero(), false};
    // a - h vanishes identically iff it vanishes at more points than its degree bound
    auto diff = a - h;
    bool ok = true;
    for (long i = 1; i <= 64; ++i) ok = ok && diff.eval(mpq_class(1, 2 * i + 1)) == 0;
    m.identical_functions = ok;
    return m;
}

struct ProportionBound {
    long k, p;
    mpq_class bound;
    std::string branch;
    bool vacuous() const { return bound <= 0; }
};

// lower bound for the proportion of f in S_2k^new(p) with nonvanishing pullback
inline ProportionBound alpha_bound(long k, long p) {
    if (k % 2 == 0 || k <= 2) throw DomainError("alpha_bound: k must be odd and > 2");
    if (!is_prime(p) || p == 2) throw DomainError("alpha_bound: p must be an odd prime");
    ProportionBound b{k, p, 0, ""};
    mpq_class r = frac(p + 1, p - 1);
    if (p == 3) {
        b.bound = 1 - mpq_class(1, 3) * frac(k, k - (2 * k) / 3);
        b.branch = "p = 3";
    } else if (p % 12 == 1 || p % 12 == 7) {
        b.bound = 1 - mpq_class(3, 5) * r;
        b.branch = "p = 1, 7 mod 12";
    } else if (k % 3 != 0) {
        b.bound = 1 - mpq_class(5, 9) * r;
        b.branch = "p = 5, 11 mod 12, 3 does not divide k";
    } else {
        b.bound = 1 - frac(3 * (p + 1), 5 * (p - 1) - 8);
        b.branch = "p = 5, 11 mod 12, 3 divides k";
    }
    return b;
}

struct MassSummand {
    long L;
    std::string g;
    Real central_value;  // L(f x sym^2 g, 1/2)
    Real contribution;
};

struct MassReport {
    Real value = 0;
    std::vector<MassSummand> summands;
    Real lsym2_f, lf_3_2;
};

// central values per divisor L of N, over g in the newforms of level N/L
struct CentralValues {
    std::map<long, std::vector<std::pair<std::string, Real>>> by_L;
};

inline MassReport nf_spectral(long k, long N, const std::map<long, int>& wf, const CentralValues& cv,
                              const Real& lsym2_f, const Real& lf_3_2) {
    require(is_squarefree(N) && N % 2 == 1, "nf_spectral: N must be odd and square-free");
    MassReport rep;
    rep.lsym2_f = lsym2_f;
    rep.lf_3_2 = lf_3_2;
    const Real pi = real_pi();
    Real z2 = to_real(zeta_partial(N, 2)), z4 = to_real(zeta_partial(N, 4));
    Real pre = volume_ratio() * 24 * pi / (Real(k) * N) * z2 * z2 * z2 / z4;
    std::vector<long> missing;
    for (long L : divisors(N)) {
        Real wgt = 1 / (Real(L) * L);
        for (long p : prime_divisors(L)) {
            auto it = wf.find(p);
            if (it == wf.end()) throw DomainError("nf_spectral: missing w_f(" + std::to_string(p) + ")");
            wgt *= Real((p + 1) * (p + 1) * (1 + it->second) * (1 + it->second));
        }
        auto it = cv.by_L.find(L);
        if (it == cv.by_L.end()) {
            if (wgt != 0) missing.push_back(L);
            continue;
        }
        for (auto& [label, val] : it->second) {
            Real c = pre * wgt * val / (lsym2_f * lf_3_2);
            rep.summands.push_back({L, label, val, c});
            rep.value += c;
        }
    }
    if (!missing.empty()) {
        std::string s;
        for (long L : missing) s += " " + std::to_string(N / L);
        throw DataError("nf_spectral: no eigenform data at level(s)" + s);
    }
    return rep;
}

// (v2/v1^2) sum |c_ij|^2 <g_i,g_i> <g_j,g_j> / <F,F>
inline Real nf_from_expansion(const SpectralMatrix& sm, const std::vector<Real>& gnorms, const Real& FF) {
    require(gnorms.size() == sm.c.size(), "nf_from_expansion: one norm per basis element");
    Real s = 0;
    for (std::size_t i = 0; i < sm.c.size(); ++i)
        for (std::size_t j = 0; j < sm.c.size(); ++j) s += sm.c[i][j] * sm.c[i][j] * gnorms[i] * gnorms[j];
    return volume_ratio() * s / FF;
}

// level-one pipeline: everything the central-value and mass checks need for one eigenform f of weight 2k
struct Level1CentralValue {
    std::string f_label;
    long k;
    Real ff, hh, FF;
    Real lsym2_f, lf_3_2;
    std::vector<std::string> g_labels;
    std::vector<Real> gg, c, lambda_half, l_half, rho;
    Real nf_spectral_value, nf_expansion_value;
    Real hh_change;  // quadrature self-convergence
};

struct Level1Inputs {
    std::vector<NewformGL2> fs, gs;
    std::vector<HalfIntForm<Real>> hs;  // matched to fs by the T(9) eigenvalue
    long X;
};

// coefficient table length for every level-one L-value the pipeline needs at the current precision
inline long level1_afe_length(long k) {
    auto f = eigenbasis_level1(2 * k, 10).forms.at(0);
    long X = afe_required_length(spec_sym2(f, 1), Cx(Real(1)));
    X = std::max(X, afe_required_length(spec_gl2(f, 1), Cx(Real(3) / 2)));
    auto gs = eigenbasis_level1(k + 1, 10).forms;
    if (!gs.empty()) {
        X = std::max(X, afe_required_length(spec_f_sym2g(f, gs[0], 1), Cx(Real(1) / 2)));
        X = std::max(X, afe_required_length(spec_sym2(gs[0], 1), Cx(Real(1))));
    }
    return X + 10;
}

inline Level1Inputs level1_inputs(long k, long X) {
    Level1Inputs in;
    in.X = X;
    in.fs = eigenbasis_level1(2 * k, X).forms;
    in.gs = eigenbasis_level1(k + 1, X).forms;
    long G = 2 * (static_cast<long>(in.gs.size()) + 2);  // pullback grid side
    long D = std::max<long>(240, 4 * G * G + 1);
    for (auto& lf : level1_plus_eigenforms(k, D, in.fs)) in.hs.push_back(lf.h);
    return in;
}

inline Level1CentralValue level1_central_value(const Level1Inputs& in, std::size_t fi, QuadOptions qo = {}) {
    require(fi < in.fs.size(), "level1_central_value: eigenform index out of range");
    const auto& f = in.fs[fi];
    const auto& h = in.hs[fi];
    long k = f.weight() / 2;
    Level1CentralValue r;
    r.f_label = f.label();
    r.k = k;
    r.lsym2_f = lvalue(spec_sym2(f, in.X), Cx(Real(1))).re;
    r.ff = petersson_norm_ils(2 * k, 1, r.lsym2_f);
    r.lf_3_2 = lvalue(spec_gl2(f, in.X), Cx(Real(3) / 2)).re;
    auto nr = norm_h_quadrature(h, qo);
    r.hh = nr.refined;
    r.hh_change = nr.relative_change;
    r.FF = norm_F_from_h(r.hh, k, 1, r.lf_3_2);
    long d = static_cast<long>(in.gs.size());
    SpectralMatrix sm;
    if (d > 0) {
        long G = 2 * (d + 2);
        SKLift<Real> F(h, 1);
        auto grid = F.pullback_grid(G, G);
        sm = expand_pullback(grid, in.gs);
    }
    CentralValues cv;
    for (long i = 0; i < d; ++i) {
        const auto& g = in.gs[i];
        r.g_labels.push_back(g.label());
        Real gg = petersson_norm_ils(k + 1, 1, lvalue(spec_sym2(g, in.X), Cx(Real(1))).re);
        r.gg.push_back(gg);
        Real c = sm.c[i][i];
        r.c.push_back(c);
        auto sp = spec_f_sym2g(f, g, in.X);
        Cx lam = completed_lambda(sp, Cx(Real(1) / 2));
        r.lambda_half.push_back(lam.re);
        Real lh = lam.re / gamma_factor(sp, Cx(Real(1) / 2)).re;
        r.l_half.push_back(lh);
        r.rho.push_back(pow(Real(2), k + 1) * r.ff * gg * gg * c * c / r.hh / lam.re);
        cv.by_L[1].push_back({g.label(), lh});
    }
    r.nf_spectral_value = d > 0 ? nf_spectral(k, 1, {}, cv, r.lsym2_f, r.lf_3_2).value : Real(0);
    r.nf_expansion_value = d > 0 ? nf_from_expansion(sm, r.gg, r.FF) : Real(0);
    return r;
}

}  // namespace skl
