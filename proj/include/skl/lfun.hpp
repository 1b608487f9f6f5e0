#pragma once
// L-functions attached to the lift: Dirichlet coefficients, Euler factors, smoothed approximate functional
// equation, Petersson norms by the Rankin-Selberg formula and by quadrature.

#include <gmpxx.h>

#include <boost/math/special_functions/gamma.hpp>
#include <map>
#include <string>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "gl2.hpp"
#include "kohnen.hpp"
#include "real.hpp"

namespace skl {

// Lambda(s) = Q^s prod Gamma_C(s + mu) prod Gamma_R(s + nu) L(s), L(s) = sum b(n) n^{-s}, real coefficients
struct LSpec {
    std::string name;
    std::vector<Real> gc;  // Gamma_C shifts
    std::vector<Real> gr;  // Gamma_R shifts
    Real Q = 1;
    int eps = 1;
    std::vector<Real> b;  // b[0] unused
    long length() const { return static_cast<long>(b.size()) - 1; }
};

inline Cx gamma_factor(const LSpec& sp, const Cx& s) {
    Cx g = cpow(sp.Q, s);
    for (auto& m : sp.gc) g *= gamma_C(s + Cx(m));
    for (auto& m : sp.gr) g *= gamma_R(s + Cx(m));
    return g;
}

// trapezoid nodes on Re(w) = c for (1/2 pi i) int gamma(s + w) Q^{s+w} x^{-(s+w)} e^{A w^2} dw / w
// (A = 0 is the sharp cutoff; A > 0 trades slower decay in x for faster decay in t)
struct AfeKernel {
    Cx s;
    Real c, h;
    std::vector<Cx> omega;  // omega[j], t_j = (j - J) h
    long J = 0;

    AfeKernel(const LSpec& sp, const Cx& s_, const Real& A, const Real& c_) : s(s_), c(c_) {
        const Real D = Real(static_cast<long>(current_digits()));
        const Real ln10 = log(Real(10));
        h = 2 * real_pi() * c / ((D + 10) * ln10);
        const Real tol = eps_digits(static_cast<int>(current_digits()) + 10);
        auto node = [&](long j) {
            Cx w(c, h * j);
            return gamma_factor(sp, s + w) * cexp(w * w * A) / w * (h / (2 * real_pi()));
        };
        std::vector<Cx> pos{node(0)}, neg;
        Real peak = abs(pos[0]);
        int quiet = 0;
        for (long j = 1; quiet < 8; ++j) {
            if (j > 200000) throw ComputationError("AfeKernel: integrand does not decay");
            pos.push_back(node(j));
            neg.push_back(node(-j));
            Real m = std::max(abs(pos.back()), abs(neg.back()));
            peak = std::max(peak, m);
            quiet = m < tol * peak ? quiet + 1 : 0;
        }
        J = static_cast<long>(neg.size());
        omega.resize(2 * J + 1);
        for (long j = 0; j <= J; ++j) omega[J + j] = pos[j];
        for (long j = 1; j <= J; ++j) omega[J - j] = neg[j - 1];
    }

    Cx weight_at(const Real& x) const {
        Cx acc(0);
        Real lx = log(x);
        for (long j = -J; j <= J; ++j) {
            Cx e = cexp(Cx(-(s.re + c) * lx, -(s.im + h * j) * lx));
            acc += omega[j + J] * e;
        }
        return acc;
    }
};

// smallest X with x |W(x)| below 10^{-(digits - 10)} |W(1)| for every x >= X (W decreasing there)
inline long afe_kernel_length(const AfeKernel& K) {
    const Real tol = eps_digits(static_cast<int>(current_digits()) - 10);
    Real ref = abs(K.weight_at(Real(1)));
    if (ref == 0) return 1;
    auto small = [&](long x) {
        Real xr(x);
        return xr * abs(K.weight_at(xr)) < tol * ref;
    };
    long hi = 2;
    while (!small(hi)) {
        hi *= 2;
        if (hi > (1L << 26)) throw ComputationError("afe_required_length: weight does not decay");
    }
    long lo = hi / 2;
    while (hi - lo > 1) {
        long mid = (lo + hi) / 2;
        (small(mid) ? hi : lo) = mid;
    }
    return hi;
}

inline long afe_required_length(const LSpec& sp, const Cx& s, const Real& A = 0, const Real& c = 2) {
    return std::max(afe_kernel_length(AfeKernel(sp, s, A, c)), afe_kernel_length(AfeKernel(sp, Cx(1) - s, A, c)));
}

namespace detail {
// sum_j omega_j sum_{n <= X} b(n) n^{-(s + c + i t_j)}
inline Cx afe_half(const LSpec& sp, const AfeKernel& K, long X) {
    long J = K.J;
    std::vector<Cx> Sp(J + 1, Cx(0)), Sm(J + 1, Cx(0));
    for (long n = 1; n <= X; ++n) {
        if (sp.b[n] == 0) continue;
        Real ln = log(Real(n));
        Cx base = cexp(Cx(-(K.s.re + K.c) * ln, -K.s.im * ln)) * sp.b[n];
        Cx rot = expi(-K.h * ln);
        Cx r(1);
        for (long j = 0; j <= J; ++j) {
            Sp[j] += base * r;
            Sm[j] += base * conj(r);
            r *= rot;
        }
    }
    Cx acc(0);
    for (long j = 0; j <= J; ++j) {
        acc += K.omega[J + j] * Sp[j];
        if (j > 0) acc += K.omega[J - j] * Sm[j];
    }
    return acc;
}
}  // namespace detail

// Lambda(s) = I(s) + eps I(1 - s) with the smoothing e^{A w^2}
inline Cx completed_lambda(const LSpec& sp, const Cx& s, const Real& A = 0, const Real& c = 2) {
    require(c + s.re > 1 && c + 1 - s.re > 1, "completed_lambda: contour must lie in the region of convergence");
    AfeKernel K1(sp, s, A, c), K2(sp, Cx(1) - s, A, c);
    long X = std::max(afe_kernel_length(K1), afe_kernel_length(K2));
    if (X > sp.length())
        throw PrecisionError("completed_lambda: " + sp.name + " needs " + std::to_string(X) + " coefficients, have " +
                             std::to_string(sp.length()));
    return detail::afe_half(sp, K1, X) + detail::afe_half(sp, K2, X) * Real(sp.eps);
}

inline Cx lvalue(const LSpec& sp, const Cx& s, const Real& A = 0, const Real& c = 2) {
    return completed_lambda(sp, s, A, c) / gamma_factor(sp, s);
}

struct SymmetryReport {
    Cx s;
    Cx lambda_s, lambda_1ms;
    Real relative;
};

inline long afe_symmetry_length(const LSpec& sp, const Cx& s, const Real& c = 2) {
    return std::max(afe_required_length(sp, s, 0, c), afe_required_length(sp, Cx(1) - s, Real(1) / 32, c));
}

// smallest convenient contour with both halves absolutely convergent
inline Real afe_contour(const Cx& s) {
    Real need = s.re > Real(1) / 2 ? s.re : 1 - s.re;
    return need < Real(3) / 2 ? Real(2) : need + Real(1) / 2;
}

// Lambda(s) and eps Lambda(1 - s) from two different smoothings; agreement tests the functional equation
inline SymmetryReport afe_symmetry(const LSpec& sp, const Cx& s, const Real& c = 2) {
    SymmetryReport r;
    r.s = s;
    r.lambda_s = completed_lambda(sp, s, Real(0), c);
    r.lambda_1ms = completed_lambda(sp, Cx(1) - s, Real(1) / 32, c) * Real(sp.eps);
    Real den = abs(r.lambda_s);
    r.relative = den == 0 ? abs(r.lambda_1ms) : abs(r.lambda_s - r.lambda_1ms) / den;
    return r;
}

// Hecke eigenvalues a(p^e) for p <= X from a(p) (arithmetic normalization, weight w, level N)
class PrimePowerTable {
public:
    PrimePowerTable(const NewformGL2& g, long X) : w_(g.weight()), N_(g.level()) {
        require(X <= g.nmax(), "PrimePowerTable: coefficient table too short");
        for (long p : primes_upto(X)) {
            std::vector<Real> v{Real(1), g.a(p)};
            tab_[p] = v;
        }
    }
    const Real& at(long p, long e) {
        auto& v = tab_.at(p);
        while (static_cast<long>(v.size()) <= e) {
            long t = static_cast<long>(v.size());
            if (N_ % p == 0)
                v.push_back(v[t - 1] * v[1]);
            else
                v.push_back(v[1] * v[t - 1] - to_real(ipow(p, w_ - 1)) * v[t - 2]);
        }
        return v[e];
    }

private:
    long w_, N_;
    std::map<long, std::vector<Real>> tab_;
};

// exact variant over Z
class PrimePowerTableZ {
public:
    PrimePowerTableZ(const NewformGL2& g, long X) : w_(g.weight()) {
        require(g.exact() && g.level() == 1, "PrimePowerTableZ: exact level-one data required");
        require(X <= g.nmax(), "PrimePowerTableZ: coefficient table too short");
        for (long p : primes_upto(X)) tab_[p] = {mpz_class(1), g.a_exact(p)};
    }
    const mpz_class& at(long p, long e) {
        auto& v = tab_.at(p);
        while (static_cast<long>(v.size()) <= e) {
            long t = static_cast<long>(v.size());
            v.push_back(v[1] * v[t - 1] - ipow(p, w_ - 1) * v[t - 2]);
        }
        return v[e];
    }

private:
    long w_;
    std::map<long, std::vector<mpz_class>> tab_;
};

// B(n) = n^{(4k-1)/2} b(n) for f of weight 2k, g of weight k+1, level one:
// B(n) = sum_{a m^2 = n} a_f(a) m^{3k-1} sum_{d | (a, m)} mu(d) d^{2k} R(a/d) R(m/d),  R(r) = sum_{x y^2 = r} a_g(x^2) y^{2k}
inline std::vector<mpz_class> fsym2g_coeffs_exact(const NewformGL2& f, const NewformGL2& g, long X) {
    long k = g.weight() - 1;
    require(f.weight() == 2 * k, "fsym2g: weights must be 2k and k + 1");
    require(f.exact() && g.exact() && f.level() == 1 && g.level() == 1, "fsym2g_coeffs_exact: exact level-one data");
    PrimePowerTableZ tg(g, X);
    auto spf = spf_table(X);
    auto ag_sq = [&](long x) {
        mpz_class r = 1;
        long m = x;
        while (m > 1) {
            long p = spf[m], e = 0;
            while (m % p == 0) {
                m /= p;
                ++e;
            }
            r *= tg.at(p, 2 * e);
        }
        return r;
    };
    std::vector<mpz_class> R(X + 1, 0);
    for (long y = 1; y * y <= X; ++y) {
        mpz_class y2k = ipow(y, 2 * k);
        for (long x = 1; x * y * y <= X; ++x) R[x * y * y] += ag_sq(x) * y2k;
    }
    std::vector<mpz_class> B(X + 1, 0);
    for (long m = 1; m * m <= X; ++m) {
        mpz_class m3 = ipow(m, 3 * k - 1);
        for (long a = 1; a * m * m <= X; ++a) {
            mpz_class A = 0;
            for (long d : divisors(gcd(a, m))) {
                int mu = mobius(d);
                if (mu) A += mu * ipow(d, 2 * k) * R[a / d] * R[m / d];
            }
            B[a * m * m] += f.a_exact(a) * A * m3;
        }
    }
    return B;
}

// the same from Euler factors: prod over the Satake parameters of f and of sym^2 g, inverted as power series
inline std::vector<mpz_class> fsym2g_euler_exact(const NewformGL2& f, const NewformGL2& g, long X) {
    long k = g.weight() - 1;
    require(f.weight() == 2 * k, "fsym2g: weights must be 2k and k + 1");
    require(f.exact() && g.exact() && f.level() == 1 && g.level() == 1, "fsym2g_euler_exact: exact level-one data");
    std::vector<mpz_class> B(X + 1, 0);
    if (X >= 1) B[1] = 1;
    std::map<long, std::vector<mpz_class>> local;
    for (long p : primes_upto(X)) {
        long emax = 0;
        for (long q = p; q <= X; q *= p) ++emax;
        mpz_class a = f.a_exact(p), q = ipow(p, 2 * k - 1), pk = ipow(p, k);
        mpz_class e1 = g.a_exact(p) * g.a_exact(p) - 2 * pk, e2 = pk * pk;
        // (1 - a u X + q u^2 X^2)(1 - a v X + q v^2 X^2), u + v = e1, uv = e2
        std::vector<mpz_class> P4{1, -a * e1, a * a * e2 + q * (e1 * e1 - 2 * e2), -a * q * e2 * e1, q * q * e2 * e2};
        std::vector<mpz_class> P2{1, -a * pk, q * pk * pk};
        std::vector<mpz_class> P6(7, 0);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 3; ++j) P6[i + j] += P4[i] * P2[j];
        std::vector<mpz_class> inv(emax + 1, 0);
        inv[0] = 1;
        for (long e = 1; e <= emax; ++e) {
            mpz_class s = 0;
            for (long i = 1; i <= std::min<long>(e, 6); ++i) s -= P6[i] * inv[e - i];
            inv[e] = s;
        }
        local[p] = inv;
    }
    auto spf = spf_table(X);
    for (long n = 2; n <= X; ++n) {
        long m = n, p = spf[n], e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        B[n] = local[p][e] * B[m];
    }
    return B;
}

// analytic coefficients b(n) of L(f x sym^2 g, s), any square-free N with N_g | N, local assembly
inline std::vector<Real> fsym2g_coeffs(const NewformGL2& f, const NewformGL2& g, long X) {
    long k = g.weight() - 1;
    require(f.weight() == 2 * k, "fsym2g: weights must be 2k and k + 1");
    long N = f.level(), Ng = g.level();
    require(N % Ng == 0 && is_squarefree(N), "fsym2g: need square-free N and N_g | N");
    require(X <= f.nmax() && X <= g.nmax(), "fsym2g: eigenvalue tables shorter than X");
    PrimePowerTable tf(f, X), tg(g, X);
    std::map<long, std::vector<Real>> local;
    for (long p : primes_upto(X)) {
        long emax = 0;
        for (long q = p; q <= X; q *= p) ++emax;
        Real sp = sqrt(Real(p));
        auto lf = [&](long t) { return tf.at(p, t) / pow(sp, t * (2 * k - 1)); };
        auto lg = [&](long t) { return tg.at(p, t) / pow(sp, t * k); };
        std::vector<Real> Ag(emax + 1);
        for (long t = 0; t <= emax; ++t) {
            Real s = 0;
            if (Ng % p == 0)
                for (long i = 0; i <= t; ++i) s += pow(Real(p), i - t);
            else
                for (long u = 0; 2 * u <= t; ++u) s += lg(2 * (t - 2 * u));
            Ag[t] = s;
        }
        std::vector<Real> v(emax + 1, Real(0));
        for (long e = 0; e <= emax; ++e) {
            if (N % p == 0) {
                v[e] = lf(e) * Ag[e];
                continue;
            }
            Real s = 0;
            for (long u = 0; 2 * u <= e; ++u) {
                long t = e - 2 * u;
                Real A = Ag[t] * Ag[u];
                if (t >= 1 && u >= 1) A -= Ag[t - 1] * Ag[u - 1];
                s += lf(t) * A;
            }
            v[e] = s;
        }
        local[p] = v;
    }
    std::vector<Real> b(X + 1, Real(0));
    if (X >= 1) b[1] = 1;
    auto spf = spf_table(X);
    for (long n = 2; n <= X; ++n) {
        long m = n, p = spf[n], e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        b[n] = local[p][e] * b[m];
    }
    return b;
}

struct TripleReport {
    long X;
    Real max_deviation;
    long worst_n;
};

// L(f x g x g) from the eight Satake products against L(f) L(f x sym^2 g), n <= X with (n, N) = 1
inline TripleReport triple_factorization_check(const NewformGL2& f, const NewformGL2& g, long X) {
    long k = g.weight() - 1;
    auto b = fsym2g_coeffs(f, g, X);
    long N = f.level();
    std::map<long, std::vector<Cx>> local;
    for (long p : primes_upto(X)) {
        if (N % p == 0) continue;
        long emax = 0;
        for (long q = p; q <= X; q *= p) ++emax;
        auto sf = satake(f.a(p) / pow(Real(p), Real(2 * k - 1) / 2), 1, 1);
        auto sg = satake(g.a(p) / pow(Real(p), Real(k) / 2), 1, 1);
        std::vector<Cx> xs;
        for (const Cx& a : {sf.alpha, sf.beta})
            for (const Cx& u : {sg.alpha, sg.beta})
                for (const Cx& v : {sg.alpha, sg.beta}) xs.push_back(a * u * v);
        // 1 / prod (1 - x X) truncated at X^emax
        std::vector<Cx> ser(emax + 1, Cx(0));
        ser[0] = Cx(1);
        for (auto& x : xs)
            for (long e = 1; e <= emax; ++e) ser[e] += x * ser[e - 1];
        local[p] = ser;
    }
    auto spf = spf_table(X);
    std::vector<Cx> t(X + 1, Cx(0));
    if (X >= 1) t[1] = Cx(1);
    for (long n = 2; n <= X; ++n) {
        long m = n, p = spf[n], e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (N % p) t[n] = local[p][e] * t[m];
    }
    TripleReport r{X, Real(0), 1};
    for (long n = 1; n <= X; ++n) {
        if (gcd(n, N) != 1) continue;
        Real conv = 0;
        for (long d : divisors(n)) conv += f.lambda(d) * b[n / d];
        Real dev = abs(t[n] - Cx(conv));
        if (dev > r.max_deviation) {
            r.max_deviation = dev;
            r.worst_n = n;
        }
    }
    return r;
}

inline LSpec spec_f_sym2g(const NewformGL2& f, const NewformGL2& g, long X,
                          const Real& top_shift_offset = Real(-1) / 2) {
    long k = g.weight() - 1;
    LSpec sp;
    sp.name = "L(" + f.label() + " x sym2 " + g.label() + ")";
    sp.gc = {Real(2 * k) + top_shift_offset, Real(k) - Real(1) / 2, Real(1) / 2};
    sp.Q = pow(Real(f.level()), Real(3) / 2) * sqrt(Real(g.level()));
    sp.eps = 1;
    sp.b = fsym2g_coeffs(f, g, X);
    return sp;
}

// L(f, s) in analytic normalization; eps = i^w prod_{p | N} w_f(p)
inline LSpec spec_gl2(const NewformGL2& f, long X) {
    require(X <= f.nmax(), "spec_gl2: coefficient table too short");
    LSpec sp;
    sp.name = "L(" + f.label() + ")";
    sp.gc = {Real(f.weight() - 1) / 2};
    sp.Q = sqrt(Real(f.level()));
    int e = (f.weight() / 2) % 2 ? -1 : 1;
    for (auto& [p, w] : f.atkin_lehner()) e *= w;
    sp.eps = e;
    sp.b.assign(X + 1, Real(0));
    for (long n = 1; n <= X; ++n) sp.b[n] = f.lambda(n);
    return sp;
}

// L(sym^2 g, s) = zeta(2s) sum lambda(n^2) n^{-s}, level one
inline LSpec spec_sym2(const NewformGL2& g, long X) {
    if (g.level() != 1) throw DomainError("spec_sym2: only level one is supported");
    PrimePowerTable tg(g, X);
    auto spf = spf_table(X);
    std::vector<Real> l2(X + 1, Real(0));
    for (long x = 1; x <= X; ++x) {
        Real r = 1;
        long m = x;
        while (m > 1) {
            long p = spf[m], e = 0;
            while (m % p == 0) {
                m /= p;
                ++e;
            }
            r *= tg.at(p, 2 * e) / pow(Real(p), e * (g.weight() - 1));
        }
        l2[x] = r;
    }
    LSpec sp;
    sp.name = "L(sym2 " + g.label() + ")";
    sp.gr = {Real(1)};
    sp.gc = {Real(g.weight() - 1)};
    sp.b.assign(X + 1, Real(0));
    for (long m = 1; m * m <= X; ++m)
        for (long d = 1; d * m * m <= X; ++d) sp.b[d * m * m] += l2[d];
    return sp;
}

// Lambda(s) for a single Gamma_C factor, real s, by incomplete gamma functions (independent of the contour code)
inline Real lambda_incgamma_degree2(const LSpec& sp, const Real& s) {
    require(sp.gc.size() == 1 && sp.gr.empty(), "lambda_incgamma_degree2: one Gamma_C factor expected");
    require(sp.Q == 1, "lambda_incgamma_degree2: conductor one expected");
    const Real mu = sp.gc[0];
    const Real tp = 2 * real_pi();
    const Real tol = eps_digits(static_cast<int>(current_digits()) + 5);
    Real acc = 0;
    for (long n = 1; n <= sp.length(); ++n) {
        Real x = tp * n;
        Real a1 = s + mu, a2 = 1 - s + mu;
        Real t1 = boost::math::tgamma(a1, x) / pow(x, a1);
        Real t2 = boost::math::tgamma(a2, x) / pow(x, a2);
        Real term = 2 * sp.b[n] * pow(Real(n), mu) * (t1 + Real(sp.eps) * t2);
        acc += term;
        if ((t1 + abs(t2)) * pow(Real(n), mu + 1) < tol * abs(acc)) return acc;
    }
    throw PrecisionError("lambda_incgamma_degree2: coefficient table too short");
}

// <f, f> = (2/pi) (4 pi)^{-w} Gamma(w) N prod_{p | N} (p + 1)^{-1} L(sym^2 f, 1)
inline Real petersson_norm_ils(long w, long N, const Real& lsym2_at_1) {
    Real r = 2 / real_pi() * pow(4 * real_pi(), -w) * real_gamma(Real(w)) * Real(N) * lsym2_at_1;
    for (long p : prime_divisors(N)) r /= Real(p + 1);
    return r;
}

// Gauss-Legendre nodes and weights on [-1, 1] at the working precision
struct GaussRule {
    std::vector<Real> x, w;
};

inline const GaussRule& gauss_legendre(int n) {
    static std::map<std::pair<int, unsigned>, GaussRule> cache;
    auto key = std::make_pair(n, current_digits());
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    GaussRule g;
    g.x.resize(n);
    g.w.resize(n);
    const Real pi = real_pi();
    const Real tol = eps_digits(static_cast<int>(current_digits()) + 3);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        Real z = cos(pi * (i + Real(0.75)) / (n + Real(0.5)));
        Real dp;
        for (int it2 = 0; it2 < 100; ++it2) {
            Real p0 = 1, p1 = z;
            for (int j = 2; j <= n; ++j) {
                Real p2 = ((2 * j - 1) * z * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = z;
                p0 = 1;
            }
            dp = n * (z * p1 - p0) / (z * z - 1);
            Real dz = p1 / dp;
            z -= dz;
            if (abs(dz) < tol) break;
        }
        {
            Real p0 = 1, p1 = z;
            for (int j = 2; j <= n; ++j) {
                Real p2 = ((2 * j - 1) * z * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1);
        }
        Real w = 2 / ((1 - z * z) * dp * dp);
        g.x[i] = -z;
        g.x[n - 1 - i] = z;
        g.w[i] = w;
        g.w[n - 1 - i] = w;
    }
    return cache.emplace(key, std::move(g)).first->second;
}

struct QuadOptions {
    int nx = 24;         // nodes per x panel
    int ny = 24;         // nodes per y panel
    Real ymax = 0;       // 0: chosen from the decay rate
    bool full_x = false; // integrate x in [-1/2, 1/2] instead of doubling [0, 1/2]
};

// int_F f(x, y) y^{-2} dx dy over the standard fundamental domain
template <class Fn>
Real integrate_fundamental_domain(Fn&& f, const QuadOptions& o, const Real& ymax) {
    const auto& gx = gauss_legendre(o.nx);
    const auto& gy = gauss_legendre(o.ny);
    std::vector<std::pair<Real, Real>> xpanels;
    if (o.full_x)
        xpanels = {{Real(-0.5), Real(0)}, {Real(0), Real(0.5)}};
    else
        xpanels = {{Real(0), Real(0.5)}};
    Real total = 0;
    for (auto& [xa, xb] : xpanels) {
        for (int i = 0; i < o.nx; ++i) {
            Real x = (xa + xb) / 2 + (xb - xa) / 2 * gx.x[i];
            Real wx = (xb - xa) / 2 * gx.w[i];
            Real y0 = sqrt(1 - x * x);
            // geometric y panels
            std::vector<Real> cuts{y0};
            Real step = 0.5;
            while (cuts.back() < ymax) {
                cuts.push_back(std::min(Real(cuts.back() + step), ymax));
                step *= 2;
            }
            Real inner = 0;
            for (std::size_t pnl = 0; pnl + 1 < cuts.size(); ++pnl) {
                Real ya = cuts[pnl], yb = cuts[pnl + 1];
                for (int j = 0; j < o.ny; ++j) {
                    Real y = (ya + yb) / 2 + (yb - ya) / 2 * gy.x[j];
                    inner += (yb - ya) / 2 * gy.w[j] * f(x, y) / (y * y);
                }
            }
            total += wx * inner;
        }
    }
    return o.full_x ? total : 2 * total;
}

// y with e^{-rate y} y^{kappa} below 10^{-digits} e^{-rate y0}
inline Real decay_cutoff(const Real& rate, const Real& kappa, unsigned digits) {
    Real target = Real(static_cast<long>(digits) + 5) * log(Real(10));
    Real y = 2;
    for (int i = 0; i < 200; ++i) {
        Real v = rate * y - kappa * log(y);
        if (v > target + rate) break;
        y *= Real(1.2);
    }
    return y;
}

// level-one Petersson norm int_F |g|^2 y^w dmu by quadrature
inline Real norm_gl2_quadrature(const NewformGL2& g, const QuadOptions& o = {}) {
    if (g.level() != 1) throw DomainError("norm_gl2_quadrature: level one only");
    const Real w = Real(g.weight());
    Real ymax = o.ymax > 0 ? o.ymax : decay_cutoff(4 * real_pi(), w, current_digits());
    const Real tp = 2 * real_pi();
    const Real tol = eps_digits(static_cast<int>(current_digits()) + 5);
    auto f = [&](const Real& x, const Real& y) {
        Cx q = cexp(Cx(-tp * y, tp * x)), qn = q, s(0);
        for (long n = 1;; ++n) {
            if (n > g.nmax()) throw PrecisionError("norm_gl2_quadrature: coefficient table too short");
            Cx t = qn * g.a(n);
            s += t;
            if (abs(t) < tol * (abs(s) + tol) && n > 3) break;
            qn *= q;
        }
        return norm2(s) * pow(y, w);
    };
    return integrate_fundamental_domain(f, o, ymax);
}

// vector (h0, h1)(tau), h0 = sum c(4n) q^n, h1 = sum c(4n-1) q^{n-1/4}
struct ThetaVector {
    Cx h0, h1;
};

template <class T>
ThetaVector theta_vector(const HalfIntForm<T>& h, const Cx& tau) {
    const Real tp = 2 * real_pi();
    const Real tol = eps_digits(static_cast<int>(current_digits()) + 8);
    Cx q = cexp(Cx(-tp * tau.im, tp * tau.re));
    Cx q4 = cexp(Cx(tp * tau.im / 4, -tp * tau.re / 4));  // q^{-1/4}
    ThetaVector v{Cx(0), Cx(0)};
    Cx qn = q;
    Real scale_ = 0;
    for (long n = 1;; ++n) {
        if (4 * n >= h.dmax()) throw PrecisionError("theta_vector: plus-space coefficients too short");
        Real a = to_real(h.c(4 * n)), b = to_real(h.c(4 * n - 1));
        Cx t0 = qn * a, t1 = qn * b;
        v.h0 += t0;
        v.h1 += t1;
        Real m = abs(t0) + abs(t1);
        scale_ = std::max(scale_, Real(abs(v.h0) + abs(v.h1)));
        if (n > 3 && m < tol * (scale_ + tol)) break;
        qn *= q;
    }
    v.h1 *= q4;
    return v;
}

// (h0, h1)(tau) for any tau in H, up to a common phase, via reduction to the standard domain
template <class T>
ThetaVector theta_vector_anywhere(const HalfIntForm<T>& h, Cx tau) {
    const Real kappa = Real(h.k()) + Real(1) / 2;
    const Real r2 = 1 / sqrt(Real(2));
    // H(tau_orig) = M H(tau_cur)
    Cx m00(1), m01(0), m10(0), m11(1);
    for (int it = 0; it < 10000; ++it) {
        Real n = round(tau.re);
        if (n != 0) {
            tau.re -= n;
            long nl = n.convert_to<long>();
            long r = mod(nl, 4);
            Cx ph(1);
            for (long j = 0; j < r; ++j) ph *= Cx(0, -1);  // diag(1, -i)^n
            m01 *= ph;
            m11 *= ph;
        }
        if (norm2(tau) >= 1 - eps_digits(static_cast<int>(current_digits()) - 5)) break;
        // tau = S sigma with sigma = -1/tau: H(tau) = |sigma|^kappa rho(S) H(sigma)
        Cx sigma = Cx(-1) / tau;
        Real sc = pow(abs(sigma), kappa) * r2;
        Cx a = (m00 + m01) * sc, b = (m00 - m01) * sc, c = (m10 + m11) * sc, d = (m10 - m11) * sc;
        m00 = a;
        m01 = b;
        m10 = c;
        m11 = d;
        tau = sigma;
    }
    auto v = theta_vector(h, tau);
    return {m00 * v.h0 + m01 * v.h1, m10 * v.h0 + m11 * v.h1};
}

struct NormReport {
    Real value;
    Real refined;         // with doubled node counts
    Real relative_change; // |value - refined| / refined
};

// <h, h> = (1/6) int_{Gamma0(4)\H} |h|^2 y^{k+1/2} dmu = 4^{-(k+1/2)} int_F (|h0|^2 + |h1|^2) y^{k+1/2} dmu
template <class T>
Real norm_h_theta_once(const HalfIntForm<T>& h, const QuadOptions& o) {
    const Real kappa = Real(h.k()) + Real(1) / 2;
    Real ymax = o.ymax > 0 ? o.ymax : decay_cutoff(3 * real_pi(), kappa, current_digits());
    auto f = [&](const Real& x, const Real& y) {
        auto v = theta_vector(h, Cx(x, y));
        return (norm2(v.h0) + norm2(v.h1)) * pow(y, kappa);
    };
    return integrate_fundamental_domain(f, o, ymax) / pow(Real(4), kappa);
}

// the same integral over the six translates gamma F, gamma in Gamma0(4)\SL2(Z), with h(tau) = h0(4 tau) + h1(4 tau)
template <class T>
Real norm_h_cosets_once(const HalfIntForm<T>& h, const QuadOptions& o) {
    const Real kappa = Real(h.k()) + Real(1) / 2;
    // the cusp of width 4 decays four times slower
    QuadOptions oo = o;
    oo.full_x = true;
    Real ymax = o.ymax > 0 ? o.ymax : decay_cutoff(3 * real_pi() / 4, kappa, current_digits());
    const long reps[6][4] = {{1, 0, 0, 1}, {0, -1, 1, 0}, {0, -1, 1, 1}, {0, -1, 1, 2}, {0, -1, 1, 3}, {-1, 0, 2, -1}};
    auto f = [&](const Real& x, const Real& y) {
        Cx tau(x, y);
        Real s = 0;
        for (auto& g : reps) {
            Cx num = tau * Real(g[0]) + Cx(Real(g[1])), den = tau * Real(g[2]) + Cx(Real(g[3]));
            Cx gt = num / den;
            auto v = theta_vector_anywhere(h, gt * Real(4));
            s += norm2(v.h0 + v.h1) * pow(gt.im, kappa);
        }
        return s;
    };
    return integrate_fundamental_domain(f, oo, ymax) / 6;
}

template <class T>
NormReport norm_h_quadrature(const HalfIntForm<T>& h, QuadOptions o = {}, bool cosets = false) {
    NormReport r;
    r.value = cosets ? norm_h_cosets_once(h, o) : norm_h_theta_once(h, o);
    o.nx *= 2;
    o.ny *= 2;
    r.refined = cosets ? norm_h_cosets_once(h, o) : norm_h_theta_once(h, o);
    r.relative_change = abs(r.value - r.refined) / abs(r.refined);
    return r;
}

// <h, h> = 4^{-k} (4 pi)^{k+1} pi^2 zeta(2)^{-1} / (Gamma(k+1) L(f, 3/2)) N prod (p^2+1)/((p-1)^2 (p+1)) <F, F>
inline Real petersson_h_over_F(long k, long N, const Real& lf_3_2) {
    const Real pi = real_pi();
    Real z2 = pi * pi / 6;
    Real r = pow(Real(4), -k) * pow(4 * pi, k + 1) * pi * pi / z2 / (real_gamma(Real(k + 1)) * lf_3_2) * Real(N);
    for (long p : prime_divisors(N)) r *= Real(p * p + 1) / (Real(p - 1) * Real(p - 1) * Real(p + 1));
    return r;
}

inline Real norm_F_from_h(const Real& hh, long k, long N, const Real& lf_3_2) {
    return hh / petersson_h_over_F(k, N, lf_3_2);
}

inline Real norm_h_from_F(const Real& FF, long k, long N, const Real& lf_3_2) {
    return FF * petersson_h_over_F(k, N, lf_3_2);
}

// v2 / v1^2 = zeta(4) / (2 pi zeta(2))
inline Real volume_ratio() {
    const Real pi = real_pi();
    return (pow(pi, 4) / 90) / (2 * pi * pi * pi / 6);
}

}  // namespace skl
