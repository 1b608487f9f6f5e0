#pragma once
// Elliptic modular forms: level one bases, Hecke eigenforms, Satake data, oldform Gram formulas.

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "qseries.hpp"
#include "real.hpp"

namespace skl {

inline long dim_modular_level1(long w) {
    if (w < 0 || w % 2) return 0;
    if (w == 2) return 0;
    return w / 12 + (w % 12 == 2 ? 0 : 1);
}

inline long dim_cusp_level1(long w) {
    long d = dim_modular_level1(w);
    return d > 0 ? d - 1 : 0;
}

// E_4 = 1 + 240 sum sigma_3(n) q^n, E_6 = 1 - 504 sum sigma_5(n) q^n
inline QSeries<mpz_class> eisenstein_series(int w, long P) {
    require(w == 4 || w == 6, "eisenstein_series: weight 4 or 6 only");
    std::vector<mpz_class> s(P, 0);
    for (long d = 1; d < P; ++d) {
        mpz_class dk = ipow(d, w - 1);
        for (long n = d; n < P; n += d) s[n] += dk;
    }
    long c = w == 4 ? 240 : -504;
    for (long n = 1; n < P; ++n) s[n] *= c;
    if (P > 0) s[0] = 1;
    return QSeries<mpz_class>(std::move(s), P, w, 1);
}

// prod (1 - q^n) via pentagonal numbers
inline QSeries<mpz_class> euler_product_series(long P) {
    std::vector<mpz_class> e(P, 0);
    for (long k = 0;; ++k) {
        bool any = false;
        for (long s : {k, -k - 1}) {
            long ex = s * (3 * s - 1) / 2;
            if (ex < P) {
                e[ex] += (s % 2 == 0) ? 1 : -1;
                any = true;
            }
        }
        if (!any) break;
    }
    return QSeries<mpz_class>(std::move(e), P, 0, 1);
}

// Delta = q prod (1 - q^n)^24
inline QSeries<mpz_class> delta_series(long P) {
    require(P >= 1, "delta_series: P >= 1");
    auto e24 = series_pow(euler_product_series(P), 24, P);
    std::vector<mpz_class> d(P, 0);
    for (long n = 1; n < P; ++n) d[n] = e24.at(n - 1);
    return QSeries<mpz_class>(std::move(d), P, 12, 1);
}

// echelon basis b_i = q^i + O(q^{d+1}), i = 1..d, of S_w(1)
inline std::vector<QSeries<mpz_class>> victor_miller_basis(long w, long P) {
    require(w >= 4 && w % 2 == 0, "victor_miller_basis: even weight >= 4");
    long d = dim_cusp_level1(w);
    std::vector<QSeries<mpz_class>> out;
    if (d == 0) return out;
    require(P > d, "victor_miller_basis: precision must exceed the dimension");
    auto D = delta_series(P);
    auto E4 = eisenstein_series(4, P);
    auto E6 = eisenstein_series(6, P);
    auto Dj = D;
    for (long j = 1; j <= d; ++j) {
        long rest = w - 12 * j;
        long b = (rest % 4 == 0) ? 0 : 1;
        long a = (rest - 6 * b) / 4;
        auto m = Dj;
        if (a > 0) m = series_mul(m, series_pow(E4, static_cast<unsigned>(a), P));
        if (b > 0) m = series_mul(m, E6);
        out.push_back(m.truncate(P));
        if (j < d) Dj = series_mul(Dj, D).truncate(P);
    }
    for (long i = 0; i < d; ++i) {
        for (long j = i + 1; j < d; ++j) {
            mpz_class c = out[i].at(j + 1);
            if (c != 0) out[i] = out[i] - scale(out[j], c);
        }
    }
    return out;
}

// matrix of T(p) on an echelon basis: column j holds the leading coefficients of T(p) b_j
inline Mat<mpq_class> hecke_matrix_level1(const std::vector<QSeries<mpz_class>>& basis, long p, long w) {
    long d = static_cast<long>(basis.size());
    Mat<mpq_class> M = mat_zero<mpq_class>(d, d);
    for (long j = 0; j < d; ++j) {
        auto t = op_T(basis[j], p, w, 1);
        for (long i = 0; i < d; ++i) M[i][j] = mpq_class(t.at(i + 1));
    }
    return M;
}

struct SatakeParams {
    Cx alpha, beta;
};

// roots of X^2 - a_p X + p^{w-1}
inline SatakeParams satake(const Real& a_p, long p, long w) {
    Real pw = to_real(ipow(p, w - 1));
    Real disc = a_p * a_p - 4 * pw;
    if (disc >= 0) {
        Real s = sqrt(disc);
        return {Cx((a_p + s) / 2), Cx((a_p - s) / 2)};
    }
    Real s = sqrt(-disc);
    return {Cx(a_p / 2, s / 2), Cx(a_p / 2, -s / 2)};
}

// a(p^t) from Satake data, falling back to (t+1) alpha^t when alpha = beta
inline Cx satake_power_coeff(const SatakeParams& sp, int t) {
    Cx diff = sp.alpha - sp.beta;
    Real scale_ = abs(sp.alpha) + abs(sp.beta);
    if (abs(diff) <= eps_digits(static_cast<int>(current_digits()) / 2) * (scale_ + 1)) {
        Cx r(1);
        for (int i = 0; i < t; ++i) r *= sp.alpha;
        return r * Real(t + 1);
    }
    Cx at(1), bt(1);
    for (int i = 0; i <= t; ++i) {
        at *= sp.alpha;
        bt *= sp.beta;
    }
    return (at - bt) / diff;
}

// fill a multiplicative arithmetic coefficient table from prime values
// (a[p] must be set for every prime p <= nmax; p | N uses a(p^e) = a(p)^e)
template <class T>
void hecke_extend(std::vector<T>& a, long w, long N) {
    long nmax = static_cast<long>(a.size()) - 1;
    if (nmax < 1) return;
    a[1] = T(1);
    auto spf = spf_table(nmax);
    for (long n = 2; n <= nmax; ++n) {
        long p = spf[n];
        long m = n, e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (m > 1) {
            a[n] = a[n / m] * a[m];
            continue;
        }
        if (e == 1) continue;  // prime: given
        long pe1 = n / p, pe2 = pe1 / p;
        if (N % p == 0)
            a[n] = a[pe1] * a[p];
        else
            a[n] = a[p] * a[pe1] - scalar_traits<T>::from_z(ipow(p, w - 1)) * a[pe2];
    }
}

class NewformGL2 {
public:
    NewformGL2() = default;

    // a[0] unused; a.size() = nmax + 1
    NewformGL2(std::string label, long level, long weight, std::vector<Real> a, std::vector<mpz_class> a_exact = {},
               std::map<long, int> al = {})
        : label_(std::move(label)), level_(level), weight_(weight), a_(std::move(a)), a_exact_(std::move(a_exact)),
          al_(std::move(al)) {
        require(level_ >= 1 && weight_ >= 2, "NewformGL2: bad level or weight");
        require(a_.size() >= 2, "NewformGL2: need a(1)");
        if (a_[1] != 1) throw DataError("NewformGL2: a(1) must be 1");
        if (!a_exact_.empty()) require(a_exact_.size() == a_.size(), "NewformGL2: exact table size mismatch");
        for (long p : prime_divisors(level_))
            if (!al_.count(p)) throw DataError("NewformGL2: missing Atkin-Lehner sign at " + std::to_string(p));
    }

    const std::string& label() const { return label_; }
    long level() const { return level_; }
    long weight() const { return weight_; }
    long nmax() const { return static_cast<long>(a_.size()) - 1; }
    bool exact() const { return !a_exact_.empty(); }
    const std::map<long, int>& atkin_lehner() const { return al_; }
    int al_sign(long p) const {
        auto it = al_.find(p);
        if (it == al_.end()) throw DomainError("al_sign: prime does not divide the level");
        return it->second;
    }

    const Real& a(long n) const {
        if (n < 1 || n > nmax()) throw PrecisionError("a(n) beyond stored table, n = " + std::to_string(n));
        return a_[n];
    }
    const mpz_class& a_exact(long n) const {
        if (!exact()) throw DomainError("a_exact: coefficients are not rational");
        if (n < 1 || n > nmax()) throw PrecisionError("a_exact(n) beyond stored table, n = " + std::to_string(n));
        return a_exact_[n];
    }
    // analytic normalization a(n) / n^{(w-1)/2}
    Real lambda(long n) const { return a(n) / pow(Real(n), Real(weight_ - 1) / 2); }

    QSeries<Real> series(long P) const {
        require(P - 1 <= nmax(), "series: precision beyond stored table");
        std::vector<Real> c(P, Real(0));
        for (long n = 1; n < P; ++n) c[n] = a_[n];
        return QSeries<Real>(std::move(c), P, weight_, level_);
    }
    QSeries<mpq_class> series_exact(long P) const {
        require(exact(), "series_exact: coefficients are not rational");
        require(P - 1 <= nmax(), "series_exact: precision beyond stored table");
        std::vector<mpq_class> c(P, 0);
        for (long n = 1; n < P; ++n) c[n] = a_exact_[n];
        return QSeries<mpq_class>(std::move(c), P, weight_, level_);
    }

private:
    std::string label_;
    long level_ = 1;
    long weight_ = 2;
    std::vector<Real> a_;
    std::vector<mpz_class> a_exact_;
    std::map<long, int> al_;
};

struct EigenbasisResult {
    std::vector<NewformGL2> forms;
    std::vector<Real> t2_eigenvalues;
    Real max_residual = 0;
};

// Hecke eigenforms of S_w(1) with coefficients a(n), n <= nmax
inline EigenbasisResult eigenbasis_level1(long w, long nmax) {
    EigenbasisResult res;
    long d = dim_cusp_level1(w);
    if (d == 0) return res;
    long P = std::max(nmax + 1, 2 * d + 2);
    auto basis = victor_miller_basis(w, P);
    auto M = hecke_matrix_level1(basis, 2, w);
    std::string base = std::to_string(w) + ".1.";
    if (d == 1) {
        std::vector<Real> a(nmax + 1, Real(0));
        std::vector<mpz_class> ae(nmax + 1, 0);
        for (long n = 1; n <= nmax; ++n) {
            ae[n] = basis[0].at(n);
            a[n] = to_real(ae[n]);
        }
        res.t2_eigenvalues.push_back(to_real(M[0][0]));
        res.forms.emplace_back(base + "a", 1, w, std::move(a), std::move(ae));
        return res;
    }
    auto cp = charpoly(M);
    std::vector<Real> cr;
    for (auto& c : cp) cr.push_back(to_real(c));
    auto roots = poly_roots(cr);
    std::vector<Real> lam;
    Real scale_ = to_real(ipow(2, w));
    for (auto& r : roots) {
        if (abs(r.im) > eps_digits(static_cast<int>(current_digits()) / 3) * scale_)
            throw ComputationError("eigenbasis_level1: nonreal T(2) eigenvalue");
        lam.push_back(r.re);
    }
    std::sort(lam.begin(), lam.end());
    for (std::size_t i = 1; i < lam.size(); ++i)
        if (abs(lam[i] - lam[i - 1]) < eps_digits(static_cast<int>(current_digits()) / 3) * scale_)
            throw ComputationError("eigenbasis_level1: degenerate T(2) spectrum");
    Mat<Real> Mr = mat_zero<Real>(d, d);
    for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j) Mr[i][j] = to_real(M[i][j]);
    const char* tags = "abcdefghijklmnopqrstuvwxyz";
    for (std::size_t e = 0; e < lam.size(); ++e) {
        // x_0 = 1; rows 1..d-1 of (M - lam) x = 0
        Mat<Real> A = mat_zero<Real>(d - 1, d - 1);
        std::vector<Real> rhs(d - 1);
        for (long i = 1; i < d; ++i) {
            for (long j = 1; j < d; ++j) A[i - 1][j - 1] = Mr[i][j] - (i == j ? lam[e] : Real(0));
            rhs[i - 1] = -Mr[i][0];
        }
        auto xs = solve(A, rhs);
        std::vector<Real> x(d);
        x[0] = 1;
        for (long i = 1; i < d; ++i) x[i] = xs[i - 1];
        Real resid = 0;
        for (long i = 0; i < d; ++i) {
            Real s = -lam[e] * x[i];
            for (long j = 0; j < d; ++j) s += Mr[i][j] * x[j];
            resid = std::max(resid, Real(abs(s)));
        }
        res.max_residual = std::max(res.max_residual, Real(resid / scale_));
        std::vector<Real> a(nmax + 1, Real(0));
        for (long n = 1; n <= nmax; ++n) {
            Real s = 0;
            for (long j = 0; j < d; ++j) s += x[j] * to_real(basis[j].at(n));
            a[n] = s;
        }
        a[1] = 1;
        res.t2_eigenvalues.push_back(lam[e]);
        res.forms.emplace_back(base + tags[e % 26], 1, w, std::move(a));
    }
    return res;
}

// lambda(1, n) in arithmetic normalization: inverse of a(n) = sum_{d^2 | n, (d,N)=1} d^{w-2} lambda(1, n/d^2)
inline mpz_class lambda1_exact(const NewformGL2& g, long n) {
    mpz_class s = 0;
    for (long d = 1; d * d <= n; ++d) {
        if (n % (d * d) || gcd(d, g.level()) != 1) continue;
        int mu = mobius(d);
        if (!mu) continue;
        s += mu * ipow(d, g.weight() - 2) * g.a_exact(n / (d * d));
    }
    return s;
}

inline Real lambda1(const NewformGL2& g, long n) {
    Real s = 0;
    for (long d = 1; d * d <= n; ++d) {
        if (n % (d * d) || gcd(d, g.level()) != 1) continue;
        int mu = mobius(d);
        if (!mu) continue;
        s += Real(mu) * to_real(ipow(d, g.weight() - 2)) * g.a(n / (d * d));
    }
    return s;
}

// eta(p, t) for g of level N_g inside ambient level N
inline mpq_class gram_eta(const NewformGL2& g, long p, long t, long N) {
    require(g.weight() % 2 == 0, "gram_eta: even weight only");
    require(N % g.level() == 0, "gram_eta: N_g must divide N");
    if (t <= 0) return 1;
    long Mg = N / g.level();
    long half = g.weight() / 2;
    mpq_class base = mpq_class(lambda1_exact(g, ipow(p, t).get_si())) / mpq_class(ipow(p, half * t));
    if (Mg % p == 0) return base * mpq_class(p, p + 1);
    if (g.level() % p == 0) return base;
    return 1;
}

// <g|B_L, g|B_M> / <g, g> as a product of eta values; M | M_g
inline mpq_class gram_ratio(const NewformGL2& g, long L, long M, long N) {
    require(N % g.level() == 0, "gram_ratio: N_g must divide N");
    long Mg = N / g.level();
    require(L >= 1 && M >= 1 && Mg % M == 0, "gram_ratio: need M | M_g");
    require(is_squarefree(N), "gram_ratio: N must be square-free");
    auto fl = factor(L);
    auto tpow = [&](long q) -> long {
        auto it = fl.find(q);
        return it == fl.end() ? 0 : it->second;
    };
    mpq_class r = 1;
    for (long q : prime_divisors(g.level())) r *= gram_eta(g, q, tpow(q), N);
    for (long q : prime_divisors(Mg / M)) r *= gram_eta(g, q, tpow(q), N);
    for (long q : prime_divisors(M)) {
        long t = tpow(q);
        r *= t > 0 ? gram_eta(g, q, t - 1, N) : gram_eta(g, q, 1, N);
    }
    // primes of L outside N contribute eta = 1
    return r;
}

struct OldClass {
    std::map<long, int> sigma;      // sign per prime of L
    std::map<long, int> weights;    // d -> sigma(d)
    QSeries<mpq_class> series;      // sum_d sigma(d) g|B_d
};

// orthogonal old basis g_sigma for g of level N_g inside level N
inline std::vector<OldClass> old_basis(const NewformGL2& g, long N, long P) {
    require(is_squarefree(N), "old_basis: N must be square-free");
    require(N % g.level() == 0, "old_basis: N_g must divide N");
    long L = N / g.level();
    auto primes = prime_divisors(L);
    auto ds = divisors(L);
    auto base = g.series_exact(P);
    std::vector<OldClass> out;
    for (unsigned mask = 0; mask < (1u << primes.size()); ++mask) {
        OldClass oc;
        for (std::size_t i = 0; i < primes.size(); ++i) oc.sigma[primes[i]] = (mask >> i) & 1u ? -1 : 1;
        QSeries<mpq_class> acc = QSeries<mpq_class>::zero(P, g.weight(), N);
        for (long d : ds) {
            int s = 1;
            for (long p : prime_divisors(d)) s *= oc.sigma[p];
            oc.weights[d] = s;
            auto b = op_B(base, d, g.weight()).truncate(P);
            b.set_level(N);
            acc = acc + scale(b, mpq_class(s));
        }
        oc.series = acc;
        out.push_back(std::move(oc));
    }
    return out;
}

inline long star(long d1, long d2) {
    long g = gcd(d1, d2);
    return d1 / g * (d2 / g);
}

// formal W_p on the span of {g|B_d}: g|B_d -> g|B_{d*p}
inline std::map<long, int> formal_W(const std::map<long, int>& v, long p) {
    std::map<long, int> out;
    for (auto& [d, c] : v) out[star(d, p)] += c;
    return out;
}

}  // namespace skl
