#pragma once
// Kohnen plus space of weight k + 1/2 on Gamma0(4), built from theta and a weight-2 Eisenstein series.

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "gl2.hpp"
#include "linalg.hpp"
#include "qseries.hpp"
#include "real.hpp"

namespace skl {

// coefficients c(D), 0 <= D < dmax, of a half-integral weight form of weight k + 1/2 on Gamma0(level)
template <class T>
class HalfIntForm {
public:
    HalfIntForm() = default;
    HalfIntForm(long level, long k, std::vector<T> c) : level_(level), k_(k), c_(std::move(c)) {
        require(level_ % 4 == 0, "HalfIntForm: level must be divisible by 4");
    }

    long level() const { return level_; }
    long k() const { return k_; }
    long dmax() const { return static_cast<long>(c_.size()); }
    const T& c(long D) const {
        if (D < 0 || D >= dmax())
            throw PrecisionError("c(D) beyond precision, D = " + std::to_string(D) + ", dmax = " + std::to_string(dmax()));
        return c_[D];
    }
    const std::vector<T>& coeffs() const { return c_; }

    QSeries<T> series() const { return QSeries<T>(c_, dmax(), mpq_class(2 * k_ + 1, 2), level_); }

    HalfIntForm truncated(long D) const {
        require(D <= dmax(), "truncated: cannot extend");
        return HalfIntForm(level_, k_, std::vector<T>(c_.begin(), c_.begin() + D));
    }

    HalfIntForm scaled(const T& s) const {
        auto c = c_;
        for (auto& x : c) x *= s;
        return HalfIntForm(level_, k_, std::move(c));
    }

    // smallest D with c(D) != 0, or -1
    long first_nonzero() const {
        for (long D = 0; D < dmax(); ++D)
            if (!scalar_traits<T>::is_zero(c_[D])) return D;
        return -1;
    }

    HalfIntForm normalized() const {
        long D = first_nonzero();
        if (D < 0) throw DomainError("normalized: zero form");
        return scaled(T(1) / c_[D]);
    }

private:
    long level_ = 4;
    long k_ = 0;
    std::vector<T> c_;
};

template <class T>
HalfIntForm<T> operator+(const HalfIntForm<T>& a, const HalfIntForm<T>& b) {
    require(a.level() == b.level() && a.k() == b.k(), "HalfIntForm sum: mismatched spaces");
    long D = std::min(a.dmax(), b.dmax());
    std::vector<T> c(D);
    for (long i = 0; i < D; ++i) c[i] = a.c(i) + b.c(i);
    return HalfIntForm<T>(a.level(), a.k(), std::move(c));
}

inline HalfIntForm<Real> to_real(const HalfIntForm<mpq_class>& h) {
    std::vector<Real> c;
    for (auto& x : h.coeffs()) c.push_back(to_real(x));
    return HalfIntForm<Real>(h.level(), h.k(), std::move(c));
}

struct ThetaPair {
    QSeries<mpz_class> theta0, theta1;
};

// theta0 = sum q^{n^2}, theta1 = sum (-1)^n q^{n^2}
inline ThetaPair theta_pair(long P) {
    std::vector<mpz_class> t0(P, 0), t1(P, 0);
    for (long n = 0; n * n < P; ++n) {
        long m = n == 0 ? 1 : 2;
        t0[n * n] += m;
        t1[n * n] += (n % 2 ? -m : m);
    }
    mpq_class half(1, 2);
    return {QSeries<mpz_class>(std::move(t0), P, half, 4), QSeries<mpz_class>(std::move(t1), P, half, 4)};
}

// sum_{n odd} sigma_1(n) q^n, weight 2 on Gamma0(4)
inline QSeries<mpz_class> f2_series(long P) {
    std::vector<mpz_class> c(P, 0);
    for (long d = 1; d < P; d += 2)
        for (long n = d; n < P; n += 2 * d) c[n] += d;
    return QSeries<mpz_class>(std::move(c), P, 2, 4);
}

inline bool plus_support(long D, long k) {
    long r = mod(k % 2 ? -D : D, 4);
    return r == 0 || r == 1;
}

// echelonized basis of S^+_{k+1/2}(4), k odd; each element has c(D) = 1 at its pivot and 0 at the other pivots
inline std::vector<HalfIntForm<mpq_class>> plus_basis_level4(long k, long P) {
    require(k % 2 != 0 && k >= 1, "plus_basis_level4: k must be odd and positive");
    long Pc = std::max(P, 4 * k + 24);
    auto th = theta_pair(Pc).theta0;
    auto F2 = f2_series(Pc);
    long jmax = (2 * k + 1) / 4;
    std::vector<QSeries<mpz_class>> mono;
    auto F2j = QSeries<mpz_class>::one(Pc);
    F2j.set_level(4);
    for (long j = 0; j <= jmax; ++j) {
        auto t = series_pow(th, static_cast<unsigned>(2 * k + 1 - 4 * j), Pc);
        mono.push_back(series_mul(t, F2j).truncate(Pc));
        if (j < jmax) F2j = series_mul(F2j, F2).truncate(Pc);
    }
    std::size_t m = mono.size();
    Mat<mpq_class> cons;
    {
        std::vector<mpq_class> row(m);
        for (std::size_t j = 0; j < m; ++j) row[j] = mono[j].at(0);
        cons.push_back(row);
    }
    for (long n = 1; n < Pc; ++n) {
        if (plus_support(n, k)) continue;
        std::vector<mpq_class> row(m);
        bool nz = false;
        for (std::size_t j = 0; j < m; ++j) {
            row[j] = mono[j].at(n);
            nz = nz || row[j] != 0;
        }
        if (nz) cons.push_back(row);
    }
    auto ker = nullspace(cons, m);
    Mat<mpq_class> vecs;
    for (auto& v : ker) {
        std::vector<mpq_class> c(Pc, 0);
        for (long n = 0; n < Pc; ++n)
            for (std::size_t j = 0; j < m; ++j)
                if (v[j] != 0) c[n] += v[j] * mono[j].at(n);
        vecs.push_back(c);
    }
    if (static_cast<long>(vecs.size()) != dim_cusp_level1(2 * k))
        throw ComputationError("plus_basis_level4: dimension " + std::to_string(vecs.size()) + " differs from dim S_" +
                               std::to_string(2 * k) + "(1)");
    rref(vecs);
    std::vector<HalfIntForm<mpq_class>> out;
    for (auto& v : vecs) {
        v.resize(P);
        out.emplace_back(4, k, std::move(v));
    }
    return out;
}

// Hecke operator T(p^2) on the plus space; p | N uses U(p^2)
template <class T>
HalfIntForm<T> kohnen_T_p2(const HalfIntForm<T>& h, long p, long N = 1) {
    require(is_prime(p), "kohnen_T_p2: p must be prime");
    long k = h.k();
    long p2 = p * p;
    long D = (h.dmax() - 1) / p2 + 1;
    if (h.dmax() == 0) D = 0;
    std::vector<T> c(D, T(0));
    if (N % p == 0) {
        for (long n = 0; n < D; ++n) c[n] = h.c(p2 * n);
        return HalfIntForm<T>(h.level(), k, std::move(c));
    }
    T pk1 = scalar_traits<T>::from_z(ipow(p, k - 1));
    T p2k1 = scalar_traits<T>::from_z(ipow(p, 2 * k - 1));
    for (long n = 0; n < D; ++n) {
        // at p = 2 the operator is defined on plus-space indices only
        if (p == 2 && !plus_support(n, k)) continue;
        T s = h.c(p2 * n);
        int chi = kronecker_prime(k % 2 ? -n : n, p);
        if (chi) s += T(chi) * pk1 * h.c(n);
        if (n % p2 == 0) s += p2k1 * h.c(n / p2);
        c[n] = s;
    }
    return HalfIntForm<T>(h.level(), k, std::move(c));
}

template <class T>
struct EigenRatio {
    T value;
    Real deviation;  // largest |c'(D) - value c(D)| / |c'(D0)| over the window
};

// eigenvalue of an operator image tp against h, read at the first nonzero coefficient
template <class T>
EigenRatio<T> eigen_ratio(const HalfIntForm<T>& h, const HalfIntForm<T>& tp) {
    long D0 = -1;
    for (long D = 0; D < tp.dmax(); ++D)
        if (!scalar_traits<T>::is_zero(h.c(D))) {
            D0 = D;
            break;
        }
    if (D0 < 0) throw PrecisionError("eigen_ratio: no nonzero coefficient inside the window");
    T lam = tp.c(D0) / h.c(D0);
    Real dev = 0;
    Real scale_ = abs(to_real(tp.c(D0)));
    if (scale_ == 0) scale_ = 1;
    for (long D = 0; D < tp.dmax(); ++D) {
        Real diff = abs(to_real(T(tp.c(D) - lam * h.c(D))));
        if (diff / scale_ > dev) dev = diff / scale_;
    }
    return {lam, dev};
}

// Hecke eigenforms of the level-4 plus space via T(p^2), sorted by eigenvalue, normalized
inline std::vector<HalfIntForm<Real>> plus_eigenforms_level4(long k, long P, long p = 3) {
    auto basis = plus_basis_level4(k, P);
    std::size_t d = basis.size();
    std::vector<HalfIntForm<Real>> out;
    if (d == 0) return out;
    std::vector<long> piv;
    for (auto& b : basis) piv.push_back(b.first_nonzero());
    Mat<mpq_class> M = mat_zero<mpq_class>(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        auto t = kohnen_T_p2(basis[j], p);
        for (std::size_t i = 0; i < d; ++i) M[i][j] = t.c(piv[i]);
    }
    for (auto& e : real_eigensystem(M)) {
        std::vector<Real> c(P, Real(0));
        for (std::size_t j = 0; j < d; ++j)
            for (long n = 0; n < P; ++n)
                if (basis[j].c(n) != 0) c[n] += e.vector[j] * to_real(basis[j].c(n));
        out.push_back(HalfIntForm<Real>(4, k, std::move(c)).normalized());
    }
    return out;
}

struct ShimuraRow {
    long p;
    Real hecke_eigenvalue;
    Real expected;
    Real residual;
    bool exact;
};

struct ShimuraReport {
    std::vector<ShimuraRow> rows;
    bool pass = true;
};

// compare the T(p^2) eigenvalue of h with a_f(p) (p unramified) or -w_f(p) p^{k-1} (p | N)
template <class T>
ShimuraReport shimura_match(const HalfIntForm<T>& h, const NewformGL2& f, const std::vector<long>& primes, Real tol) {
    if (f.weight() != 2 * h.k()) throw DomainError("shimura_match: weight of f must be 2k");
    if (h.level() != 4 * f.level()) throw DomainError("shimura_match: level of h must be 4N");
    ShimuraReport rep;
    for (long p : primes) {
        auto t = kohnen_T_p2(h, p, f.level());
        auto er = eigen_ratio(h, t);
        ShimuraRow row;
        row.p = p;
        row.hecke_eigenvalue = to_real(er.value);
        bool ram = f.level() % p == 0;
        row.exact = false;
        if (ram) {
            row.expected = Real(-f.al_sign(p)) * to_real(ipow(p, h.k() - 1));
        } else {
            row.expected = f.a(p);
        }
        if constexpr (std::is_same_v<T, mpq_class>) {
            if (f.exact() || ram) {
                mpq_class e = ram ? mpq_class(-f.al_sign(p) * ipow(p, h.k() - 1)) : mpq_class(f.a_exact(p));
                row.exact = true;
                row.residual = er.value == e ? Real(0) : abs(to_real(mpq_class(er.value - e)));
                rep.pass = rep.pass && er.value == e && er.deviation == 0;
                rep.rows.push_back(row);
                continue;
            }
        }
        row.residual = abs(row.hecke_eigenvalue - row.expected) / (abs(row.expected) + 1);
        rep.pass = rep.pass && row.residual < tol && er.deviation < tol;
        rep.rows.push_back(row);
    }
    return rep;
}

struct LabeledPlusForm {
    std::string label;  // label of the corresponding newform
    HalfIntForm<Real> h;
    std::optional<HalfIntForm<mpq_class>> exact;  // present when the space is one-dimensional
};

// plus-space eigenforms of level 4 paired with the newforms fs of weight 2k through the T(9) eigenvalue
inline std::vector<LabeledPlusForm> level1_plus_eigenforms(long k, long D, const std::vector<NewformGL2>& fs) {
    std::vector<LabeledPlusForm> out;
    if (fs.empty()) return out;
    auto hs = plus_eigenforms_level4(k, D);
    if (hs.size() != fs.size()) throw ComputationError("level1_plus_eigenforms: dimension mismatch");
    for (auto& f : fs) {
        long best = -1;
        Real bd = 0;
        for (std::size_t i = 0; i < hs.size(); ++i) {
            Real d = abs(eigen_ratio(hs[i], kohnen_T_p2(hs[i], 3)).value - f.a(3));
            if (best < 0 || d < bd) {
                best = static_cast<long>(i);
                bd = d;
            }
        }
        if (bd > abs(f.a(3)) * eps_digits(static_cast<int>(current_digits()) / 2))
            throw ComputationError("level1_plus_eigenforms: no plus-space eigenform matches " + f.label());
        LabeledPlusForm lf{f.label(), hs[best], std::nullopt};
        if (fs.size() == 1) lf.exact = plus_basis_level4(k, D)[0].normalized();
        out.push_back(std::move(lf));
    }
    return out;
}

}  // namespace skl
