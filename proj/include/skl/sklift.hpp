#pragma once
// Saito-Kurokawa lift: Maass coefficients, diagonal pullback, Hecke equivariance on the diagonal.

#include <string>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "jacobi.hpp"
#include "kohnen.hpp"

namespace skl {

struct QuadIndex {
    long n, r, m;
    QuadIndex(long n_, long r_, long m_) : n(n_), r(r_), m(m_) {
        if (n <= 0 || m <= 0 || 4 * n * m - r * r <= 0) throw DomainError("QuadIndex: not positive definite");
    }
    long content() const { return gcd(gcd(n, std::labs(r)), m); }
    long disc() const { return 4 * n * m - r * r; }
};

template <class T>
class SKLift {
public:
    SKLift(HalfIntForm<T> h, long N) : h_(std::move(h)), N_(N) {
        require(h_.level() == 4 * N_, "SKLift: h must have level 4N");
        require(h_.k() % 2 == 1, "SKLift: k must be odd");
    }

    const HalfIntForm<T>& h() const { return h_; }
    long level() const { return N_; }
    long k() const { return h_.k(); }
    long weight() const { return h_.k() + 1; }

    // a_F(T) = sum_{d | c(T), (d, N) = 1} d^k c_h(D / d^2)
    T maass_coeff(const QuadIndex& t) const {
        T s(0);
        long D = t.disc();
        for (long d : divisors(t.content())) {
            if (gcd(d, N_) != 1) continue;
            s += scalar_traits<T>::from_z(ipow(d, k())) * h_.c(D / (d * d));
        }
        return s;
    }

    // a_{F°}(n, m) = sum_{r^2 < 4nm} a_F(n, r, m)
    T pullback_coeff(long n, long m) const {
        require(n >= 1 && m >= 1, "pullback_coeff: n, m >= 1");
        T s(0);
        long bound = 4 * n * m;
        for (long r = -isqrt(bound - 1); r * r < bound; ++r) s += maass_coeff(QuadIndex(n, r, m));
        return s;
    }

    std::vector<std::vector<T>> pullback_grid(long nmax, long mmax) const {
        std::vector<std::vector<T>> out(nmax + 1, std::vector<T>(mmax + 1, T(0)));
        for (long n = 1; n <= nmax; ++n)
            for (long m = 1; m <= mmax; ++m) out[n][m] = pullback_coeff(n, m);
        return out;
    }

    // U_S(p) eigenvalue for p | N equals the U(p^2) eigenvalue of h
    T lambda_F(long p) const {
        require(N_ % p == 0, "lambda_F: p must divide N");
        return eigen_ratio(h_, kohnen_T_p2(h_, p, N_)).value;
    }

private:
    HalfIntForm<T> h_;
    long N_;
};

struct EquivarianceReport {
    long q;
    long bound;
    long checked = 0;
    bool pass = true;
    std::string first_failure;
};

// (T(q) x id) F° = (id x T(q)) F° on indices n, m <= bound
template <class T>
EquivarianceReport hecke_equivariance_check(const SKLift<T>& F, long q, long bound, Real tol = Real(0)) {
    if (F.level() % q == 0) throw DomainError("hecke_equivariance_check: q must not divide N");
    require(is_prime(q), "hecke_equivariance_check: q must be prime");
    EquivarianceReport rep{q, bound};
    T qk = scalar_traits<T>::from_z(ipow(q, F.k()));
    for (long n = 1; n <= bound; ++n)
        for (long m = 1; m <= bound; ++m) {
            T left = F.pullback_coeff(q * n, m);
            if (n % q == 0) left += qk * F.pullback_coeff(n / q, m);
            T right = F.pullback_coeff(n, q * m);
            if (m % q == 0) right += qk * F.pullback_coeff(n, m / q);
            ++rep.checked;
            bool ok;
            if constexpr (scalar_traits<T>::exact)
                ok = left == right;
            else
                ok = abs(to_real(T(left - right))) <= tol * (abs(to_real(left)) + 1);
            if (!ok && rep.pass) {
                rep.pass = false;
                rep.first_failure = "(" + std::to_string(n) + "," + std::to_string(m) + ")";
            }
        }
    return rep;
}

}  // namespace skl
