#pragma once
// Index-one Jacobi forms read off a plus-space form: c_phi(n, r) = c_h(4n - r^2).

#include <map>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "kohnen.hpp"
#include "qseries.hpp"

namespace skl {

template <class T>
class JacobiForm {
public:
    JacobiForm(HalfIntForm<T> h, long N) : h_(std::move(h)), N_(N) {
        require(h_.level() == 4 * N_, "JacobiForm: h must have level 4N");
    }

    const HalfIntForm<T>& h() const { return h_; }
    long level() const { return N_; }
    long k() const { return h_.k(); }
    long weight() const { return h_.k() + 1; }

    const T& c(long n, long r) const {
        long D = 4 * n - r * r;
        if (D <= 0) throw DomainError("JacobiForm::c: need 4n - r^2 > 0");
        return h_.c(D);
    }

    // largest n with every c(n, r) readable
    long nmax() const { return (h_.dmax() - 1) / 4; }

private:
    HalfIntForm<T> h_;
    long N_;
};

struct ThetaComponents {
    // h0(tau) = sum c(4n) q^n ; h1(tau) = sum c(4n - 1) q^{n - 1/4}, stored by n
    template <class T>
    static std::pair<std::vector<T>, std::vector<T>> split(const HalfIntForm<T>& h) {
        std::vector<T> h0, h1;
        for (long n = 0; 4 * n < h.dmax(); ++n) h0.push_back(h.c(4 * n));
        for (long n = 1; 4 * n - 1 < h.dmax(); ++n) h1.push_back(h.c(4 * n - 1));
        h1.insert(h1.begin(), T(0));  // index 0 unused
        return {h0, h1};
    }
};

// coefficient of q^n zeta^r in h0 theta0(tau, z) + h1 theta1(tau, z)
template <class T>
T theta_reconstruct(const std::vector<T>& h0, const std::vector<T>& h1, long n, long r) {
    long r2 = r * r;
    if (r % 2 == 0) {
        long j = n - r2 / 4;
        if (j < 0) return T(0);
        if (j >= static_cast<long>(h0.size())) throw PrecisionError("theta_reconstruct: h0 too short");
        return h0[j];
    }
    long j = n - (r2 - 1) / 4;
    if (j < 1) return T(0);
    if (j >= static_cast<long>(h1.size())) throw PrecisionError("theta_reconstruct: h1 too short");
    return h1[j];
}

// (phi | V_m)(n, r) = sum_{a | (n, r, m), (a, N) = 1} a^k c(nm/a^2, r/a)   (weight k + 1)
template <class T>
T op_Vm_coeff(const JacobiForm<T>& phi, long m, long n, long r) {
    require(m >= 1, "op_Vm: m >= 1");
    long g = gcd(gcd(n, std::labs(r)), m);
    T s(0);
    for (long a : divisors(g)) {
        if (gcd(a, phi.level()) != 1) continue;
        s += scalar_traits<T>::from_z(ipow(a, phi.k())) * phi.c(n * m / (a * a), r / a);
    }
    return s;
}

// D0: coefficient n is sum_{r^2 < 4n} c(n, r)
template <class T>
QSeries<T> D0(const JacobiForm<T>& phi, long P) {
    require(P - 1 <= phi.nmax(), "D0: plus-space precision too small");
    std::vector<T> out(P, T(0));
    for (long n = 1; n < P; ++n) {
        T s(0);
        for (long r = -isqrt(4 * n - 1); r * r < 4 * n; ++r) s += phi.c(n, r);
        out[n] = s;
    }
    return QSeries<T>(std::move(out), P, phi.weight(), phi.level());
}

// D2: coefficient n is sum_{r^2 < 4n} ((k + 1) r^2 - 2n) c(n, r), lands in weight k + 3
template <class T>
QSeries<T> D2(const JacobiForm<T>& phi, long P) {
    require(P - 1 <= phi.nmax(), "D2: plus-space precision too small");
    std::vector<T> out(P, T(0));
    for (long n = 1; n < P; ++n) {
        T s(0);
        for (long r = -isqrt(4 * n - 1); r * r < 4 * n; ++r) s += T(phi.weight() * r * r - 2 * n) * phi.c(n, r);
        out[n] = s;
    }
    return QSeries<T>(std::move(out), P, phi.weight() + 2, phi.level());
}

// split m = d m1 with d | N^infinity and (m1, N) = 1
inline std::pair<long, long> split_level_part(long m, long N) {
    long d = 1, m1 = m;
    for (long p : prime_divisors(N))
        while (m1 % p == 0) {
            m1 /= p;
            d *= p;
        }
    return {d, m1};
}

// coefficient of q^n in phi(tau, 0) | U(d) T(m1), the m-th Fourier-Jacobi coefficient restricted to z = 0
template <class T>
T fj_pullback_coeff(const JacobiForm<T>& phi, long n, long m) {
    require(n >= 1 && m >= 1, "fj_pullback_coeff: n, m >= 1");
    auto [d, m1] = split_level_part(m, phi.level());
    long P = n * m + 1;
    auto s = D0(phi, P);
    auto u = op_U(s, d);
    auto t = op_T(u, m1, phi.weight(), phi.level());
    return t.at(n);
}

// the same for a whole grid, sharing one D0 expansion
template <class T>
std::vector<std::vector<T>> fj_pullback_grid(const JacobiForm<T>& phi, long nmax, long mmax) {
    auto s = D0(phi, nmax * mmax + 1);
    std::vector<std::vector<T>> out(nmax + 1, std::vector<T>(mmax + 1, T(0)));
    for (long m = 1; m <= mmax; ++m) {
        auto [d, m1] = split_level_part(m, phi.level());
        auto t = op_T(op_U(s, d), m1, phi.weight(), phi.level());
        for (long n = 1; n <= nmax; ++n) out[n][m] = t.at(n);
    }
    return out;
}

}  // namespace skl
