#pragma once
// Elementary number theory on machine integers, exact outputs.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace skl {

inline long gcd(long a, long b) { return std::gcd(a, b); }
inline long lcm(long a, long b) { return a / gcd(a, b) * b; }

// prime -> exponent
inline std::map<long, int> factor(long n) {
    require(n >= 1, "factor: n must be positive");
    std::map<long, int> f;
    for (long p = 2; p * p <= n; ++p) {
        while (n % p == 0) {
            ++f[p];
            n /= p;
        }
    }
    if (n > 1) ++f[n];
    return f;
}

inline std::vector<long> prime_divisors(long n) {
    std::vector<long> out;
    for (auto& [p, e] : factor(n)) out.push_back(p);
    return out;
}

inline bool is_prime(long n) {
    if (n < 2) return false;
    for (long p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

inline std::vector<long> primes_upto(long n) {
    std::vector<long> out;
    if (n < 2) return out;
    std::vector<char> sieve(n + 1, 1);
    for (long i = 2; i <= n; ++i) {
        if (!sieve[i]) continue;
        out.push_back(i);
        for (long j = i * i; j <= n; j += i) sieve[j] = 0;
    }
    return out;
}

// smallest prime factor table for 0..n
inline std::vector<long> spf_table(long n) {
    std::vector<long> s(n + 1, 0);
    for (long i = 2; i <= n; ++i) {
        if (s[i]) continue;
        for (long j = i; j <= n; j += i)
            if (!s[j]) s[j] = i;
    }
    return s;
}

inline std::vector<long> divisors(long n) {
    std::vector<long> d{1};
    for (auto& [p, e] : factor(n)) {
        std::size_t cur = d.size();
        long pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < cur; ++j) d.push_back(d[j] * pk);
        }
    }
    std::sort(d.begin(), d.end());
    return d;
}

inline bool is_squarefree(long n) {
    for (auto& [p, e] : factor(n))
        if (e > 1) return false;
    return true;
}

inline int mobius(long n) {
    int s = 1;
    for (auto& [p, e] : factor(n)) {
        if (e > 1) return 0;
        s = -s;
    }
    return s;
}

inline int omega(long n) { return static_cast<int>(factor(n).size()); }

inline long euler_phi(long n) {
    long r = n;
    for (auto& [p, e] : factor(n)) r = r / p * (p - 1);
    return r;
}

inline mpz_class ipow(long b, unsigned long e) {
    mpz_class r;
    mpz_class base(b);
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

// a / b in lowest terms
inline mpq_class frac(const mpz_class& a, const mpz_class& b) {
    mpq_class q(a, b);
    q.canonicalize();
    return q;
}

inline mpq_class qpow(const mpq_class& b, long e) {
    mpq_class r(1);
    mpq_class x = e >= 0 ? b : mpq_class(1) / b;
    for (long i = 0; i < std::labs(e); ++i) r *= x;
    return r;
}

inline mpz_class sigma(int k, long n) {
    mpz_class s = 0;
    for (long d : divisors(n)) s += ipow(d, k);
    return s;
}

// [SL2(Z) : Gamma0(N)]
inline long index_sl2(long N) {
    require(N >= 1, "index_sl2: N >= 1");
    long r = N;
    for (long p : prime_divisors(N)) r = r / p * (p + 1);
    return r;
}

// [Gamma0^(2)(M) : Gamma0^(2)(N)] for square-free N, M | N
inline long index_sp4(long N, long M = 1) {
    require(N >= 1 && M >= 1 && N % M == 0, "index_sp4: need M | N");
    require(is_squarefree(N), "index_sp4: N must be square-free");
    long r = 1;
    for (long p : prime_divisors(N / M)) r *= (p + 1) * (p * p + 1);
    return r;
}

// zeta_(N)(s) = prod_{p|N} (1 - p^-s)^-1
inline mpq_class zeta_partial(long N, int s) {
    mpq_class r(1);
    for (long p : prime_divisors(N)) {
        mpq_class ps(ipow(p, s));
        r *= ps / (ps - 1);
    }
    return r;
}

// zeta^(N)(s) / zeta(s) = prod_{p|N} (1 - p^-s)
inline mpq_class zeta_removed_factor(long N, int s) { return 1 / zeta_partial(N, s); }

inline long mod(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

// x, y, g with a x + b y = g
inline void ext_gcd(long a, long b, long& x, long& y, long& g) {
    long x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        long q = a / b;
        long t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
        t = y0 - q * y1;
        y0 = y1;
        y1 = t;
    }
    x = x0;
    y = y0;
    g = a;
    if (g < 0) {
        g = -g;
        x = -x;
        y = -y;
    }
}

inline long modinv(long a, long m) {
    require(m >= 1, "modinv: modulus must be positive");
    if (m == 1) return 0;
    long x, y, g;
    ext_gcd(mod(a, m), m, x, y, g);
    if (g != 1) throw DomainError("modinv: not invertible");
    return mod(x, m);
}

// x = r_i mod m_i, pairwise coprime moduli
inline long crt(const std::vector<long>& r, const std::vector<long>& m) {
    long x = 0, M = 1;
    for (std::size_t i = 0; i < r.size(); ++i) {
        long t = mod((r[i] - x) % m[i] * modinv(M % m[i], m[i]), m[i]);
        x += M * t;
        M *= m[i];
        x = mod(x, M);
    }
    return x;
}

// Kronecker symbol (a/p) for p prime (p = 2 uses the Kronecker convention)
inline int kronecker_prime(long a, long p) {
    if (p == 2) {
        if (a % 2 == 0) return 0;
        long r = mod(a, 8);
        return (r == 1 || r == 7) ? 1 : -1;
    }
    long r = mod(a, p);
    if (r == 0) return 0;
    mpz_class rr(r), pp(p);
    return mpz_legendre(rr.get_mpz_t(), pp.get_mpz_t());
}

inline long isqrt(long n) {
    if (n < 0) return -1;
    long r = static_cast<long>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline bool is_square(long n) {
    long r = isqrt(n);
    return r >= 0 && r * r == n;
}

}  // namespace skl
