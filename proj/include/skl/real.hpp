#pragma once
// Multiprecision reals (MPFR through Boost.Multiprecision) and a small complex type on top.

#include <gmpxx.h>
#include <mpfr.h>

#include <boost/multiprecision/mpfr.hpp>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace skl {

namespace bmp = boost::multiprecision;
using Real = bmp::number<bmp::mpfr_float_backend<0>, bmp::et_off>;

inline unsigned current_digits() { return Real::default_precision(); }
inline void set_digits(unsigned d) { Real::default_precision(d); }

class DigitsGuard {
public:
    explicit DigitsGuard(unsigned d) : saved_(current_digits()) { set_digits(d); }
    ~DigitsGuard() { set_digits(saved_); }
    DigitsGuard(const DigitsGuard&) = delete;
    DigitsGuard& operator=(const DigitsGuard&) = delete;

private:
    unsigned saved_;
};

inline Real to_real(const mpq_class& q) {
    Real r;
    mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
    return r;
}
inline Real to_real(const mpz_class& z) {
    Real r;
    mpfr_set_z(r.backend().data(), z.get_mpz_t(), MPFR_RNDN);
    return r;
}
inline Real to_real(const Real& r) { return r; }
inline Real to_real(long v) { return Real(v); }

inline Real real_pi() {
    Real r;
    mpfr_const_pi(r.backend().data(), MPFR_RNDN);
    return r;
}

inline Real real_gamma(const Real& x) {
    Real r;
    mpfr_gamma(r.backend().data(), x.backend().data(), MPFR_RNDN);
    return r;
}

inline Real real_lngamma(const Real& x) {
    Real r;
    mpfr_lngamma(r.backend().data(), x.backend().data(), MPFR_RNDN);
    return r;
}

inline Real real_zeta(unsigned long s) {
    Real r;
    mpfr_zeta_ui(r.backend().data(), s, MPFR_RNDN);
    return r;
}

// scientific notation with the given number of digits after the point
inline std::string decimal(const Real& x, int digits) {
    std::ostringstream os;
    os << std::setprecision(digits) << std::scientific << x;
    return os.str();
}

inline Real eps_digits(int d) { return pow(Real(10), -d); }

struct Cx {
    Real re, im;
    Cx() : re(0), im(0) {}
    Cx(const Real& r) : re(r), im(0) {}  // NOLINT
    Cx(long r) : re(r), im(0) {}         // NOLINT
    Cx(const Real& r, const Real& i) : re(r), im(i) {}

    Cx& operator+=(const Cx& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    Cx& operator-=(const Cx& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    Cx& operator*=(const Cx& o) {
        Real r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = r;
        return *this;
    }
    Cx& operator/=(const Cx& o);
};

inline Cx operator+(Cx a, const Cx& b) { return a += b; }
inline Cx operator-(Cx a, const Cx& b) { return a -= b; }
inline Cx operator*(Cx a, const Cx& b) { return a *= b; }
inline Cx operator-(const Cx& a) { return Cx(-a.re, -a.im); }
inline Cx conj(const Cx& a) { return Cx(a.re, -a.im); }
inline Real norm2(const Cx& a) { return a.re * a.re + a.im * a.im; }
inline Real abs(const Cx& a) { return sqrt(norm2(a)); }
inline Cx operator*(const Cx& a, const Real& s) { return Cx(a.re * s, a.im * s); }
inline Cx operator*(const Real& s, const Cx& a) { return Cx(a.re * s, a.im * s); }
inline Cx operator/(const Cx& a, const Real& s) { return Cx(a.re / s, a.im / s); }

inline Cx& Cx::operator/=(const Cx& o) {
    Real d = norm2(o);
    Real r = (re * o.re + im * o.im) / d;
    im = (im * o.re - re * o.im) / d;
    re = r;
    return *this;
}
inline Cx operator/(Cx a, const Cx& b) { return a /= b; }

inline Cx cexp(const Cx& z) {
    Real m = exp(z.re);
    return Cx(m * cos(z.im), m * sin(z.im));
}
inline Cx clog(const Cx& z) { return Cx(log(abs(z)), atan2(z.im, z.re)); }
inline Cx csqrt(const Cx& z) {
    Real r = abs(z);
    if (r == 0) return Cx();
    Real a = sqrt((r + abs(z.re)) / 2);
    if (z.re >= 0) return Cx(a, z.im / (2 * a));
    Real b = z.im >= 0 ? a : Real(-a);
    return Cx(abs(z.im) / (2 * a), b);
}
inline Cx csin(const Cx& z) { return Cx(sin(z.re) * cosh(z.im), cos(z.re) * sinh(z.im)); }
// b^z for real b > 0
inline Cx cpow(const Real& b, const Cx& z) { return cexp(z * log(b)); }
inline Cx cpow(const Cx& b, const Cx& z) { return cexp(z * clog(b)); }
inline Cx expi(const Real& t) { return Cx(cos(t), sin(t)); }
inline std::ostream& operator<<(std::ostream& os, const Cx& z) { return os << "(" << z.re << ", " << z.im << ")"; }

// B_0..B_n, exact (Akiyama-Tanigawa)
inline const std::vector<mpq_class>& bernoulli_table(std::size_t n) {
    static std::vector<mpq_class> tab;
    if (tab.size() > n) return tab;
    std::vector<mpq_class> a(n + 1);
    std::vector<mpq_class> out(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        a[m] = mpq_class(1, m + 1);
        for (std::size_t j = m; j >= 1; --j) {
            a[j - 1] = mpq_class(static_cast<long>(j)) * (a[j - 1] - a[j]);
            a[j - 1].canonicalize();
        }
        out[m] = a[0];
    }
    // the algorithm yields B_1 = +1/2
    if (n >= 1) out[1] = mpq_class(-1, 2);
    tab = std::move(out);
    return tab;
}

// Gamma(z) on the complex plane away from poles
inline Cx cgamma(const Cx& z) {
    const Real pi = real_pi();
    if (z.re < Real(0.5)) {
        // reflection
        Cx s = csin(Cx(pi * z.re, pi * z.im));
        return Cx(pi) / (s * cgamma(Cx(1 - z.re, -z.im)));
    }
    const unsigned d = current_digits();
    const Real R = Real(static_cast<long>(d)) * Real(1.1) + 12;
    Cx w = z;
    Cx prod(1);
    while (w.re < R) {
        prod *= w;
        w.re += 1;
    }
    // Stirling at w
    Cx lw = clog(w);
    Cx s = (w - Cx(Real(0.5))) * lw - w + Cx(log(2 * pi) / 2);
    const Real tol = eps_digits(static_cast<int>(d) + 8);
    const auto& B = bernoulli_table(2 * (d + 40));
    Cx winv = Cx(1) / w;
    Cx w2inv = winv * winv;
    Cx pw = winv;
    for (std::size_t m = 1; 2 * m < B.size(); ++m) {
        Real coef = to_real(B[2 * m]) / Real(static_cast<long>((2 * m) * (2 * m - 1)));
        Cx term = pw * coef;
        s += term;
        if (abs(term) < tol) break;
        pw *= w2inv;
    }
    return cexp(s) / prod;
}

// Gamma_C(s) = 2 (2 pi)^{-s} Gamma(s), Gamma_R(s) = pi^{-s/2} Gamma(s/2)
inline Cx gamma_C(const Cx& s) { return Cx(Real(2)) * cpow(2 * real_pi(), -s) * cgamma(s); }
inline Cx gamma_R(const Cx& s) { return cpow(real_pi(), Cx(-s.re / 2, -s.im / 2)) * cgamma(Cx(s.re / 2, s.im / 2)); }

}  // namespace skl
