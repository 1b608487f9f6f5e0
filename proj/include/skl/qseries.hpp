#pragma once
// Truncated q-expansions with explicit precision, weight and level tags.

#include <gmpxx.h>

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "real.hpp"

namespace skl {

template <class T>
struct scalar_traits;

template <>
struct scalar_traits<mpz_class> {
    static constexpr bool exact = true;
    static mpz_class from_z(const mpz_class& z) { return z; }
    static bool is_zero(const mpz_class& x) { return x == 0; }
};
template <>
struct scalar_traits<mpq_class> {
    static constexpr bool exact = true;
    static mpq_class from_z(const mpz_class& z) { return mpq_class(z); }
    static bool is_zero(const mpq_class& x) { return x == 0; }
};
template <>
struct scalar_traits<Real> {
    static constexpr bool exact = false;
    static Real from_z(const mpz_class& z) { return to_real(z); }
    static bool is_zero(const Real& x) { return x == 0; }
};

template <class T>
class QSeries {
public:
    QSeries() = default;

    // data may be longer than prec; entries at or beyond prec are never read
    QSeries(std::vector<T> data, long prec, mpq_class weight = 0, long level = 1)
        : data_(std::move(data)), prec_(prec), weight_(std::move(weight)), level_(level) {
        require(prec_ >= 0, "QSeries: negative precision");
        require(static_cast<long>(data_.size()) >= prec_, "QSeries: fewer coefficients than precision");
        require(level_ >= 1, "QSeries: level must be positive");
    }

    static QSeries zero(long prec, mpq_class weight = 0, long level = 1) {
        return QSeries(std::vector<T>(prec, T(0)), prec, std::move(weight), level);
    }
    static QSeries one(long prec) {
        auto s = zero(prec);
        if (prec > 0) s.data_[0] = T(1);
        return s;
    }

    long prec() const { return prec_; }
    const mpq_class& weight() const { return weight_; }
    long level() const { return level_; }
    void set_weight(mpq_class w) { weight_ = std::move(w); }
    void set_level(long N) { level_ = N; }

    const T& at(long n) const {
        if (n < 0 || n >= prec_)
            throw PrecisionError("coefficient q^" + std::to_string(n) + " beyond precision " + std::to_string(prec_));
        return data_[n];
    }
    T& at(long n) {
        if (n < 0 || n >= prec_)
            throw PrecisionError("coefficient q^" + std::to_string(n) + " beyond precision " + std::to_string(prec_));
        return data_[n];
    }
    T operator[](long n) const { return at(n); }

    // first index with a nonzero coefficient, or prec if none is known
    long valuation() const {
        for (long i = 0; i < prec_; ++i)
            if (!scalar_traits<T>::is_zero(data_[i])) return i;
        return prec_;
    }

    std::vector<T> coeffs() const { return std::vector<T>(data_.begin(), data_.begin() + prec_); }

    QSeries truncate(long P) const {
        require(P <= prec_, "truncate: cannot extend precision");
        return QSeries(std::vector<T>(data_.begin(), data_.begin() + P), P, weight_, level_);
    }

private:
    std::vector<T> data_;
    long prec_ = 0;
    mpq_class weight_ = 0;
    long level_ = 1;
};

namespace detail {
template <class T>
void check_sum_tags(const QSeries<T>& a, const QSeries<T>& b) {
    if (a.weight() != b.weight()) throw DomainError("series sum: weight mismatch");
    if (a.level() != b.level()) throw DomainError("series sum: level mismatch");
}
}  // namespace detail

template <class T>
QSeries<T> operator+(const QSeries<T>& a, const QSeries<T>& b) {
    detail::check_sum_tags(a, b);
    long P = std::min(a.prec(), b.prec());
    std::vector<T> c(P);
    for (long i = 0; i < P; ++i) c[i] = a.at(i) + b.at(i);
    return QSeries<T>(std::move(c), P, a.weight(), a.level());
}

template <class T>
QSeries<T> operator-(const QSeries<T>& a, const QSeries<T>& b) {
    detail::check_sum_tags(a, b);
    long P = std::min(a.prec(), b.prec());
    std::vector<T> c(P);
    for (long i = 0; i < P; ++i) c[i] = a.at(i) - b.at(i);
    return QSeries<T>(std::move(c), P, a.weight(), a.level());
}

template <class T>
QSeries<T> scale(const QSeries<T>& a, const T& s) {
    std::vector<T> c(a.prec());
    for (long i = 0; i < a.prec(); ++i) c[i] = a.at(i) * s;
    return QSeries<T>(std::move(c), a.prec(), a.weight(), a.level());
}

template <class T>
QSeries<T> series_mul(const QSeries<T>& a, const QSeries<T>& b) {
    if (a.prec() == 0 || b.prec() == 0) throw PrecisionError("series_mul: operand with precision 0");
    long va = a.valuation(), vb = b.valuation();
    long P = std::min(a.prec() + vb, b.prec() + va);
    std::vector<T> c(P, T(0));
    for (long i = va; i < std::min(a.prec(), P); ++i) {
        const T& ai = a.at(i);
        if (scalar_traits<T>::is_zero(ai)) continue;
        long jmax = std::min(b.prec(), P - i);
        for (long j = vb; j < jmax; ++j) c[i + j] += ai * b.at(j);
    }
    return QSeries<T>(std::move(c), P, a.weight() + b.weight(), lcm(a.level(), b.level()));
}

template <class T>
QSeries<T> operator*(const QSeries<T>& a, const QSeries<T>& b) {
    return series_mul(a, b);
}

template <class T>
QSeries<T> series_pow(const QSeries<T>& a, unsigned e, long prec) {
    QSeries<T> r = QSeries<T>::one(prec);
    r.set_level(a.level());
    QSeries<T> base = a.truncate(std::min(prec, a.prec()));
    while (e) {
        if (e & 1u) r = series_mul(r, base);
        e >>= 1u;
        if (e) base = series_mul(base, base);
    }
    return r;
}

// 1/a for a with a(0) invertible
template <class T>
QSeries<T> series_inverse(const QSeries<T>& a) {
    static_assert(!std::is_same_v<T, mpz_class>, "series_inverse needs a field");
    if (a.prec() == 0) throw PrecisionError("series_inverse: precision 0");
    if (scalar_traits<T>::is_zero(a.at(0))) throw DomainError("series_inverse: constant term is zero");
    long P = a.prec();
    std::vector<T> c(P, T(0));
    T inv0 = T(1) / a.at(0);
    c[0] = inv0;
    for (long n = 1; n < P; ++n) {
        T s(0);
        for (long i = 1; i <= n; ++i) s += a.at(i) * c[n - i];
        c[n] = -s * inv0;
    }
    return QSeries<T>(std::move(c), P, -a.weight(), a.level());
}

template <class T>
QSeries<T> series_div(const QSeries<T>& a, const QSeries<T>& b) {
    return series_mul(a, series_inverse(b));
}

// coefficient n of the output is coefficient d*n of the input
template <class T>
QSeries<T> op_U(const QSeries<T>& a, long d) {
    require(d >= 1, "op_U: d >= 1");
    long P = a.prec() == 0 ? 0 : (a.prec() - 1) / d + 1;
    std::vector<T> c(P);
    for (long n = 0; n < P; ++n) c[n] = a.at(d * n);
    return QSeries<T>(std::move(c), P, a.weight(), a.level());
}

// f -> d^{w/2} f(d tau), w even
template <class T>
QSeries<T> op_B(const QSeries<T>& a, long d, long w) {
    require(d >= 1, "op_B: d >= 1");
    if (w % 2 != 0) throw DomainError("op_B: odd weight would need an irrational scalar");
    T s = scalar_traits<T>::from_z(ipow(d, w / 2));
    long P = a.prec() * d;
    std::vector<T> c(P, T(0));
    for (long n = 0; n < a.prec(); ++n) c[d * n] = a.at(n) * s;
    return QSeries<T>(std::move(c), P, a.weight(), a.level() * d);
}

// classical T(n), gcd(n, N) = 1: out(m) = sum_{d | (m,n)} d^{w-1} in(mn/d^2)
template <class T>
QSeries<T> op_T(const QSeries<T>& a, long n, long w, long N) {
    require(n >= 1, "op_T: n >= 1");
    if (gcd(n, N) != 1) throw DomainError("op_T: index not coprime to level");
    long P = a.prec() == 0 ? 0 : (a.prec() - 1) / n + 1;
    std::vector<T> c(P, T(0));
    auto dn = divisors(n);
    std::vector<T> dpow;
    for (long d : dn) dpow.push_back(scalar_traits<T>::from_z(ipow(d, w - 1)));
    for (long m = 0; m < P; ++m) {
        T s(0);
        for (std::size_t i = 0; i < dn.size(); ++i) {
            long d = dn[i];
            if (m % d != 0) continue;
            s += dpow[i] * a.at(m * n / (d * d));
        }
        c[m] = s;
    }
    return QSeries<T>(std::move(c), P, a.weight(), a.level());
}

template <class To, class From>
QSeries<To> convert_series(const QSeries<From>& a) {
    std::vector<To> c(a.prec());
    for (long i = 0; i < a.prec(); ++i) {
        if constexpr (std::is_same_v<To, Real>)
            c[i] = to_real(a.at(i));
        else
            c[i] = To(a.at(i));
    }
    return QSeries<To>(std::move(c), a.prec(), a.weight(), a.level());
}

inline QSeries<Real> to_real(const QSeries<mpq_class>& a) { return convert_series<Real>(a); }

}  // namespace skl
