#pragma once
// Deciding whether the pullback of a lift vanishes, by three independent routes.

#include <gmpxx.h>

#include <sstream>
#include <string>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "jacobi.hpp"
#include "kohnen.hpp"
#include "qseries.hpp"
#include "real.hpp"

namespace skl {

namespace detail {

template <class T>
Real magnitude(const T& x) {
    if constexpr (std::is_same_v<T, Real>)
        return abs(x);
    else
        return abs(to_real(x));
}

// exact types compare with zero; reals relative to the largest coefficient seen
template <class T>
struct ZeroTest {
    Real cut = 0;
    template <class It>
    ZeroTest(It begin, It end) {
        if constexpr (!scalar_traits<T>::exact) {
            Real scale = 0;
            for (auto it = begin; it != end; ++it) {
                Real m = magnitude(*it);
                if (m > scale) scale = m;
            }
            cut = scale * eps_digits(static_cast<int>(current_digits()) - 10);
        }
    }
    bool operator()(const T& x) const {
        if constexpr (scalar_traits<T>::exact)
            return scalar_traits<T>::is_zero(x);
        else
            return magnitude(x) <= cut;
    }
};

template <class T>
QSeries<T> theta_as(const QSeries<mpz_class>& t) {
    if constexpr (std::is_same_v<T, Real>)
        return convert_series<Real>(t);
    else
        return convert_series<T>(t);
}

}  // namespace detail

inline long sturm_window(long k, long N) {
    require(k >= 1 && N >= 1, "sturm_window: k, N >= 1");
    return (k * index_sl2(N) + 7) / 8;
}

struct OracleVerdict {
    std::string name;
    bool nonvanishing = false;
    long first_nonzero = -1;  // index in that oracle's own series
};

struct NonvanishReport {
    long k = 0, N = 1;
    long K = 0;        // ceil(k [SL2 : Gamma0(N)] / 8)
    long window = 0;   // m scanned up to 2K
    bool nonvanishing = false;
    long witness = -1;  // first n = 4m with a_H(n) != 0
    bool witness_beyond_K = false;
    std::vector<OracleVerdict> oracles;
    bool unanimous = true;

    std::string verdict() const { return nonvanishing ? "nonvanishes" : "vanishes"; }
};

// largest D needed from h for a full scan
inline long required_dmax(long k, long N) { return 8 * sturm_window(k, N) + 1; }

// H = h theta0, scan a_H(4m) for m <= 2K
template <class T>
NonvanishReport h_even_scan(const HalfIntForm<T>& h, long N, long k) {
    NonvanishReport r;
    r.k = k;
    r.N = N;
    r.K = sturm_window(k, N);
    r.window = 2 * r.K;
    long P = 4 * r.window + 1;
    if (h.dmax() < P)
        throw PrecisionError("h_even_scan: need c_h(D) for D <= " + std::to_string(P - 1) + ", have " +
                             std::to_string(h.dmax() - 1));
    QSeries<T> hs(std::vector<T>(h.coeffs().begin(), h.coeffs().begin() + P), P, mpq_class(2 * k + 1, 2), h.level());
    auto H = series_mul(hs, detail::theta_as<T>(theta_pair(P).theta0));
    auto c = H.coeffs();
    detail::ZeroTest<T> zero(c.begin(), c.end());
    OracleVerdict o{"theta0_even_scan", false, -1};
    for (long n = 2; n < P; n += 2) {
        if (zero(c[n])) continue;
        if (n % 4 != 0) throw ComputationError("h_even_scan: a_H(n) != 0 at n = 2 mod 4; h is not in the plus space");
        o.nonvanishing = true;
        o.first_nonzero = n;
        break;
    }
    r.nonvanishing = o.nonvanishing;
    r.witness = o.first_nonzero;
    r.witness_beyond_K = o.nonvanishing && o.first_nonzero / 4 > r.K;
    r.oracles.push_back(o);
    return r;
}

struct CorollaryFlags {
    long leading_index = -1;
    bool leading_even = false;         // h = c q^{4m} + O(q^{4m+3})
    bool two_c_plus_d = false;         // h = c q^{4m-1} + d q^{4m} + ..., 2c + d != 0
    bool odd_support = false;          // every nonzero c(D) in range has D odd
    bool any() const { return leading_even || two_c_plus_d || odd_support; }
};

template <class T>
CorollaryFlags corollary_conditions(const HalfIntForm<T>& h) {
    CorollaryFlags f;
    auto& c = h.coeffs();
    detail::ZeroTest<T> zero(c.begin(), c.end());
    for (long D = 0; D < h.dmax(); ++D)
        if (!zero(c[D])) {
            f.leading_index = D;
            break;
        }
    if (f.leading_index < 0) return f;
    long L = f.leading_index;
    f.leading_even = L % 4 == 0;
    if (L % 4 == 3 && L + 1 < h.dmax()) f.two_c_plus_d = !zero(T(2) * c[L] + c[L + 1]);
    f.odd_support = true;
    for (long D = 0; D < h.dmax(); ++D)
        if (D % 2 == 0 && !zero(c[D])) f.odd_support = false;
    return f;
}

// H1 = h / theta1; kernel iff a_{H1}(n) = 0 for every n != 3 mod 4 in the window
template <class T>
OracleVerdict theta1_quotient_test(const HalfIntForm<T>& h, long P) {
    if (h.dmax() < P) throw PrecisionError("theta1_quotient_test: window exceeds the precision of h");
    using F = std::conditional_t<std::is_same_v<T, mpz_class>, mpq_class, T>;
    std::vector<F> hc(P);
    for (long D = 0; D < P; ++D) hc[D] = F(h.c(D));
    QSeries<F> hs(std::move(hc), P, mpq_class(2 * h.k() + 1, 2), h.level());
    auto H1 = series_div(hs, detail::theta_as<F>(theta_pair(P).theta1));
    auto c = H1.coeffs();
    detail::ZeroTest<F> zero(c.begin(), c.end());
    OracleVerdict o{"theta1_quotient", false, -1};
    for (long n = 0; n < P; ++n) {
        if (n % 4 == 3 || zero(c[n])) continue;
        o.nonvanishing = true;
        o.first_nonzero = n;
        break;
    }
    return o;
}

// D0(phi) coefficients n <= M straight from the Jacobi form
template <class T>
OracleVerdict d0_direct_scan(const HalfIntForm<T>& h, long N, long M) {
    JacobiForm<T> phi(h, N);
    auto s = D0(phi, M + 1);
    auto c = s.coeffs();
    detail::ZeroTest<T> zero(h.coeffs().begin(), h.coeffs().end());
    OracleVerdict o{"d0_direct", false, -1};
    for (long n = 1; n <= M; ++n)
        if (!zero(c[n])) {
            o.nonvanishing = true;
            o.first_nonzero = n;
            break;
        }
    return o;
}

// all three oracles on matched windows; disagreement is a hard failure
template <class T>
NonvanishReport kernel_equivalence(const HalfIntForm<T>& h, long N, long k) {
    auto r = h_even_scan(h, N, k);
    long P = 4 * r.window + 1;
    r.oracles.push_back(theta1_quotient_test(h, P));
    r.oracles.push_back(d0_direct_scan(h, N, r.window));
    for (auto& o : r.oracles) r.unanimous = r.unanimous && o.nonvanishing == r.nonvanishing;
    if (!r.unanimous) {
        std::ostringstream os;
        os << "kernel_equivalence: oracles disagree for k = " << k << ", N = " << N << ":";
        for (auto& o : r.oracles) os << " " << o.name << "=" << (o.nonvanishing ? "nonzero" : "zero") << "@" << o.first_nonzero;
        throw ComputationError(os.str());
    }
    return r;
}

}  // namespace skl
