#pragma once
// Dense linear algebra: exact over Q, and over multiprecision reals.

#include <gmpxx.h>

#include <algorithm>
#include <vector>

#include "errors.hpp"
#include "real.hpp"

namespace skl {

template <class T>
using Mat = std::vector<std::vector<T>>;

template <class T>
Mat<T> mat_zero(std::size_t r, std::size_t c) {
    return Mat<T>(r, std::vector<T>(c, T(0)));
}

template <class T>
Mat<T> mat_mul(const Mat<T>& a, const Mat<T>& b) {
    std::size_t n = a.size(), k = b.size(), m = k ? b[0].size() : 0;
    Mat<T> c = mat_zero<T>(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l)
            for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
    return c;
}

// in-place reduced row echelon form over Q; returns pivot columns
inline std::vector<std::size_t> rref(Mat<mpq_class>& a) {
    std::vector<std::size_t> piv;
    std::size_t rows = a.size();
    if (!rows) return piv;
    std::size_t cols = a[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        mpq_class inv = 1 / a[r][c];
        for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            mpq_class f = a[i][c];
            for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

// basis of {x : a x = 0}
inline std::vector<std::vector<mpq_class>> nullspace(Mat<mpq_class> a, std::size_t cols) {
    std::vector<std::vector<mpq_class>> out;
    if (a.empty()) {
        for (std::size_t j = 0; j < cols; ++j) {
            std::vector<mpq_class> e(cols, 0);
            e[j] = 1;
            out.push_back(e);
        }
        return out;
    }
    auto piv = rref(a);
    std::vector<char> is_piv(cols, 0);
    for (auto c : piv) is_piv[c] = 1;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_piv[f]) continue;
        std::vector<mpq_class> v(cols, 0);
        v[f] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -a[i][f];
        out.push_back(v);
    }
    return out;
}

inline std::size_t rank(Mat<mpq_class> a) { return rref(a).size(); }

// char poly of a square matrix, monic, coefficients c[0..n] with c[n] = 1
inline std::vector<mpq_class> charpoly(const Mat<mpq_class>& a) {
    // Faddeev-LeVerrier
    std::size_t n = a.size();
    std::vector<mpq_class> c(n + 1, 0);
    c[n] = 1;
    Mat<mpq_class> M = mat_zero<mpq_class>(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        // M_k = A M_{k-1} + c_{n-k+1} I
        Mat<mpq_class> AM = mat_mul(a, M);
        for (std::size_t i = 0; i < n; ++i) AM[i][i] += c[n - k + 1];
        M = std::move(AM);
        Mat<mpq_class> AMk = mat_mul(a, M);
        mpq_class tr = 0;
        for (std::size_t i = 0; i < n; ++i) tr += AMk[i][i];
        c[n - k] = -tr / mpq_class(static_cast<long>(k));
    }
    return c;
}

template <class T>
T poly_eval(const std::vector<T>& c, const T& x) {
    T r(0);
    for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
    return r;
}

// all complex roots of a polynomial with real coefficients (Durand-Kerner, then Newton polish)
inline std::vector<Cx> poly_roots(const std::vector<Real>& coef) {
    std::size_t n = coef.size() - 1;
    require(n >= 1 && coef[n] != 0, "poly_roots: need a nonconstant polynomial");
    std::vector<Cx> a(n + 1);
    for (std::size_t i = 0; i <= n; ++i) a[i] = Cx(coef[i] / coef[n]);
    auto eval = [&](const Cx& z) {
        Cx r(0);
        for (std::size_t i = n + 1; i-- > 0;) r = r * z + a[i];
        return r;
    };
    auto deriv = [&](const Cx& z) {
        Cx r(0);
        for (std::size_t i = n; i >= 1; --i) r = r * z + a[i] * Real(static_cast<long>(i));
        return r;
    };
    Real bound = 0;
    for (std::size_t i = 0; i < n; ++i) bound = std::max(bound, Real(abs(a[i])));
    bound += 1;
    std::vector<Cx> z(n);
    Cx seed(Real(4) / 10, Real(9) / 10);
    Cx cur(1);
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = cur * bound;
        cur *= seed;
    }
    const Real tol = eps_digits(static_cast<int>(current_digits()) - 5);
    for (int it = 0; it < 5000; ++it) {
        Real delta = 0;
        for (std::size_t i = 0; i < n; ++i) {
            Cx den(1);
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) den *= (z[i] - z[j]);
            Cx step = eval(z[i]) / den;
            z[i] -= step;
            delta = std::max(delta, Real(abs(step) / (1 + abs(z[i]))));
        }
        if (delta < tol) break;
    }
    for (auto& r : z) {
        for (int it = 0; it < 8; ++it) {
            Cx d = deriv(r);
            if (abs(d) == 0) break;
            r -= eval(r) / d;
        }
    }
    return z;
}

// Gaussian elimination with partial pivoting; throws on singular input
inline std::vector<Real> solve(Mat<Real> a, std::vector<Real> b) {
    std::size_t n = a.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t i = c + 1; i < n; ++i)
            if (abs(a[i][c]) > abs(a[p][c])) p = i;
        if (a[p][c] == 0) throw ComputationError("solve: singular matrix");
        std::swap(a[p], a[c]);
        std::swap(b[p], b[c]);
        for (std::size_t i = c + 1; i < n; ++i) {
            Real f = a[i][c] / a[c][c];
            if (f == 0) continue;
            for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
            b[i] -= f * b[c];
        }
    }
    std::vector<Real> x(n);
    for (std::size_t i = n; i-- > 0;) {
        Real s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

struct LstsqResult {
    std::vector<Real> x;
    Real residual;  // Euclidean norm of A x - b
};

// least squares by Householder QR, A is m x n with m >= n and full column rank
inline LstsqResult lstsq(const Mat<Real>& A, const std::vector<Real>& b) {
    std::size_t m = A.size();
    require(m > 0, "lstsq: empty system");
    std::size_t n = A[0].size();
    require(m >= n, "lstsq: underdetermined system");
    Mat<Real> R = A;
    std::vector<Real> y = b;
    for (std::size_t k = 0; k < n; ++k) {
        Real norm = 0;
        for (std::size_t i = k; i < m; ++i) norm += R[i][k] * R[i][k];
        norm = sqrt(norm);
        if (norm == 0) throw ComputationError("lstsq: rank deficient");
        Real alpha = R[k][k] > 0 ? Real(-norm) : norm;
        std::vector<Real> v(m, Real(0));
        v[k] = R[k][k] - alpha;
        for (std::size_t i = k + 1; i < m; ++i) v[i] = R[i][k];
        Real vv = 0;
        for (std::size_t i = k; i < m; ++i) vv += v[i] * v[i];
        if (vv == 0) continue;
        for (std::size_t j = k; j < n; ++j) {
            Real s = 0;
            for (std::size_t i = k; i < m; ++i) s += v[i] * R[i][j];
            s = 2 * s / vv;
            for (std::size_t i = k; i < m; ++i) R[i][j] -= s * v[i];
        }
        Real s = 0;
        for (std::size_t i = k; i < m; ++i) s += v[i] * y[i];
        s = 2 * s / vv;
        for (std::size_t i = k; i < m; ++i) y[i] -= s * v[i];
    }
    std::vector<Real> x(n);
    for (std::size_t i = n; i-- > 0;) {
        if (R[i][i] == 0) throw ComputationError("lstsq: rank deficient");
        Real s = y[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= R[i][j] * x[j];
        x[i] = s / R[i][i];
    }
    Real res = 0;
    for (std::size_t i = 0; i < m; ++i) {
        Real s = -b[i];
        for (std::size_t j = 0; j < n; ++j) s += A[i][j] * x[j];
        res += s * s;
    }
    return {x, sqrt(res)};
}

// a nonzero vector in the kernel of a square matrix of corank one (complete pivoting)
inline std::vector<Real> null_vector(Mat<Real> a) {
    std::size_t n = a.size();
    std::vector<std::size_t> col(n);
    for (std::size_t j = 0; j < n; ++j) col[j] = j;
    std::size_t r = 0;
    for (; r + 1 < n; ++r) {
        std::size_t pi = r, pj = r;
        for (std::size_t i = r; i < n; ++i)
            for (std::size_t j = r; j < n; ++j)
                if (abs(a[i][j]) > abs(a[pi][pj])) {
                    pi = i;
                    pj = j;
                }
        if (a[pi][pj] == 0) throw ComputationError("null_vector: corank exceeds one");
        std::swap(a[pi], a[r]);
        for (auto& row : a) std::swap(row[pj], row[r]);
        std::swap(col[pj], col[r]);
        for (std::size_t i = r + 1; i < n; ++i) {
            Real f = a[i][r] / a[r][r];
            for (std::size_t j = r; j < n; ++j) a[i][j] -= f * a[r][j];
        }
    }
    // last permuted variable is free
    std::vector<Real> y(n, Real(0));
    y[n - 1] = 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        Real s = 0;
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * y[j];
        y[i] = s / a[i][i];
    }
    std::vector<Real> x(n);
    for (std::size_t j = 0; j < n; ++j) x[col[j]] = y[j];
    return x;
}

struct RealEigen {
    Real value;
    std::vector<Real> vector;
};

// eigenpairs of a rational matrix with simple real spectrum, sorted by eigenvalue;
// each eigenvector is scaled to have its largest entry equal to 1
inline std::vector<RealEigen> real_eigensystem(const Mat<mpq_class>& M) {
    std::size_t d = M.size();
    std::vector<RealEigen> out;
    if (d == 0) return out;
    Mat<Real> Mr = mat_zero<Real>(d, d);
    Real scale = 1;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            Mr[i][j] = to_real(M[i][j]);
            scale = std::max(scale, Real(abs(Mr[i][j])));
        }
    if (d == 1) return {{Mr[0][0], {Real(1)}}};
    auto cp = charpoly(M);
    std::vector<Real> cr;
    for (auto& c : cp) cr.push_back(to_real(c));
    auto roots = poly_roots(cr);
    const Real tol = eps_digits(static_cast<int>(current_digits()) / 3) * scale;
    std::vector<Real> lam;
    for (auto& z : roots) {
        if (abs(z.im) > tol) throw ComputationError("real_eigensystem: nonreal eigenvalue");
        lam.push_back(z.re);
    }
    std::sort(lam.begin(), lam.end());
    for (std::size_t i = 1; i < d; ++i)
        if (abs(lam[i] - lam[i - 1]) < tol) throw ComputationError("real_eigensystem: degenerate spectrum");
    for (auto& l : lam) {
        Mat<Real> A = Mr;
        for (std::size_t i = 0; i < d; ++i) A[i][i] -= l;
        auto v = null_vector(A);
        std::size_t big = 0;
        for (std::size_t i = 1; i < d; ++i)
            if (abs(v[i]) > abs(v[big])) big = i;
        Real s = v[big];
        for (auto& x : v) x /= s;
        out.push_back({l, v});
    }
    return out;
}

}  // namespace skl
