// linalg.hpp — small dense kernels templated on the scalar.
//
// The Hankel/AAK pipeline has to run both in double and in multiprecision,
// so the few dense solvers it needs are written generically here instead of
// pulling in a fixed-scalar LAPACK path:
//   * lu_solve          — partial-pivot LU, real or complex entries
//   * sym_eigen         — Householder tridiagonalization + implicit-shift QL,
//                         all eigenvalues/vectors of a real symmetric matrix
//   * jacobi_svd        — one-sided (Hestenes) Jacobi SVD of a complex matrix,
//                         singular values and right singular vectors
// Sizes are a few hundred at most; O(n^3) with small constants is fine.

#pragma once

#include <algorithm>
#include <numeric>

#include "common.hpp"

namespace merolab {

template <typename T>
struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<T> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}
    T& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

// Solve A x = b in place (A copied). Throws numeric_error on singular pivot.
template <typename T>
std::vector<T> lu_solve(Matrix<T> A, std::vector<T> b) {
    const std::size_t n = A.rows;
    if (A.cols != n || b.size() != n) throw numeric_error("lu_solve: shape mismatch");
    std::vector<std::size_t> piv(n);
    std::iota(piv.begin(), piv.end(), std::size_t{0});
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        auto best = abs(A(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            auto v = abs(A(i, k));
            if (v > best) { best = v; p = i; }
        }
        if (!(best > decltype(best)(0))) throw numeric_error("lu_solve: singular matrix");
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(A(k, j), A(p, j));
            std::swap(b[k], b[p]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            T m = A(i, k) / A(k, k);
            A(i, k) = m;
            for (std::size_t j = k + 1; j < n; ++j) A(i, j) -= m * A(k, j);
            b[i] -= m * b[k];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        T s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= A(i, j) * b[j];
        b[i] = s / A(i, i);
    }
    return b;
}

template <typename R>
inline R pythag(const R& a, const R& b) {
    R aa = abs(a), ab = abs(b);
    if (aa > ab) {
        R q = ab / aa;
        return aa * sqrt(R(1) + q * q);
    }
    if (ab == R(0)) return R(0);
    R q = aa / ab;
    return ab * sqrt(R(1) + q * q);
}

template <typename R>
struct SymEigen {
    std::vector<R> values;   // ascending
    Matrix<R> vectors;       // column j ~ values[j]
};

// Householder reduction of symmetric A to tridiagonal (d, e), accumulating
// the orthogonal transform in A itself.
template <typename R>
void householder_tridiag(Matrix<R>& A, std::vector<R>& d, std::vector<R>& e) {
    const std::size_t n = A.rows;
    d.assign(n, R(0));
    e.assign(n, R(0));
    for (std::size_t i = n - 1; i >= 1; --i) {
        std::size_t l = i - 1;
        R h(0), scale(0);
        if (i > 1) {
            for (std::size_t k = 0; k <= l; ++k) scale += abs(A(i, k));
            if (scale == R(0)) {
                e[i] = A(i, l);
            } else {
                for (std::size_t k = 0; k <= l; ++k) {
                    A(i, k) /= scale;
                    h += A(i, k) * A(i, k);
                }
                R f = A(i, l);
                R g = f >= R(0) ? -sqrt(h) : sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                A(i, l) = f - g;
                f = R(0);
                for (std::size_t j = 0; j <= l; ++j) {
                    A(j, i) = A(i, j) / h;  // store u/H for transform accumulation
                    g = R(0);
                    for (std::size_t k = 0; k <= j; ++k) g += A(j, k) * A(i, k);
                    for (std::size_t k = j + 1; k <= l; ++k) g += A(k, j) * A(i, k);
                    e[j] = g / h;
                    f += e[j] * A(i, j);
                }
                R hh = f / (h + h);
                for (std::size_t j = 0; j <= l; ++j) {
                    f = A(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (std::size_t k = 0; k <= j; ++k) A(j, k) -= f * e[k] + g * A(i, k);
                }
            }
        } else {
            e[i] = A(i, l);
        }
        d[i] = h;
    }
    d[0] = R(0);
    e[0] = R(0);
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i] != R(0)) {
            for (std::size_t j = 0; j < i; ++j) {
                R g(0);
                for (std::size_t k = 0; k < i; ++k) g += A(i, k) * A(k, j);
                for (std::size_t k = 0; k < i; ++k) A(k, j) -= g * A(k, i);
            }
        }
        d[i] = A(i, i);
        A(i, i) = R(1);
        for (std::size_t j = 0; j < i; ++j) A(j, i) = A(i, j) = R(0);
    }
}

// Implicit-shift QL on a symmetric tridiagonal, rotations accumulated into Z.
template <typename R>
void tridiag_ql(std::vector<R>& d, std::vector<R>& e, Matrix<R>& Z) {
    const std::size_t n = d.size();
    const R eps = eps_of<R>();
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = R(0);
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                R dd = abs(d[m]) + abs(d[m + 1]);
                if (abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 200) throw numeric_error("tridiag_ql: too many iterations");
                R g = (d[l + 1] - d[l]) / (R(2) * e[l]);
                R r = pythag(g, R(1));
                R sg = g >= R(0) ? abs(r) : -abs(r);
                g = d[m] - d[l] + e[l] / (g + sg);
                R s(1), c(1), p(0);
                bool underflowed = false;
                for (std::size_t i = m; i-- > l;) {
                    R f = s * e[i];
                    R b = c * e[i];
                    r = pythag(f, g);
                    e[i + 1] = r;
                    if (r == R(0)) {
                        d[i + 1] -= p;
                        e[m] = R(0);
                        underflowed = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + R(2) * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (std::size_t k = 0; k < n; ++k) {
                        f = Z(k, i + 1);
                        Z(k, i + 1) = s * Z(k, i) + c * f;
                        Z(k, i) = c * Z(k, i) - s * f;
                    }
                }
                if (underflowed) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = R(0);
            }
        } while (m != l);
    }
}

template <typename R>
SymEigen<R> sym_eigen(Matrix<R> A) {
    const std::size_t n = A.rows;
    if (A.cols != n || n == 0) throw numeric_error("sym_eigen: shape");
    std::vector<R> d, e;
    if (n == 1) {
        SymEigen<R> out;
        out.values = {A(0, 0)};
        out.vectors = Matrix<R>(1, 1);
        out.vectors(0, 0) = R(1);
        return out;
    }
    householder_tridiag(A, d, e);
    tridiag_ql(d, e, A);
    // sort ascending, vectors alongside
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return d[i] < d[j]; });
    SymEigen<R> out;
    out.values.resize(n);
    out.vectors = Matrix<R>(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = d[idx[j]];
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = A(i, idx[j]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// One-sided Jacobi SVD: A (m x n) complex, returns singular values descending
// and the right singular vectors V (n x n, columns). U is recoverable as
// A V / sigma; callers here only need sigma and V.
// ---------------------------------------------------------------------------

template <typename R>
struct JacobiSvd {
    std::vector<R> sigma;   // descending
    Matrix<Cx<R>> V;        // right singular vectors as columns
};

template <typename R>
JacobiSvd<R> jacobi_svd(Matrix<Cx<R>> A, int max_sweeps = 40) {
    const std::size_t m = A.rows, n = A.cols;
    Matrix<Cx<R>> V(n, n);
    for (std::size_t i = 0; i < n; ++i) V(i, i) = Cx<R>(R(1));
    const R tol = R(16) * eps_of<R>();

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                R app(0), aqq(0);
                Cx<R> apq;
                for (std::size_t i = 0; i < m; ++i) {
                    app += norm(A(i, p));
                    aqq += norm(A(i, q));
                    apq += conj(A(i, p)) * A(i, q);
                }
                R offd = abs(apq);
                if (!(offd > tol * sqrt(app * aqq)) || offd == R(0)) continue;
                rotated = true;
                Cx<R> phase = apq / offd;  // e^{i phi}
                R zeta = (aqq - app) / (R(2) * offd);
                R t;
                if (zeta >= R(0))
                    t = R(1) / (zeta + sqrt(R(1) + zeta * zeta));
                else
                    t = R(-1) / (-zeta + sqrt(R(1) + zeta * zeta));
                R cs = R(1) / sqrt(R(1) + t * t);
                R sn = t * cs;
                Cx<R> sp = sn * phase;        // sn e^{i phi}
                Cx<R> spc = conj(sp);         // sn e^{-i phi}
                for (std::size_t i = 0; i < m; ++i) {
                    Cx<R> ap = A(i, p), aq = A(i, q);
                    A(i, p) = cs * ap - spc * aq;
                    A(i, q) = sp * ap + cs * aq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    Cx<R> vp = V(i, p), vq = V(i, q);
                    V(i, p) = cs * vp - spc * vq;
                    V(i, q) = sp * vp + cs * vq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<R> sig(n);
    for (std::size_t j = 0; j < n; ++j) {
        R s(0);
        for (std::size_t i = 0; i < m; ++i) s += norm(A(i, j));
        sig[j] = sqrt(s);
    }
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return sig[i] > sig[j]; });
    JacobiSvd<R> out;
    out.sigma.resize(n);
    out.V = Matrix<Cx<R>>(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.sigma[j] = sig[idx[j]];
        for (std::size_t i = 0; i < n; ++i) out.V(i, j) = V(i, idx[j]);
    }
    return out;
}

}  // namespace merolab
