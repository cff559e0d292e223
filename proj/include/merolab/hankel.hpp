// hankel.hpp — finite sections of the Hankel operator with symbol f and
// their singular triples.
//
// The operator acts H^2 -> H^2_-, h -> P_-(f h); in the monomial bases its
// matrix is (c_{-(j+k+1)})_{j,k >= 0}, so an N x N section needs the first
// 2N-1 negative Fourier coefficients. The discarded tail perturbs every
// singular value by at most its l1 norm (truncation_defect). Real-coefficient
// symbols give real symmetric sections, handled by the symmetric eigensolver;
// complex windows fall back to the one-sided Jacobi SVD.

#pragma once

#include "catalog.hpp"
#include "linalg.hpp"
#include "poly.hpp"

namespace merolab {

template <typename R>
struct HankelSection {
    Matrix<Cx<R>> entries;   // entry(j,k) = c_{-(j+k+1)}
    std::size_t N = 0;
    R truncation_defect{};   // operator-norm bound on the discarded tail
    bool real_symmetric = false;
};

template <typename R>
HankelSection<R> build_section(const FourierWindow<R>& window, std::size_t N) {
    if (N < 1) throw domain_error("build_section: N >= 1");
    if (2 * N > window.size())
        throw domain_error("build_section: insufficient window (need K >= 2N)");
    HankelSection<R> s;
    s.N = N;
    s.entries = Matrix<Cx<R>>(N, N);
    R im_max(0), mag_max(0);
    for (std::size_t j = 0; j < N; ++j)
        for (std::size_t k = 0; k < N; ++k) {
            Cx<R> c = window.c(j + k + 1);
            s.entries(j, k) = c;
            im_max = rmax(im_max, abs(c.im));
            mag_max = rmax(mag_max, abs(c));
        }
    // defect: stored coefficients beyond the section plus the certified tail
    R defect(0);
    for (std::size_t k = 2 * N; k <= window.size(); ++k) defect += abs(window.c(k));
    defect += window.tail_l1(window.size());
    s.truncation_defect = defect;
    s.real_symmetric = im_max <= R(1e-13) * (mag_max + R(1));
    return s;
}

template <typename R>
struct SingularTriple {
    std::size_t index = 0;
    R value{};
    std::vector<Cx<R>> v;  // right singular vector = polynomial coefficients, unit l2 norm
    std::vector<Cx<R>> w;  // covector, w = H v / s
    bool trusted = true;   // false when below the numerical noise floor
};

template <typename R>
R noise_floor(const R& s0) {
    return R(1e3) * eps_of<R>() * s0;
}

// All singular triples with index <= upto, values non-increasing.
template <typename R>
std::vector<SingularTriple<R>> singular_triples(const HankelSection<R>& sec, std::size_t upto) {
    const std::size_t N = sec.N;
    if (upto >= N) throw domain_error("singular_triples: upto < N required");
    std::vector<SingularTriple<R>> out;

    auto apply_H = [&](const std::vector<Cx<R>>& v) {
        std::vector<Cx<R>> w(N);
        for (std::size_t j = 0; j < N; ++j) {
            Cx<R> s;
            for (std::size_t k = 0; k < N; ++k) s += sec.entries(j, k) * v[k];
            w[j] = s;
        }
        return w;
    };

    if (sec.real_symmetric) {
        // Hankel sections are graded with their large entries at the top
        // left; the implicit-shift QL wants them at the bottom right, so the
        // matrix is solved in reversed index order.
        Matrix<R> A(N, N);
        for (std::size_t j = 0; j < N; ++j)
            for (std::size_t k = 0; k < N; ++k) A(j, k) = sec.entries(N - 1 - j, N - 1 - k).re;
        SymEigen<R> eig = sym_eigen(std::move(A));
        std::vector<std::size_t> idx(N);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
            return abs(eig.values[i]) > abs(eig.values[j]);
        });
        for (std::size_t n = 0; n <= upto; ++n) {
            SingularTriple<R> t;
            t.index = n;
            R lam = eig.values[idx[n]];
            t.value = abs(lam);
            t.v.resize(N);
            for (std::size_t i = 0; i < N; ++i) t.v[i] = Cx<R>(eig.vectors(N - 1 - i, idx[n]));
            t.w = apply_H(t.v);
            if (t.value > R(0))
                for (auto& x : t.w) x /= t.value;
            out.push_back(std::move(t));
        }
    } else if (std::is_same<R, double>::value) {
        // double: the one-sided Jacobi SVD is fast and keeps full absolute
        // accuracy for the small singular values
        Matrix<Cx<R>> A = sec.entries;
        JacobiSvd<R> svd = jacobi_svd(std::move(A));
        for (std::size_t n = 0; n <= upto; ++n) {
            SingularTriple<R> t;
            t.index = n;
            t.value = svd.sigma[n];
            t.v.resize(N);
            for (std::size_t i = 0; i < N; ++i) t.v[i] = svd.V(i, n);
            t.w = apply_H(t.v);
            if (t.value > R(0))
                for (auto& x : t.w) x /= t.value;
            out.push_back(std::move(t));
        }
    } else {
        // wide scalars: Jacobi sweeps are prohibitively slow, so go through
        // the real 2N x 2N representation of A^H A and the symmetric
        // eigensolver. Squaring costs half the working digits of relative
        // depth, which a 100+ digit scalar has to spare.
        Matrix<R> C(2 * N, 2 * N);
        {
            // G = A^H A (Hermitian); real representation [[X, -Y], [Y, X]]
            Matrix<Cx<R>> G(N, N);
            for (std::size_t i = 0; i < N; ++i)
                for (std::size_t j = 0; j < N; ++j) {
                    Cx<R> s;
                    for (std::size_t k = 0; k < N; ++k)
                        s += conj(sec.entries(k, i)) * sec.entries(k, j);
                    G(i, j) = s;
                }
            for (std::size_t i = 0; i < N; ++i)
                for (std::size_t j = 0; j < N; ++j) {
                    C(i, j) = G(i, j).re;
                    C(i, N + j) = -G(i, j).im;
                    C(N + i, j) = G(i, j).im;
                    C(N + i, N + j) = G(i, j).re;
                }
        }
        SymEigen<R> eig = sym_eigen(std::move(C));
        // eigenvalues of the real representation are the sigma^2 of A, each
        // doubled; walking the sorted list two at a time enumerates them once
        std::vector<std::size_t> idx(2 * N);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return eig.values[a] > eig.values[b];
        });
        for (std::size_t n = 0; n <= upto; ++n) {
            std::size_t col = idx[2 * n];
            SingularTriple<R> t;
            t.index = n;
            R lam = eig.values[col];
            t.value = lam > R(0) ? sqrt(lam) : R(0);
            t.v.resize(N);
            for (std::size_t i = 0; i < N; ++i)
                t.v[i] = Cx<R>(eig.vectors(i, col), eig.vectors(N + i, col));
            R nv(0);
            for (const auto& x : t.v) nv += norm(x);
            nv = sqrt(nv);
            if (nv > R(0))
                for (auto& x : t.v) x /= nv;
            t.w = apply_H(t.v);
            if (t.value > R(0))
                for (auto& x : t.w) x /= t.value;
            out.push_back(std::move(t));
        }
    }
    R floor = noise_floor(out[0].value);
    for (auto& t : out) t.trusted = !(t.value < floor);
    return out;
}

// Effective numerical rank: number of singular values at or above the floor.
template <typename R>
std::size_t effective_rank(const std::vector<R>& svals) {
    if (svals.empty()) return 0;
    R floor = noise_floor(svals[0]);
    std::size_t r = 0;
    while (r < svals.size() && svals[r] >= floor) ++r;
    return r;
}

}  // namespace merolab
