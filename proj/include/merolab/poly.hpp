// poly.hpp — polynomial utilities over Cx<R> coefficient vectors.
//
// Coefficients are stored low-to-high: p(z) = sum_k c[k] z^k. Root finding
// uses the Aberth–Ehrlich simultaneous iteration in double precision; roots
// destined for multiprecision work get a Newton polish on the original
// coefficients afterwards.

#pragma once

#include <algorithm>

#include "common.hpp"

namespace merolab {

template <typename R>
using Poly = std::vector<Cx<R>>;

template <typename R>
Cx<R> poly_eval(const Poly<R>& c, const Cx<R>& z) {
    Cx<R> s;
    for (std::size_t k = c.size(); k-- > 0;) s = s * z + c[k];
    return s;
}

template <typename R>
Poly<R> poly_derivative(const Poly<R>& c) {
    Poly<R> d;
    if (c.size() <= 1) return {Cx<R>(R(0))};
    d.resize(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = R(static_cast<double>(k)) * c[k];
    return d;
}

template <typename R>
Poly<R> poly_mul(const Poly<R>& a, const Poly<R>& b) {
    if (a.empty() || b.empty()) return {};
    Poly<R> c(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

template <typename R>
Poly<R> poly_add(Poly<R> a, const Poly<R>& b) {
    if (b.size() > a.size()) a.resize(b.size());
    for (std::size_t k = 0; k < b.size(); ++k) a[k] += b[k];
    return a;
}

// Monic polynomial with the given roots.
template <typename R>
Poly<R> poly_from_roots(const std::vector<Cx<R>>& roots) {
    Poly<R> p{Cx<R>(R(1))};
    for (const auto& r : roots) p = poly_mul(p, Poly<R>{-r, Cx<R>(R(1))});
    return p;
}

// Aberth–Ehrlich root finder (double precision; deterministic start).
// Returns all roots of the polynomial after trimming negligible leading
// coefficients; roots at zero from trailing zero coefficients are included.
inline std::vector<cxd> aberth_roots(Poly<double> c, int max_iter = 400) {
    double cmax = 0;
    for (auto& v : c) cmax = std::max(cmax, abs(v));
    if (cmax == 0) return {};
    for (auto& v : c) v /= cmax;
    std::size_t deg = c.size() - 1;
    while (deg > 0 && abs(c[deg]) < 1e-250) --deg;  // drop infinite roots
    c.resize(deg + 1);
    std::vector<cxd> zero_roots;
    std::size_t low = 0;
    while (low < deg && abs(c[low]) == 0.0) ++low;
    if (low > 0) {
        zero_roots.assign(low, cxd(0, 0));
        c.erase(c.begin(), c.begin() + static_cast<long>(low));
        deg -= low;
    }
    if (deg == 0) return zero_roots;
    if (deg == 1) {
        zero_roots.push_back(-c[0] / c[1]);
        return zero_roots;
    }

    // Newton-polygon initialization: the upper convex hull of (k, log|c_k|)
    // estimates the root magnitudes, so initial points are spread over rings
    // at those radii. This keeps the iteration effective when the roots span
    // many orders of magnitude.
    const double pi = 3.14159265358979323846;
    std::vector<std::pair<std::size_t, double>> pts;
    for (std::size_t k = 0; k <= deg; ++k)
        if (abs(c[k]) > 0) pts.emplace_back(k, std::log(abs(c[k])));
    std::vector<std::size_t> hull;  // indices into pts, upper hull
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (hull.size() >= 2) {
            auto& A = pts[hull[hull.size() - 2]];
            auto& B = pts[hull[hull.size() - 1]];
            auto& C = pts[i];
            double cross = (double(B.first) - double(A.first)) * (C.second - A.second) -
                           (double(C.first) - double(A.first)) * (B.second - A.second);
            if (cross >= 0) hull.pop_back(); else break;
        }
        hull.push_back(i);
    }
    std::vector<cxd> z;
    z.reserve(deg);
    std::size_t placed_edges = 0;
    for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
        auto& A = pts[hull[e]];
        auto& B = pts[hull[e + 1]];
        std::size_t count = B.first - A.first;
        double r = std::exp((A.second - B.second) / double(count));
        r = std::min(std::max(r, 1e-12), 1e12);
        for (std::size_t i = 0; i < count && z.size() < deg; ++i) {
            double th = 2 * pi * (double(i) + 0.31 * double(placed_edges + 1)) / double(count) + 0.377;
            z.push_back(cxd(r * std::cos(th), r * std::sin(th)));
        }
        ++placed_edges;
    }
    while (z.size() < deg) z.push_back(cxd(1.0 + 0.01 * double(z.size()), 0.3));
    Poly<double> dc = poly_derivative(c);

    for (int it = 0; it < max_iter; ++it) {
        double worst = 0;
        for (std::size_t i = 0; i < deg; ++i) {
            cxd p = poly_eval(c, z[i]);
            cxd dp = poly_eval(dc, z[i]);
            if (abs(dp) == 0.0) dp = cxd(1e-300, 0);
            cxd w = p / dp;
            cxd s(0, 0);
            for (std::size_t j = 0; j < deg; ++j) {
                if (j == i) continue;
                cxd d = z[i] - z[j];
                if (abs(d) < 1e-300) d = cxd(1e-300, 0);
                s += 1.0 / d;
            }
            cxd denom = cxd(1, 0) - w * s;
            cxd step = abs(denom) > 1e-300 ? w / denom : w;
            z[i] -= step;
            worst = std::max(worst, abs(step) / (1.0 + abs(z[i])));
        }
        if (worst < 1e-14) break;
    }
    zero_roots.insert(zero_roots.end(), z.begin(), z.end());
    return zero_roots;
}

// Root finding with cyclic-structure reduction: singular vectors of symbols
// with an m-fold rotational symmetry have coefficients supported on a single
// residue class mod m, i.e. v(z) = z^j u(z^m), up to cross-class noise at the
// working-accuracy scale. Collapsing to u before Aberth removes a huge
// artificial coefficient spread; the roots of v are the m-th roots of the
// roots of u plus a j-fold zero at the origin.
inline std::vector<cxd> aberth_roots_structured(const Poly<double>& c) {
    const double tol = 1e-30;
    const double twopi = 2 * 3.14159265358979323846;
    for (std::size_t m = 4; m >= 2; --m) {
        if (c.size() <= m) continue;
        std::vector<double> class_mass(m, 0.0);
        for (std::size_t k = 0; k < c.size(); ++k) class_mass[k % m] += abs(c[k]);
        std::size_t jbest = 0;
        for (std::size_t j = 1; j < m; ++j)
            if (class_mass[j] > class_mass[jbest]) jbest = j;
        double rest = 0;
        for (std::size_t j = 0; j < m; ++j)
            if (j != jbest) rest += class_mass[j];
        if (!(rest <= tol * class_mass[jbest])) continue;
        Poly<double> u;
        for (std::size_t k = jbest; k < c.size(); k += m) u.push_back(c[k]);
        std::vector<cxd> wr = aberth_roots(u);
        std::vector<cxd> out(jbest, cxd(0, 0));
        for (const auto& w : wr) {
            double mag = std::pow(abs(w), 1.0 / double(m));
            double base = arg(w) / double(m);
            for (std::size_t k = 0; k < m; ++k)
                out.push_back(polar_cx(mag, base + twopi * double(k) / double(m)));
        }
        return out;
    }
    return aberth_roots(c);
}

// Simultaneous Aberth refinement of a full root set in the target scalar.
// Unlike per-root Newton, the pairwise repulsion keeps refined roots
// distinct, which matters when double-precision seeds of clustered roots
// collide.
template <typename R>
std::vector<Cx<R>> aberth_polish(const Poly<R>& c, std::vector<Cx<R>> z, int max_iter = 80) {
    if (z.empty()) return z;
    Poly<R> dc = poly_derivative(c);
    // separate exactly coincident seeds so the repulsion term is finite
    for (std::size_t i = 0; i < z.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (abs(z[i] - z[j]) == R(0))
                z[i] += Cx<R>(R(1e-14) * R(double(i + 1)), R(2e-14));
    const R tol = R(64) * eps_of<R>();
    for (int it = 0; it < max_iter; ++it) {
        R worst(0);
        for (std::size_t i = 0; i < z.size(); ++i) {
            Cx<R> p = poly_eval(c, z[i]);
            Cx<R> dp = poly_eval(dc, z[i]);
            if (abs(dp) == R(0)) continue;
            Cx<R> w = p / dp;
            Cx<R> s;
            for (std::size_t j = 0; j < z.size(); ++j) {
                if (j == i) continue;
                Cx<R> d = z[i] - z[j];
                if (abs(d) == R(0)) continue;
                s += Cx<R>(R(1)) / d;
            }
            Cx<R> denom = Cx<R>(R(1)) - w * s;
            Cx<R> step = abs(denom) > R(0) ? w / denom : w;
            z[i] -= step;
            worst = rmax(worst, abs(step) / (R(1) + abs(z[i])));
        }
        if (worst < tol) break;
    }
    return z;
}

// Newton refinement of a simple root in the target scalar.
template <typename R>
Cx<R> newton_polish(const Poly<R>& c, Cx<R> z, int iters = 40) {
    Poly<R> dc = poly_derivative(c);
    for (int i = 0; i < iters; ++i) {
        Cx<R> p = poly_eval(c, z);
        Cx<R> dp = poly_eval(dc, z);
        if (abs(dp) == R(0)) break;
        Cx<R> step = p / dp;
        z -= step;
        if (abs(step) <= eps_of<R>() * R(64) * (R(1) + abs(z))) break;
    }
    return z;
}

template <typename R>
Poly<R> poly_to(const Poly<double>& c) {
    Poly<R> out(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) out[k] = Cx<R>(R(c[k].re), R(c[k].im));
    return out;
}

template <typename R>
Poly<double> poly_to_double(const Poly<R>& c) {
    Poly<double> out(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) out[k] = to_cxd(c[k]);
    return out;
}

}  // namespace merolab
