// interp.hpp — n-th root optimal rational approximants by multipoint
// interpolation, and the singular-part retention construction for the polar
// class.
//
// Interpolation: type (n,n) rational p/q with the linearized conditions
// (f q - p)(x_j) = 0 at 2n+1 nodes on T, solved as a null-space problem.
// Node placement follows the balayage of the extremal cut's equilibrium
// measure onto T: nodes sit at the j/(2n+1)-quantiles of the swept density,
// with the quantile origin at a density maximizer (so n = 0 interpolates at
// the maximizer). The classical Padé scheme (all nodes at infinity) is
// realized by Laurent matching on the Fourier window.
//
// Retention: the poles of a meromorphic approximant inside a sublevel region
// {g(mu_B) > t} of the Green equilibrium potential of a small disk B around
// a polar singular point are kept, all else discarded; the retained
// approximant is the sum of the corresponding principal parts (the residue
// form of the Cauchy integral over the level curve). The level t is chosen
// from a 17-point scan to maximize the clearance between the level curve and
// the poles.

#pragma once

#include "aak.hpp"
#include "cuts.hpp"

namespace merolab {

enum class SchemeKind { balayage_quantiles, uniform, all_at_infinity };

struct InterpolationScheme {
    SchemeKind kind = SchemeKind::uniform;
    std::vector<double> angles;  // node angles on T (empty for all_at_infinity)

    std::size_t order() const { return angles.empty() ? 0 : (angles.size() - 1) / 2; }
};

inline InterpolationScheme uniform_scheme(std::size_t n) {
    InterpolationScheme s;
    s.kind = SchemeKind::uniform;
    const double twopi = 2 * 3.14159265358979323846;
    for (std::size_t j = 0; j < 2 * n + 1; ++j)
        s.angles.push_back(twopi * double(j) / double(2 * n + 1));
    return s;
}

inline InterpolationScheme pade_scheme() {
    InterpolationScheme s;
    s.kind = SchemeKind::all_at_infinity;
    return s;
}

// Quantile nodes of the balayage of the cut's equilibrium measure onto T.
inline InterpolationScheme balayage_scheme(const CutSolution& cut, std::size_t n,
                                           std::size_t grid = 8192) {
    CircleMeasure bal = balayage_to_circle(cut.capacity.measure, grid);
    const double twopi = 2 * 3.14159265358979323846;
    // quantile origin: global density maximizer
    std::size_t imax = 0;
    for (std::size_t i = 1; i < grid; ++i)
        if (bal.density[i] > bal.density[imax]) imax = i;
    double total = 0;
    for (double m : bal.mass) total += m;

    InterpolationScheme s;
    s.kind = SchemeKind::balayage_quantiles;
    const std::size_t count = 2 * n + 1;
    // cumulative mass walking from the maximizer; node at each level j/(2n+1)
    double acc = 0;
    std::size_t j = 0;
    s.angles.push_back(bal.theta[imax]);
    ++j;
    for (std::size_t step = 0; step < grid && j < count; ++step) {
        std::size_t i = (imax + step) % grid;
        double next = acc + bal.mass[i] / total;
        while (j < count && next >= double(j) / double(count)) {
            double need = double(j) / double(count) - acc;
            double frac = bal.mass[i] > 0 ? need / (bal.mass[i] / total) : 0.0;
            double th = bal.theta[i] + frac * (twopi / double(grid));
            s.angles.push_back(std::fmod(th, twopi));
            ++j;
        }
        acc = next;
    }
    while (j++ < count) s.angles.push_back(bal.theta[imax]);  // mass-starved corner case
    return s;
}

// ---------------------------------------------------------------------------
// Interpolation
// ---------------------------------------------------------------------------

namespace detail_interp {

// Null vector of an m x (m+1) system by Gaussian elimination with complete
// pivoting; the column never chosen as a pivot is the free unknown. Falls
// back to the SVD minimal-norm vector on genuine rank deficiency. Returns
// (vector, rank_deficient flag).
template <typename R>
std::pair<std::vector<Cx<R>>, bool> null_vector(Matrix<Cx<R>> A) {
    const std::size_t m = A.rows, n = A.cols;
    if (n != m + 1) throw domain_error("null_vector: expected m x (m+1)");
    Matrix<Cx<R>> saved = A;
    R scale(0);
    for (const auto& v : A.a) scale = rmax(scale, abs(v));
    if (scale == R(0)) {
        std::vector<Cx<R>> u(n, Cx<R>());
        u[n - 1] = Cx<R>(R(1));
        return {u, true};
    }
    std::vector<std::size_t> colperm(n);
    std::iota(colperm.begin(), colperm.end(), std::size_t{0});
    bool deficient = false;
    for (std::size_t k = 0; k < m; ++k) {
        std::size_t pr = k, pc = k;
        R best(0);
        for (std::size_t i = k; i < m; ++i)
            for (std::size_t j = k; j < n; ++j) {
                R v = abs(A(i, j));
                if (v > best) { best = v; pr = i; pc = j; }
            }
        if (best <= R(1e3) * eps_of<R>() * scale) { deficient = true; break; }
        if (pr != k)
            for (std::size_t jj = 0; jj < n; ++jj) std::swap(A(k, jj), A(pr, jj));
        if (pc != k) {
            for (std::size_t ii = 0; ii < m; ++ii) std::swap(A(ii, k), A(ii, pc));
            std::swap(colperm[k], colperm[pc]);
        }
        for (std::size_t i = k + 1; i < m; ++i) {
            Cx<R> f = A(i, k) / A(k, k);
            for (std::size_t jj = k; jj < n; ++jj) A(i, jj) -= f * A(k, jj);
        }
    }
    if (!deficient) {
        std::vector<Cx<R>> up(n);
        up[n - 1] = Cx<R>(R(1));
        for (std::size_t i = m; i-- > 0;) {
            Cx<R> s = -A(i, n - 1);
            for (std::size_t jj = i + 1; jj < m; ++jj) s -= A(i, jj) * up[jj];
            up[i] = s / A(i, i);
        }
        std::vector<Cx<R>> u(n);
        for (std::size_t j = 0; j < n; ++j) u[colperm[j]] = up[j];
        return {u, false};
    }
    JacobiSvd<R> svd = jacobi_svd(std::move(saved));
    std::vector<Cx<R>> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = svd.V(i, n - 1);
    return {u, true};
}

}  // namespace detail_interp

template <typename R>
MeromorphicApproximant<R> interpolate(const AnalyticFunctionSpec& spec,
                                      const InterpolationScheme& scheme,
                                      std::size_t n, const FourierWindow<R>* window = nullptr) {
    MeromorphicApproximant<R> M;
    M.provenance = Provenance::interpolation;
    M.degree_budget = n;

    Poly<R> q, p;
    bool deficient = false;
    if (scheme.kind == SchemeKind::all_at_infinity) {
        // Laurent matching: sum_m q_m c_{-(m+k)} = 0, k = 1..n, q monic;
        // numerator by truncation of the polynomial part of f q
        if (!window || window->size() < 2 * n + 1)
            throw domain_error("interpolate: Padé scheme needs a Fourier window of length >= 2n+1");
        q.assign(n + 1, Cx<R>());
        q[n] = Cx<R>(R(1));
        if (n > 0) {
            Matrix<Cx<R>> H{n, n};
            std::vector<Cx<R>> rhs(n);
            for (std::size_t k = 1; k <= n; ++k) {
                for (std::size_t mcol = 0; mcol < n; ++mcol) H(k - 1, mcol) = window->c(mcol + k);
                rhs[k - 1] = -window->c(n + k);
            }
            std::vector<Cx<R>> qq = lu_solve(std::move(H), std::move(rhs));
            for (std::size_t i = 0; i < n; ++i) q[i] = qq[i];
        }
        // p_l = sum_{m > l} q_m c_{-(m-l)}, l = 0..n-1
        p.assign(std::max<std::size_t>(n, 1), Cx<R>());
        for (std::size_t l = 0; l < n; ++l) {
            Cx<R> s;
            for (std::size_t mdeg = l + 1; mdeg <= n; ++mdeg) s += q[mdeg] * window->c(mdeg - l);
            p[l] = s;
        }
    } else {
        const std::size_t rows = scheme.angles.size();
        if (rows != 2 * n + 1) throw domain_error("interpolate: scheme has wrong node count");
        Matrix<Cx<R>> A{rows, 2 * n + 2};
        for (std::size_t j = 0; j < rows; ++j) {
            Cx<R> x = polar_cx(R(1), R(scheme.angles[j]));
            Cx<R> fx = evaluate(spec, x);
            Cx<R> xp(R(1));
            for (std::size_t k = 0; k <= n; ++k) {
                A(j, k) = fx * xp;            // q-block
                A(j, n + 1 + k) = -xp;        // p-block
                xp *= x;
            }
        }
        auto [u, def] = detail_interp::null_vector(std::move(A));
        deficient = def;
        q.assign(u.begin(), u.begin() + long(n + 1));
        p.assign(u.begin() + long(n + 1), u.end());
    }

    // monic-normalize the denominator
    R qmax(0);
    for (const auto& c : q) qmax = rmax(qmax, abs(c));
    if (!(qmax > R(0))) throw numeric_error("interpolate: zero denominator");
    if (abs(q[n]) > R(1e-10) * qmax) {
        Cx<R> lead = q[n];
        for (auto& c : q) c /= lead;
        for (auto& c : p) c /= lead;
    } else {
        deficient = true;
        for (auto& c : q) c /= qmax;
        for (auto& c : p) c /= qmax;
    }
    if (deficient) M.warnings.push_back("rank-deficient interpolation; minimal-norm solution");

    M.num = p;
    M.den = q;

    // poles in the disk, with residues; poles outside D are spurious
    std::vector<cxd> roots = aberth_roots_structured(poly_to_double(q));
    Poly<R> dq = poly_derivative(q);
    std::size_t spurious = 0;
    for (const auto& zr : roots) {
        if (abs(zr) < 1.0 - 1e-10) {
            PoleInfo<R> pi;
            pi.z = newton_polish(q, cx_of<R>(zr));
            pi.mult = 1;
            pi.principal = {poly_eval(M.num, pi.z) / poly_eval(dq, pi.z)};
            M.poles.push_back(pi);
        } else if (abs(zr) < 1e6) {
            ++spurious;
        }
    }
    if (spurious)
        M.warnings.push_back(std::to_string(spurious) + " spurious pole(s) outside the disk");
    return M;
}

// ---------------------------------------------------------------------------
// Singular-part retention
// ---------------------------------------------------------------------------

struct RetentionRegion {
    cxd center;
    double radius = 0.05;
    CapacityResult boundary;  // equilibrium of the circle around the point
    double level = 0;         // chosen t: region = { g(mu_B) > t }
    double margin = 0;        // clearance of the level curve from the poles
    std::vector<std::string> warnings;

    double potential(const cxd& z) const { return boundary.solution->potential(z); }
    bool contains(const cxd& z) const { return potential(z) > level; }
};

inline RetentionRegion make_retention_region(const cxd& center, double radius = 0.05,
                                             EquilibriumParams prm = {}) {
    RetentionRegion r;
    r.center = center;
    r.radius = radius;
    ArcChain circ;
    circ.arcs.push_back(Arc::circle(center, radius));
    r.boundary = equilibrium(circ, prm);
    return r;
}

template <typename R>
MeromorphicApproximant<R> retain_singular_part(const MeromorphicApproximant<R>& M,
                                               RetentionRegion& region,
                                               double t_lo_frac = 0.05, double t_hi_frac = 0.5) {
    const double F = region.boundary.level;
    auto grad_norm = [&](const cxd& z) {
        const double h = 1e-4;
        double gx = (region.potential(z + cxd(h, 0)) - region.potential(z - cxd(h, 0))) / (2 * h);
        double gy = (region.potential(z + cxd(0, h)) - region.potential(z - cxd(0, h))) / (2 * h);
        return std::sqrt(gx * gx + gy * gy);
    };
    std::vector<std::pair<cxd, double>> pole_levels;  // (pole, G(pole))
    for (const auto& p : M.poles) pole_levels.emplace_back(to_cxd(p.z), 0.0);
    for (auto& [z, g] : pole_levels) g = region.potential(z);

    auto margin_at = [&](double t) {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& [z, g] : pole_levels) {
            double gn = std::max(grad_norm(z), 1e-9);
            m = std::min(m, std::abs(g - t) / gn);
        }
        return m;
    };
    auto scan = [&](double lo, double hi) {
        double best_t = lo, best_m = -1;
        for (int j = 0; j < 17; ++j) {
            double t = lo + (hi - lo) * double(j) / 16.0;
            double m = pole_levels.empty() ? 1.0 : margin_at(t);
            if (m > best_m) { best_m = m; best_t = t; }
        }
        return std::make_pair(best_t, best_m);
    };
    auto [t, m] = scan(t_lo_frac * F, t_hi_frac * F);
    if (m < 1e-6) {
        region.warnings.push_back("level scan too close to a pole; widening the range");
        std::tie(t, m) = scan(0.5 * t_lo_frac * F, std::min(0.98, t_hi_frac * 1.6) * F);
        if (m < 1e-6) throw numeric_error("retain_singular_part: level selection failed");
    }
    region.level = t;
    region.margin = m;

    MeromorphicApproximant<R> out;
    out.provenance = Provenance::retention;
    out.degree_budget = M.degree_budget;
    std::vector<cxd> kept, dropped;
    for (std::size_t i = 0; i < M.poles.size(); ++i) {
        if (pole_levels[i].second > t) {
            out.poles.push_back(M.poles[i]);
            kept.push_back(pole_levels[i].first);
        } else {
            dropped.push_back(pole_levels[i].first);
        }
    }
    rational_from_principal_parts(out);
    if (kept.empty()) return out;  // zero approximant

    // Cauchy-integral evaluator over a circle separating the retained poles
    // from everything else; the principal-part form is kept only when it
    // agrees with the integral (it degrades for clustered poles).
    cxd center = region.center;
    double rmin_c = 0;
    for (const cxd& z : kept) rmin_c = std::max(rmin_c, abs(z - center));
    double rmax_c = 0.94 - abs(center);
    for (const cxd& z : dropped) rmax_c = std::min(rmax_c, abs(z - center));
    if (M.use_contour)
        for (const auto& nd : M.contour_nodes) rmin_c = std::max(rmin_c, abs(to_cxd(nd) - center));
    rmin_c *= 1.02;
    if (!(rmax_c > rmin_c * 1.02))
        throw numeric_error("retain_singular_part: no separating circle for the retained poles");
    double best_rho = rmin_c, best_score = -1;
    for (int j = 0; j <= 24; ++j) {
        double rho = rmin_c + (rmax_c * 0.98 - rmin_c) * double(j) / 24.0;
        double score = std::numeric_limits<double>::infinity();
        for (const cxd& z : kept) score = std::min(score, std::abs(abs(z - center) - rho));
        for (const cxd& z : dropped) score = std::min(score, std::abs(abs(z - center) - rho));
        score = std::min(score, 1.0 - (abs(center) + rho));
        if (score > best_score) { best_score = score; best_rho = rho; }
    }
    bool inside_region = true;
    for (int g = 0; g < 16; ++g) {
        double th = 2 * 3.14159265358979323846 * g / 16.0;
        if (!(region.potential(center + cxd(best_rho * std::cos(th), best_rho * std::sin(th))) > t))
            inside_region = false;
    }
    if (!inside_region)
        out.warnings.push_back("separating circle exits the sublevel region");

    auto build_contour = [&](std::size_t G) {
        std::vector<Cx<R>> nodes(G), vals(G);
        const R twopi = R(2) * pi_const<R>();
        Cx<R> c0 = cx_of<R>(center);
        for (std::size_t g = 0; g < G; ++g) {
            R th = twopi * R(double(g)) / R(double(G));
            Cx<R> xi = c0 + polar_cx(R(best_rho), th);
            nodes[g] = xi;
            vals[g] = M(xi) * (xi - c0) / R(double(G));
        }
        return std::make_pair(nodes, vals);
    };
    auto eval_with = [&](const std::vector<Cx<R>>& nodes, const std::vector<Cx<R>>& vals,
                         const Cx<R>& x) {
        Cx<R> s;
        for (std::size_t g = 0; g < nodes.size(); ++g) s += vals[g] / (x - nodes[g]);
        return s;
    };
    std::vector<Cx<R>> testpts;
    for (int g = 0; g < 8; ++g) {
        R th = R(2) * pi_const<R>() * R(double(g) + 0.37) / R(8);
        testpts.push_back(polar_cx(R(1), th));
    }
    std::size_t G = 256;
    auto [nodes, vals] = build_contour(G);
    for (; G <= 4096; G *= 2) {
        auto [n2, v2] = build_contour(2 * G);
        R diff(0), scale(0);
        for (const auto& x : testpts) {
            Cx<R> a = eval_with(nodes, vals, x), b = eval_with(n2, v2, x);
            diff = rmax(diff, abs(a - b));
            scale = rmax(scale, abs(b) + R(1e-300));
        }
        nodes = std::move(n2);
        vals = std::move(v2);
        if (diff <= rmax(R(1e-30) * scale, eps_of<R>() * R(1e3))) break;
    }

    // Pick the representation with the smaller roundoff floor on T. The
    // principal-part form degrades when the retained poles crowd together
    // (alternating residues cancel through the expanded numerator), while
    // the Cauchy-integral form is limited only by |M| on the contour.
    R num_mass(0);
    for (const auto& cc : out.num) num_mass += abs(cc);
    R den_floor(1e300);
    for (const auto& x : testpts) den_floor = rmin(den_floor, abs(poly_eval(out.den, x)));
    R eta_rational = eps_of<R>() * num_mass / rmax(den_floor, R(1e-300));
    R val_mass(0);
    for (const auto& v : vals) val_mass += abs(v);
    double rim_dist = std::max(1.0 - (abs(center) + best_rho), 1e-3);
    R eta_contour = eps_of<R>() * val_mass / R(rim_dist);
    bool rational_ok = eta_rational <= R(100) * eta_contour;
    for (const auto& x : testpts) {
        Cx<R> a = poly_eval(out.num, x) / poly_eval(out.den, x);
        Cx<R> b = eval_with(nodes, vals, x);
        if (abs(a - b) > R(1e-8) * (abs(b) + R(1e-30))) rational_ok = false;
    }
    if (!rational_ok) {
        out.use_contour = true;
        out.contour_nodes = std::move(nodes);
        out.contour_values = std::move(vals);
    }
    return out;
}

}  // namespace merolab
