// potential.hpp — Green function of the unit disk, Green/logarithmic
// potentials, the Nyström equilibrium-measure solver on arc chains, Greenian
// capacity, balayage onto the circle, and Fekete/Leja points.
//
// Equilibrium problem: find a probability measure mu on the chain K and a
// level F with  int g(z,w) dmu(w) = F on K,  cap_D(K) = 1/F.  The density of
// mu has inverse-square-root endpoint behavior and a weaker power singularity
// at junctions, so each open arc is reparametrized by a polynomial grading
// map whose derivative vanishes to fourth order at the ends; the transformed
// density is then smooth up to endpoints (analytic for plain endpoints) and
// is resolved by composite Gauss–Legendre panels with geometric refinement
// toward the ends. The log kernel is integrated by exact product rules
// (monomial moments of log|s - sigma|) on panels near the target and by
// adaptive Gauss elsewhere, which keeps full quadrature accuracy for targets
// on or arbitrarily close to the chain.

#pragma once

#include <functional>
#include <memory>
#include <tuple>

#include "arcs.hpp"
#include "linalg.hpp"
#include "poly.hpp"

namespace merolab {

// Green function of the unit disk: g(z,w) = log|1 - z conj(w)| - log|z - w|.
inline double green_function(const cxd& z, const cxd& w, bool inf_on_coincide = false) {
    if (!(abs(z) < 1.0) || !(abs(w) < 1.0))
        throw domain_error("green_function: both points must lie in the open disk");
    double d = abs(z - w);
    if (d == 0.0) {
        if (inf_on_coincide) return std::numeric_limits<double>::infinity();
        throw domain_error("green_function: coincident points");
    }
    return std::log(abs(cxd(1, 0) - z * conj(w))) - std::log(d);
}

struct DiscreteMeasure {
    std::vector<cxd> points;
    std::vector<double> weights;

    double total_mass() const {
        double s = 0;
        for (double w : weights) s += w;
        return s;
    }
    void validate() const {
        if (points.size() != weights.size()) throw domain_error("DiscreteMeasure: size mismatch");
        for (double w : weights)
            if (w < 0) throw domain_error("DiscreteMeasure: negative weight");
        for (const auto& p : points)
            if (abs(p) > 1.0) throw domain_error("DiscreteMeasure: support outside closed disk");
    }
};

inline double green_potential(const DiscreteMeasure& mu, const cxd& z) {
    double s = 0;
    for (std::size_t j = 0; j < mu.points.size(); ++j) {
        double d = abs(z - mu.points[j]);
        if (d == 0.0) return std::numeric_limits<double>::infinity();
        s += mu.weights[j] * (std::log(abs(cxd(1, 0) - z * conj(mu.points[j]))) - std::log(d));
    }
    return s;
}

// V^mu(z) = int log|z - t|^{-1} dmu(t)
inline double log_potential(const DiscreteMeasure& mu, const cxd& z) {
    double s = 0;
    for (std::size_t j = 0; j < mu.points.size(); ++j) {
        double d = abs(z - mu.points[j]);
        if (d == 0.0) return std::numeric_limits<double>::infinity();
        s -= mu.weights[j] * std::log(d);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Quadrature building blocks
// ---------------------------------------------------------------------------

namespace quadr {

struct GaussRule {
    std::vector<double> x, w;  // nodes/weights on [-1, 1]
};

inline GaussRule gauss_legendre(int p) {
    GaussRule r;
    r.x.resize(p);
    r.w.resize(p);
    for (int i = 0; i < p; ++i) {
        // Newton from Chebyshev initial guess
        double t = std::cos(3.14159265358979323846 * (i + 0.75) / (p + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = 0;
            for (int j = 0; j < p; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) * t * p1 - j * p2) / (j + 1);
            }
            double dp = p * (t * p0 - p1) / (t * t - 1);
            double dt = p0 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        double p0 = 1, p1 = 0;
        for (int j = 0; j < p; ++j) {
            double p2 = p1;
            p1 = p0;
            p0 = ((2 * j + 1) * t * p1 - j * p2) / (j + 1);
        }
        double dp = p * (t * p0 - p1) / (t * t - 1);
        r.x[p - 1 - i] = t;
        r.w[p - 1 - i] = 2.0 / ((1 - t * t) * dp * dp);
    }
    return r;
}

// int_{-1}^{1} x^j log|x - a| dx  (valid for any real a, including |a|<=1)
inline double log_moment(int j, double a) {
    auto at = [&](double x) {
        double lg = (std::abs(x - a) < 1e-300) ? 0.0 : std::log(std::abs(x - a));
        double pref = (std::pow(x, j + 1) - std::pow(a, j + 1)) / (j + 1);
        double poly = 0;  // -(1/(j+1)) * sum_{i=0}^{j} a^{j-i} x^{i+1}/(i+1)
        for (int i = 0; i <= j; ++i) poly += std::pow(a, j - i) * std::pow(x, i + 1) / (i + 1);
        return pref * lg - poly / (j + 1);
    };
    return at(1.0) - at(-1.0);
}

// grading map with quartic endpoint flattening on [0,1]
inline double grade(double s) {
    double s4 = s * s * s * s;
    return s4 * (35.0 - 84.0 * s + 70.0 * s * s - 20.0 * s * s * s);
}
inline double grade_deriv(double s) {
    double u = s * (1 - s);
    return 140.0 * u * u * u;
}

}  // namespace quadr

// ---------------------------------------------------------------------------
// Nyström equilibrium solver
// ---------------------------------------------------------------------------

struct EquilibriumParams {
    int order = 10;         // Gauss order per panel
    int base_panels = 6;    // uniform panels per open arc before refinement
    int refine_levels = 5;  // geometric bisection levels toward arc ends
    int circle_panels = 12; // uniform panels for closed curves
};

inline EquilibriumParams coarse_params() { return EquilibriumParams{8, 4, 4, 10}; }
inline EquilibriumParams fine_params() { return EquilibriumParams{12, 8, 6, 18}; }

class EquilibriumSolution {
public:
    ArcChain chain;
    EquilibriumParams prm;
    double level = 0;        // F = 1/cap
    double capacity = 0;

    struct Panel {
        std::size_t arc;
        double s0, s1;                 // graded-parameter bounds
        std::vector<double> s;         // Gauss nodes in s
        std::vector<double> w;         // Gauss weights in s
        std::vector<cxd> z;            // physical nodes
        std::vector<cxd> dzds;         // d gamma / ds at nodes
        std::size_t offset;            // first global node index
    };
    std::vector<Panel> panels;
    std::vector<double> phi;           // transformed density at nodes
    quadr::GaussRule rule;
    Matrix<double> lag2mono;           // Lagrange -> monomial on reference panel

    std::size_t node_count() const {
        return panels.empty() ? 0 : panels.back().offset + panels.back().s.size();
    }

    cxd arc_point(std::size_t arc, double s) const {
        const Arc& a = chain.arcs[arc];
        return a.closed() ? a.point(s) : a.point(quadr::grade(s));
    }
    cxd arc_dzds(std::size_t arc, double s) const {
        const Arc& a = chain.arcs[arc];
        if (a.closed()) return a.tangent(s);
        return a.tangent(quadr::grade(s)) * quadr::grade_deriv(s);
    }

    // potential of the equilibrium measure at z; exact product integration
    // when z lies on (or within matching distance of) the chain
    double potential(const cxd& z) const {
        auto [arc, s, dist] = nearest(z);
        if (dist < 1e-9) return potential_on(arc, s);
        return potential_off(z);
    }

    double potential_on(std::size_t arc, double sigma) const {
        std::vector<double> row(node_count(), 0.0);
        assemble_row_on(arc, sigma, arc_point(arc, sigma), row);
        double s = 0;
        for (std::size_t j = 0; j < row.size(); ++j) s += row[j] * phi[j];
        return s;
    }

    double potential_off(const cxd& z) const {
        std::vector<double> row(node_count(), 0.0);
        assemble_row_off(z, row);
        double s = 0;
        for (std::size_t j = 0; j < row.size(); ++j) s += row[j] * phi[j];
        return s;
    }

    std::tuple<std::size_t, double, double> nearest(const cxd& z) const {
        double bd = std::numeric_limits<double>::infinity();
        std::size_t ba = 0;
        double bs = 0;
        for (std::size_t ai = 0; ai < chain.arcs.size(); ++ai) {
            const int C = 256;
            double lt = 0, lv = std::numeric_limits<double>::infinity();
            for (int i = 0; i <= C; ++i) {
                double t = double(i) / C;
                double v = abs(arc_point(ai, t) - z);
                if (v < lv) { lv = v; lt = t; }
            }
            double lo = std::max(0.0, lt - 1.5 / C), hi = std::min(1.0, lt + 1.5 / C);
            for (int it = 0; it < 60; ++it) {
                double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
                if (abs(arc_point(ai, m1) - z) < abs(arc_point(ai, m2) - z)) hi = m2; else lo = m1;
            }
            double t = 0.5 * (lo + hi), v = abs(arc_point(ai, t) - z);
            if (v < bd) { bd = v; ba = ai; bs = t; }
        }
        return {ba, bs, bd};
    }

    DiscreteMeasure measure() const {
        DiscreteMeasure mu;
        for (const auto& P : panels)
            for (std::size_t k = 0; k < P.s.size(); ++k) {
                mu.points.push_back(P.z[k]);
                mu.weights.push_back(P.w[k] * phi[P.offset + k]);
            }
        return mu;
    }

    // ---- assembly ----------------------------------------------------------

    static double kernel(const cxd& z, const cxd& w) {
        return std::log(abs(cxd(1, 0) - z * conj(w))) - std::log(abs(z - w));
    }

    // row of the Nyström matrix for a target on the chain (arc, sigma)
    void assemble_row_on(std::size_t tarc, double sigma, const cxd& zt,
                         std::vector<double>& row) const {
        for (const auto& P : panels) {
            bool same = (P.arc == tarc);
            double sd = sigma;
            if (same && chain.arcs[P.arc].closed()) {
                // wrap the parameter difference for periodic curves
                double mid = 0.5 * (P.s0 + P.s1);
                if (sd - mid > 0.5) sd -= 1.0;
                if (mid - sd > 0.5) sd += 1.0;
            }
            double len = P.s1 - P.s0;
            if (same && sd > P.s0 - 1.5 * len && sd < P.s1 + 1.5 * len)
                add_product_panel(P, sd, zt, row);
            else
                add_far_or_adaptive(P, zt, row);
        }
    }

    void assemble_row_off(const cxd& z, std::vector<double>& row) const {
        for (const auto& P : panels) add_far_or_adaptive(P, z, row);
    }

    // product integration of the -log|s-sigma| part, exact per panel
    void add_product_panel(const Panel& P, double sigma, const cxd& zt,
                           std::vector<double>& row) const {
        const int p = int(P.s.size());
        const double mid = 0.5 * (P.s0 + P.s1), half = 0.5 * (P.s1 - P.s0);
        const double x0 = (sigma - mid) / half;
        // smooth part: g + log|s - sigma| = log|1 - z conj(w)| - log(|w - z| / |s - sigma|)
        std::vector<double> smooth(p);
        for (int k = 0; k < p; ++k) {
            double ds = std::abs(P.s[k] - sigma);
            double ratio;
            if (ds < 1e-13) {
                ratio = abs(P.dzds[k]);
            } else {
                ratio = abs(P.z[k] - zt) / ds;
            }
            smooth[k] = std::log(abs(cxd(1, 0) - zt * conj(P.z[k]))) - std::log(ratio);
        }
        // exact moments of -log|s - sigma| against Lagrange basis
        // int_P l_k(s)(-log|s-sigma|) ds = -half * [ log(half) * int l_k dx + I(l_k, x0) ]
        std::vector<double> mono_mom(p);
        for (int j = 0; j < p; ++j) mono_mom[j] = quadr::log_moment(j, x0);
        for (int k = 0; k < p; ++k) {
            double lagint = 0, logint = 0;
            for (int j = 0; j < p; ++j) {
                double c = lag2mono(std::size_t(j), std::size_t(k));
                lagint += c * (j % 2 == 0 ? 2.0 / (j + 1) : 0.0);
                logint += c * mono_mom[j];
            }
            double w_log = -half * (std::log(half) * lagint + logint);
            row[P.offset + std::size_t(k)] += P.w[std::size_t(k)] * smooth[std::size_t(k)] + w_log;
        }
    }

    void add_far_or_adaptive(const Panel& P, const cxd& z, std::vector<double>& row) const {
        // physical distance of the target to the panel
        double d = std::numeric_limits<double>::infinity();
        for (const auto& q : P.z) d = std::min(d, abs(q - z));
        double plen = abs(P.z.front() - P.z.back()) + 1e-30;
        if (d > 1.2 * plen) {
            for (std::size_t k = 0; k < P.s.size(); ++k)
                row[P.offset + k] += P.w[k] * kernel(z, P.z[k]);
            return;
        }
        // adaptive Gauss against the panel's Lagrange basis
        const int p = int(P.s.size());
        std::vector<double> acc(std::size_t(p), 0.0);
        adaptive_lagrange(P, z, P.s0, P.s1, acc, 0);
        for (int k = 0; k < p; ++k) row[P.offset + std::size_t(k)] += acc[std::size_t(k)];
    }

    void adaptive_lagrange(const Panel& P, const cxd& z, double a, double b,
                           std::vector<double>& acc, int depth) const {
        const int p = int(P.s.size());
        auto estimate = [&](double lo, double hi, std::vector<double>& out) {
            out.assign(std::size_t(p), 0.0);
            for (int g = 0; g < int(rule.x.size()); ++g) {
                double s = 0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.x[std::size_t(g)];
                double wq = 0.5 * (hi - lo) * rule.w[std::size_t(g)];
                cxd w = arc_point(P.arc, s);
                double kv = kernel(z, w);
                // Lagrange basis of the panel nodes at s
                for (int k = 0; k < p; ++k) {
                    double l = 1;
                    for (int j = 0; j < p; ++j) {
                        if (j == k) continue;
                        l *= (s - P.s[std::size_t(j)]) / (P.s[std::size_t(k)] - P.s[std::size_t(j)]);
                    }
                    out[std::size_t(k)] += wq * kv * l;
                }
            }
        };
        std::vector<double> whole, left, right;
        estimate(a, b, whole);
        double m = 0.5 * (a + b);
        estimate(a, m, left);
        estimate(m, b, right);
        double diff = 0, scale = 0;
        for (int k = 0; k < p; ++k) {
            diff = std::max(diff, std::abs(whole[std::size_t(k)] - left[std::size_t(k)] - right[std::size_t(k)]));
            scale = std::max(scale, std::abs(left[std::size_t(k)]) + std::abs(right[std::size_t(k)]));
        }
        if (depth >= 14 || diff < 1e-13 * (1.0 + scale)) {
            for (int k = 0; k < p; ++k) acc[std::size_t(k)] += left[std::size_t(k)] + right[std::size_t(k)];
            return;
        }
        adaptive_lagrange(P, z, a, m, acc, depth + 1);
        adaptive_lagrange(P, z, m, b, acc, depth + 1);
    }
};

struct CapacityResult {
    double capacity = 0;            // from the fine solve
    double capacity_extrapolated = 0;
    double cap_error_estimate = 0;
    double level = 0;               // F = 1/capacity
    double residual_abs = 0;        // max |potential - F| on verification points
    double residual_rel = 0;
    DiscreteMeasure measure;
    std::shared_ptr<EquilibriumSolution> solution;
};

namespace detail_eq {

inline std::shared_ptr<EquilibriumSolution> solve_once(const ArcChain& chain,
                                                       const EquilibriumParams& prm) {
    auto sol = std::make_shared<EquilibriumSolution>();
    sol->chain = chain;
    sol->prm = prm;
    sol->rule = quadr::gauss_legendre(prm.order);

    // Lagrange -> monomial conversion on the reference panel
    const int p = prm.order;
    Matrix<double> V{std::size_t(p), std::size_t(p)};
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) V(std::size_t(i), std::size_t(j)) = std::pow(sol->rule.x[std::size_t(i)], j);
    // columns of lag2mono: monomial coefficients of each Lagrange basis,
    // i.e. solutions of sum_j m_j x_i^j = delta_{ik}
    sol->lag2mono = Matrix<double>(std::size_t(p), std::size_t(p));
    for (int k = 0; k < p; ++k) {
        std::vector<double> e(std::size_t(p), 0.0);
        e[std::size_t(k)] = 1.0;
        std::vector<double> c = lu_solve(V, e);
        for (int j = 0; j < p; ++j) sol->lag2mono(std::size_t(j), std::size_t(k)) = c[std::size_t(j)];
    }

    // panel layout
    for (std::size_t ai = 0; ai < chain.arcs.size(); ++ai) {
        std::vector<double> bounds;
        if (chain.arcs[ai].closed()) {
            int B = prm.circle_panels;
            for (int i = 0; i <= B; ++i) bounds.push_back(double(i) / B);
        } else {
            int B = prm.base_panels, L = prm.refine_levels;
            double h = 1.0 / B;
            bounds.push_back(0.0);
            for (int l = L; l >= 1; --l) bounds.push_back(h * std::pow(0.5, l));
            for (int i = 1; i < B; ++i) bounds.push_back(h * i);
            for (int l = 1; l <= L; ++l) bounds.push_back(1.0 - h * std::pow(0.5, l));
            bounds.push_back(1.0);
            // the quartic grading compresses boundaries near the ends; drop
            // interior boundaries whose physical spacing from the last kept
            // boundary or from either arc end has degenerated
            const Arc& arc = chain.arcs[ai];
            cxd end0 = arc.point(0.0), end1 = arc.point(1.0);
            std::vector<double> kept{0.0};
            for (std::size_t i = 1; i + 1 < bounds.size(); ++i) {
                cxd pb = arc.point(quadr::grade(bounds[i]));
                cxd pl = arc.point(quadr::grade(kept.back()));
                if (abs(pb - pl) > 1e-8 && abs(pb - end0) > 1e-8 && abs(pb - end1) > 1e-8)
                    kept.push_back(bounds[i]);
            }
            kept.push_back(1.0);
            bounds = std::move(kept);
        }
        for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
            EquilibriumSolution::Panel P;
            P.arc = ai;
            P.s0 = bounds[b];
            P.s1 = bounds[b + 1];
            P.offset = sol->node_count();
            double mid = 0.5 * (P.s0 + P.s1), half = 0.5 * (P.s1 - P.s0);
            for (int g = 0; g < p; ++g) {
                double s = mid + half * sol->rule.x[std::size_t(g)];
                P.s.push_back(s);
                P.w.push_back(half * sol->rule.w[std::size_t(g)]);
                P.z.push_back(sol->arc_point(ai, s));
                P.dzds.push_back(sol->arc_dzds(ai, s));
            }
            sol->panels.push_back(std::move(P));
        }
    }

    const std::size_t m = sol->node_count();
    Matrix<double> A(m + 1, m + 1);
    std::vector<double> rhs(m + 1, 0.0);
    std::vector<double> row(m);
    for (const auto& P : sol->panels) {
        for (std::size_t k = 0; k < P.s.size(); ++k) {
            std::size_t i = P.offset + k;
            std::fill(row.begin(), row.end(), 0.0);
            sol->assemble_row_on(P.arc, P.s[k], P.z[k], row);
            for (std::size_t j = 0; j < m; ++j) A(i, j) = row[j];
            A(i, m) = -1.0;  // -F
            rhs[i] = 0.0;
        }
    }
    for (const auto& P : sol->panels)
        for (std::size_t k = 0; k < P.s.size(); ++k) A(m, P.offset + k) = P.w[k];
    A(m, m) = 0.0;
    rhs[m] = 1.0;

    std::vector<double> x = lu_solve(std::move(A), std::move(rhs));
    sol->phi.assign(x.begin(), x.begin() + long(m));
    sol->level = x[m];
    if (!(sol->level > 0)) throw numeric_error("equilibrium: nonpositive potential level");
    sol->capacity = 1.0 / sol->level;
    return sol;
}

}  // namespace detail_eq

inline CapacityResult equilibrium(const ArcChain& chain, EquilibriumParams prm = {}) {
    if (chain.empty()) throw domain_error("equilibrium: empty chain");
    if (chain.total_length(256) < 1e-8)
        throw domain_error("equilibrium: degenerate chain (capacity tends to zero)");
    for (const auto& a : chain.arcs) {
        for (int i = 0; i <= 32; ++i)
            if (abs(a.point(i / 32.0)) >= 1.0 - 1e-9)
                throw domain_error("equilibrium: chain must stay inside the open disk");
    }

    auto fine = detail_eq::solve_once(chain, prm);
    EquilibriumParams coarse = prm;
    coarse.order = std::max(4, prm.order - 3);
    coarse.base_panels = std::max(2, prm.base_panels - 2);
    coarse.refine_levels = std::max(3, prm.refine_levels - 3);
    coarse.circle_panels = std::max(6, prm.circle_panels - 4);
    auto rough = detail_eq::solve_once(chain, coarse);

    CapacityResult out;
    out.solution = fine;
    out.level = fine->level;
    out.capacity = fine->capacity;
    double diff = fine->capacity - rough->capacity;
    out.capacity_extrapolated = fine->capacity + diff / 15.0;  // order-4 Richardson guard
    out.cap_error_estimate = std::abs(diff) / 15.0 + 1e-14;

    // tiny negative weights are discretization noise; clamp and renormalize
    DiscreteMeasure mu = fine->measure();
    for (double& w : mu.weights) {
        if (w < -1e-10) throw numeric_error("equilibrium: negative Nyström weight");
        if (w < 0) w = 0;
    }
    double mass = mu.total_mass();
    for (double& w : mu.weights) w /= mass;
    out.measure = std::move(mu);

    // residual on staggered verification points
    double resid = 0;
    for (const auto& P : fine->panels) {
        for (double frac : {0.23, 0.52, 0.81}) {
            double s = P.s0 + frac * (P.s1 - P.s0);
            double u = fine->potential_on(P.arc, s);
            resid = std::max(resid, std::abs(u - fine->level));
        }
    }
    out.residual_abs = resid;
    out.residual_rel = resid / fine->level;
    return out;
}

// ---------------------------------------------------------------------------
// Balayage onto the unit circle: the swept measure has density
// sum_j w_j P(z_j, theta) against dtheta/2pi (Poisson kernel), returned as
// masses on a uniform angular grid with the total mass preserved exactly.
// ---------------------------------------------------------------------------

struct CircleMeasure {
    std::vector<double> theta;   // uniform grid on [0, 2pi)
    std::vector<double> mass;    // quadrature masses, sum = input mass
    std::vector<double> density; // d mu / (dtheta/2pi)

    DiscreteMeasure as_discrete() const {
        DiscreteMeasure mu;
        for (std::size_t i = 0; i < theta.size(); ++i) {
            mu.points.push_back(cxd(std::cos(theta[i]), std::sin(theta[i])));
            mu.weights.push_back(mass[i]);
        }
        return mu;
    }
};

inline CircleMeasure balayage_to_circle(const DiscreteMeasure& mu, std::size_t grid = 1024) {
    for (const auto& p : mu.points)
        if (!(abs(p) < 1.0)) throw domain_error("balayage_to_circle: support must be inside D");
    CircleMeasure out;
    out.theta.resize(grid);
    out.mass.assign(grid, 0.0);
    out.density.assign(grid, 0.0);
    const double twopi = 2 * 3.14159265358979323846;
    for (std::size_t i = 0; i < grid; ++i) {
        out.theta[i] = twopi * double(i) / double(grid);
        cxd zt(std::cos(out.theta[i]), std::sin(out.theta[i]));
        double dens = 0;
        for (std::size_t j = 0; j < mu.points.size(); ++j) {
            double num = 1.0 - norm(mu.points[j]);
            double den = norm(zt - mu.points[j]);
            dens += mu.weights[j] * num / den;
        }
        out.density[i] = dens;
        out.mass[i] = dens / double(grid);
    }
    double total = 0;
    for (double m : out.mass) total += m;
    double want = mu.total_mass();
    if (total > 0)
        for (double& m : out.mass) m *= want / total;  // exact mass preservation
    return out;
}

// ---------------------------------------------------------------------------
// Fekete/Leja points and lemniscates
// ---------------------------------------------------------------------------

struct FeketeResult {
    std::vector<cxd> points;
    Poly<double> monic;  // prod (z - p_i)
};

inline FeketeResult fekete_points(const std::vector<cxd>& cloud, std::size_t k) {
    if (cloud.size() < k) throw domain_error("fekete_points: k larger than the cloud");
    FeketeResult out;
    std::vector<bool> used(cloud.size(), false);
    // first point: endpoint of a diameter (greedy Leja start)
    std::size_t first = 0;
    double best = -1;
    for (std::size_t i = 0; i < cloud.size(); ++i)
        for (std::size_t j = 0; j < cloud.size(); ++j) {
            double d = abs(cloud[i] - cloud[j]);
            if (d > best) { best = d; first = i; }
        }
    used[first] = true;
    out.points.push_back(cloud[first]);
    while (out.points.size() < k) {
        std::size_t pick = 0;
        double bp = -1;
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            if (used[i]) continue;
            double v = 0;
            for (const auto& q : out.points) v += std::log(abs(cloud[i] - q) + 1e-300);
            if (v > bp) { bp = v; pick = i; }
        }
        used[pick] = true;
        out.points.push_back(cloud[pick]);
    }
    std::vector<cxd> roots = out.points;
    out.monic = poly_from_roots(roots);
    return out;
}

// open set {|p_k| < eta^k}
inline std::function<bool(const cxd&)> lemniscate_level(const Poly<double>& monic, double eta) {
    std::size_t k = monic.size() - 1;
    double thr = std::pow(eta, double(k));
    return [monic, thr](const cxd& z) { return abs(poly_eval(monic, z)) < thr; };
}

// ---------------------------------------------------------------------------
// Möbius transport of chains (conformal-invariance tests, cut construction)
// ---------------------------------------------------------------------------

inline ArcChain transport_chain(const ArcChain& chain, const Mobius& m) {
    ArcChain out;
    for (const auto& a : chain.arcs) {
        if (a.kind == Arc::Kind::line) {
            out.arcs.push_back(Arc::mobius_segment(compose(m, a.map), a.w0, a.w1, a.bulge));
        } else {
            // image of a circle under a Möbius map is a circle; recover it
            cxd p1 = m.apply(a.point(0.0)), p2 = m.apply(a.point(1.0 / 3)), p3 = m.apply(a.point(2.0 / 3));
            // circumcenter of p1 p2 p3
            cxd d1 = p2 - p1, d2 = p3 - p1;
            double a11 = 2 * d1.re, a12 = 2 * d1.im;
            double a21 = 2 * d2.re, a22 = 2 * d2.im;
            double b1 = norm(p2) - norm(p1), b2 = norm(p3) - norm(p1);
            double det = a11 * a22 - a12 * a21;
            if (std::abs(det) < 1e-14) throw numeric_error("transport_chain: degenerate circle image");
            cxd center((b1 * a22 - b2 * a12) / det, (a11 * b2 - a21 * b1) / det);
            out.arcs.push_back(Arc::circle(center, abs(p1 - center)));
        }
    }
    for (const auto& j : chain.junctions) out.junctions.push_back(m.apply(j));
    return out;
}

}  // namespace merolab
