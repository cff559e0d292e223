// cuts.hpp — minimal-Greenian-capacity cuts for the catalog.
//
// Two branch points: the extremal cut is the hyperbolic geodesic between
// them, realized as the Möbius preimage of a symmetric real segment [-r, r];
// r is fixed by the pseudo-hyperbolic distance of the pair. Three branch
// points: the cut is sought in the one-parameter family of tripods whose
// arms are hyperbolic geodesics from a junction v to the branch points, with
// v chosen by derivative-free capacity minimization. Optimality is reported
// through two numerical certificates: the compass/bowing perturbation margin
// and the S-property residual (equality of one-sided normal derivatives of
// the equilibrium potential along the cut).

#pragma once

#include "elliptic.hpp"
#include "potential.hpp"

namespace merolab {

struct CutSolution {
    ArcChain chain;
    CapacityResult capacity;
    Mobius transport;           // chain -> model frame; for two-point cuts the
                                // model cut is the segment [-model_r, model_r]
    double model_r = 0;
    std::vector<cxd> endpoints; // branch points in the original frame
    bool has_junction = false;
    cxd junction;
    double perturbation_margin = 0;  // min capacity increase over the battery
    double symmetry_residual = -1;   // S-property residual (filled on request)
    std::vector<std::string> warnings;
};

// ---------------------------------------------------------------------------

inline double s_property_residual(const CutSolution& sol);

inline CutSolution geodesic_cut(const cxd& a, const cxd& b,
                                EquilibriumParams prm = fine_params()) {
    if (abs(a - b) < 1e-12) throw domain_error("geodesic_cut: coincident points");
    for (const cxd& p : {a, b})
        if (!(abs(p) < 0.95)) throw domain_error("geodesic_cut: points must satisfy |z| < 1 - margin");
    SymmetricPairMap pm = symmetric_pair_map(a, b);
    CutSolution out;
    out.transport = pm.m;
    out.model_r = pm.r;
    out.endpoints = {a, b};
    out.chain.arcs.push_back(
        Arc::mobius_segment(pm.m.inverse(), cxd(-pm.r, 0), cxd(pm.r, 0)));
    out.capacity = equilibrium(out.chain, prm);
    out.symmetry_residual = s_property_residual(out);
    return out;
}

// Bowed competitor through the same endpoints (model-plane quadratic bulge).
inline ArcChain bowed_chain(const cxd& a, const cxd& b, double bulge) {
    SymmetricPairMap pm = symmetric_pair_map(a, b);
    ArcChain c;
    c.arcs.push_back(Arc::mobius_segment(pm.m.inverse(), cxd(-pm.r, 0), cxd(pm.r, 0), bulge));
    return c;
}

inline ArcChain polyline_chain(const cxd& a, const cxd& via, const cxd& b) {
    ArcChain c;
    c.arcs.push_back(Arc::segment(a, via));
    c.arcs.push_back(Arc::segment(via, b));
    c.junctions.push_back(via);
    return c;
}

// ---------------------------------------------------------------------------
// Tripods
// ---------------------------------------------------------------------------

namespace detail_cut {

inline ArcChain tripod_chain(const cxd& v, const cxd& a, const cxd& b, const cxd& c) {
    ArcChain chain;
    chain.arcs.push_back(geodesic_arc(v, a));
    chain.arcs.push_back(geodesic_arc(v, b));
    chain.arcs.push_back(geodesic_arc(v, c));
    chain.junctions.push_back(v);
    return chain;
}

// Nelder–Mead in the plane with one restart.
template <typename F>
std::pair<cxd, double> nelder_mead_2d(F f, cxd start, double scale, double tol, int max_iter) {
    auto run = [&](cxd s0, double h) {
        std::vector<cxd> x{s0, s0 + cxd(h, 0), s0 + cxd(0, h)};
        std::vector<double> v{f(x[0]), f(x[1]), f(x[2])};
        for (int it = 0; it < max_iter; ++it) {
            // order best..worst
            for (int i = 0; i < 2; ++i)
                for (int j = i + 1; j < 3; ++j)
                    if (v[j] < v[i]) { std::swap(v[i], v[j]); std::swap(x[i], x[j]); }
            if (std::abs(v[2] - v[0]) < tol) break;
            cxd centroid = 0.5 * (x[0] + x[1]);
            cxd xr = centroid + (centroid - x[2]);
            double vr = f(xr);
            if (vr < v[0]) {
                cxd xe = centroid + 2.0 * (centroid - x[2]);
                double ve = f(xe);
                if (ve < vr) { x[2] = xe; v[2] = ve; } else { x[2] = xr; v[2] = vr; }
            } else if (vr < v[1]) {
                x[2] = xr;
                v[2] = vr;
            } else {
                cxd xc = centroid + 0.5 * (x[2] - centroid);
                double vc = f(xc);
                if (vc < v[2]) { x[2] = xc; v[2] = vc; }
                else {
                    x[1] = x[0] + 0.5 * (x[1] - x[0]);
                    x[2] = x[0] + 0.5 * (x[2] - x[0]);
                    v[1] = f(x[1]);
                    v[2] = f(x[2]);
                }
            }
        }
        for (int i = 0; i < 2; ++i)
            for (int j = i + 1; j < 3; ++j)
                if (v[j] < v[i]) { std::swap(v[i], v[j]); std::swap(x[i], x[j]); }
        return std::make_pair(x[0], v[0]);
    };
    auto [x1, v1] = run(start, scale);
    auto [x2, v2] = run(x1, scale * 0.15);  // restart with a tighter simplex
    return v2 < v1 ? std::make_pair(x2, v2) : std::make_pair(x1, v1);
}

}  // namespace detail_cut

inline CutSolution tripod_cut(const cxd& a, const cxd& b, const cxd& c,
                              EquilibriumParams prm = fine_params(),
                              bool certify = true) {
    for (const cxd& p : {a, b, c})
        if (!(abs(p) < 0.95)) throw domain_error("tripod_cut: points must satisfy |z| < 1 - margin");
    if (abs(a - b) < 1e-10 || abs(a - c) < 1e-10 || abs(b - c) < 1e-10)
        throw domain_error("tripod_cut: points must be distinct");

    // collinear degeneracy: one point on the geodesic of the other two
    struct Perm { cxd mid, p, q; };
    for (const Perm& perm : {Perm{a, b, c}, Perm{b, a, c}, Perm{c, a, b}}) {
        ArcChain geo;
        SymmetricPairMap pm = symmetric_pair_map(perm.p, perm.q);
        geo.arcs.push_back(Arc::mobius_segment(pm.m.inverse(), cxd(-pm.r, 0), cxd(pm.r, 0)));
        if (geo.distance(perm.mid) < 1e-5) {
            CutSolution out;
            out.warnings.push_back("collinear configuration: tripod degenerates to a two-arc chain");
            out.endpoints = {a, b, c};
            out.chain.arcs.push_back(geodesic_arc(perm.mid, perm.p));
            out.chain.arcs.push_back(geodesic_arc(perm.mid, perm.q));
            out.chain.junctions.push_back(perm.mid);
            out.has_junction = true;
            out.junction = perm.mid;
            out.capacity = equilibrium(out.chain, prm);
            out.transport = Mobius::identity();
            return out;
        }
    }

    EquilibriumParams search = coarse_params();
    auto objective = [&](const cxd& v) {
        if (abs(v) > 0.97) return 1e6 + abs(v);
        double dmin = std::min({abs(v - a), abs(v - b), abs(v - c)});
        if (dmin < 1e-5) return 1e6 + 1.0 / (dmin + 1e-9);
        try {
            return equilibrium(detail_cut::tripod_chain(v, a, b, c), search).capacity;
        } catch (const std::exception&) {
            return 1e6;
        }
    };
    cxd centroid = (a + b + c) / 3.0;
    auto [v_opt, cap_coarse] = detail_cut::nelder_mead_2d(objective, centroid, 0.08, 1e-6, 120);
    (void)cap_coarse;

    CutSolution out;
    out.endpoints = {a, b, c};
    out.has_junction = true;
    out.junction = v_opt;
    out.chain = detail_cut::tripod_chain(v_opt, a, b, c);
    out.capacity = equilibrium(out.chain, prm);
    out.transport = Mobius::identity();

    if (certify) {
        // compass perturbations of the junction plus arm-bowing perturbations
        double margin = std::numeric_limits<double>::infinity();
        const double h = 1e-3;
        for (int k = 0; k < 8; ++k) {
            double th = 3.14159265358979323846 * k / 4.0;
            cxd vp = v_opt + cxd(h * std::cos(th), h * std::sin(th));
            double capp = equilibrium(detail_cut::tripod_chain(vp, a, b, c), prm).capacity;
            margin = std::min(margin, capp - out.capacity.capacity);
        }
        for (double bulge : {0.03, -0.03}) {
            ArcChain bent = out.chain;
            for (std::size_t i = 0; i < bent.arcs.size(); ++i) {
                ArcChain one = out.chain;
                one.arcs[i].bulge = bulge;
                double capp = equilibrium(one, prm).capacity;
                margin = std::min(margin, capp - out.capacity.capacity);
            }
        }
        out.perturbation_margin = margin;
        if (margin < -out.capacity.cap_error_estimate - 1e-9)
            out.warnings.push_back("perturbation certificate violated; junction may not be optimal");
        out.symmetry_residual = s_property_residual(out);
    }
    return out;
}

// ---------------------------------------------------------------------------
// S-property residual: max over interior arc samples of the mismatch of the
// one-sided normal derivatives of the equilibrium potential, normalized by
// the derivative scale. Finite differences at offset h_fd = 1e-3 * local
// arclength scale.
// ---------------------------------------------------------------------------

inline double s_property_residual(const CutSolution& sol) {
    const auto& es = sol.capacity.solution;
    if (!es) throw domain_error("s_property_residual: missing equilibrium solution");
    double num = 0, den = 0;
    for (std::size_t ai = 0; ai < sol.chain.arcs.size(); ++ai) {
        for (double t : {0.25, 0.35, 0.45, 0.55, 0.65, 0.75}) {
            // graded parameter of the solver's frame
            cxd z = es->arc_point(ai, t);
            cxd tan = es->arc_dzds(ai, t);
            double speed = abs(tan);
            if (speed == 0) continue;
            cxd n = cxd(0, 1) * tan / speed;
            double h = 1e-3 * sol.chain.total_length(128) / double(sol.chain.arcs.size());
            double u0 = es->potential_on(ai, t);
            double up = es->potential(z + h * n);
            double um = es->potential(z - h * n);
            double dplus = (u0 - up) / h;   // decay rate toward the + side
            double dminus = (u0 - um) / h;  // decay rate toward the - side
            num = std::max(num, std::abs(dplus - dminus));
            den = std::max(den, std::max(std::abs(dplus), std::abs(dminus)));
        }
    }
    return den > 0 ? num / den : 0.0;
}

}  // namespace merolab
