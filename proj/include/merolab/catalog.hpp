// catalog.hpp — the corpus of admissible test functions and their Fourier
// data on the unit circle.
//
// Every member is analytic and single-valued on |z| >= 1 with f(inf) = 0 and
// f(z) ~ c/z at infinity. Members with branch points (two_branch_sqrt,
// three_branch_cuberoot) are normalized by the principal-root product
//     f(z) = 1 / ( z * prod_i (1 - a_i/z)^{1/q} ),
// which is single-valued and analytic for |z| > max_i |a_i|, and are
// continued into the disk off a declared cut by branch tracking along paths
// that avoid the cut. Negative-index Fourier coefficients are extracted by
// the trapezoidal rule on a circle between the singularities and T; the node
// count is driven by the geometric aliasing bound, so the rule is accurate
// to the certified tail.

#pragma once

#include <random>

#include "arcs.hpp"
#include "kvdoc.hpp"

namespace merolab {

enum class FunctionKind {
    rational_pole_sum,
    two_branch_sqrt,
    three_branch_cuberoot,
    essential_exp,
    custom_coeff_stream,
};

inline std::string kind_name(FunctionKind k) {
    switch (k) {
        case FunctionKind::rational_pole_sum: return "rational_pole_sum";
        case FunctionKind::two_branch_sqrt: return "two_branch_sqrt";
        case FunctionKind::three_branch_cuberoot: return "three_branch_cuberoot";
        case FunctionKind::essential_exp: return "essential_exp";
        case FunctionKind::custom_coeff_stream: return "custom_coeff_stream";
    }
    return "?";
}

inline FunctionKind kind_from_name(const std::string& s) {
    if (s == "rational_pole_sum") return FunctionKind::rational_pole_sum;
    if (s == "two_branch_sqrt") return FunctionKind::two_branch_sqrt;
    if (s == "three_branch_cuberoot") return FunctionKind::three_branch_cuberoot;
    if (s == "essential_exp") return FunctionKind::essential_exp;
    if (s == "custom_coeff_stream") return FunctionKind::custom_coeff_stream;
    throw config_error("unknown function kind: " + s);
}

struct AnalyticFunctionSpec {
    FunctionKind kind = FunctionKind::rational_pole_sum;
    std::vector<cxd> branch_points;        // modulus < 1 - margin
    std::vector<cxd> polar_points;         // modulus < 1 - margin (essential class)
    std::vector<cxd> parameters;           // residues / exponent weights / raw coefficients
    std::string normalization = "inverse_linear";  // f(z) ~ c/z at infinity
    double margin = 0.05;

    void validate() const {
        auto check_inside = [&](const cxd& p, const char* what) {
            if (!(abs(p) < 1.0 - margin))
                throw domain_error(std::string(what) + " not strictly inside |z| < 1 - margin");
        };
        for (const auto& p : branch_points) check_inside(p, "branch point");
        for (const auto& p : polar_points) check_inside(p, "polar singular point");
        for (std::size_t i = 0; i < branch_points.size(); ++i)
            for (std::size_t j = i + 1; j < branch_points.size(); ++j)
                if (abs(branch_points[i] - branch_points[j]) < 1e-12)
                    throw domain_error("coincident branch points");
        switch (kind) {
            case FunctionKind::rational_pole_sum:
                if (polar_points.empty() || parameters.size() != polar_points.size())
                    throw domain_error("rational_pole_sum: needs poles with matching residues");
                break;
            case FunctionKind::two_branch_sqrt:
                if (branch_points.size() != 2) throw domain_error("two_branch_sqrt: needs 2 branch points");
                break;
            case FunctionKind::three_branch_cuberoot:
                if (branch_points.size() != 3)
                    throw domain_error("three_branch_cuberoot: needs 3 branch points");
                break;
            case FunctionKind::essential_exp:
                if (polar_points.empty() || !branch_points.empty())
                    throw domain_error("essential_exp: needs >=1 polar point and no branch points");
                if (!parameters.empty() && parameters.size() != polar_points.size())
                    throw domain_error("essential_exp: weights must match polar points");
                break;
            case FunctionKind::custom_coeff_stream:
                if (parameters.empty()) throw domain_error("custom_coeff_stream: needs coefficients");
                break;
        }
        if (normalization != "inverse_linear")
            throw domain_error("unknown normalization rule: " + normalization);
    }

    int root_order() const {
        return kind == FunctionKind::two_branch_sqrt ? 2
             : kind == FunctionKind::three_branch_cuberoot ? 3 : 1;
    }

    double max_singular_modulus() const {
        double m = 0;
        for (const auto& p : branch_points) m = std::max(m, abs(p));
        for (const auto& p : polar_points) m = std::max(m, abs(p));
        return m;
    }
    bool in_polar_class() const {
        return kind == FunctionKind::essential_exp || kind == FunctionKind::rational_pole_sum;
    }

    KvDoc to_doc() const {
        KvDoc d;
        d.set("kind", kind_name(kind));
        d.set_complex_list("branch_points", branch_points);
        d.set_complex_list("polar_points", polar_points);
        d.set_complex_list("parameters", parameters);
        d.set("normalization", normalization);
        d.set_double("margin", margin);
        return d;
    }
    static AnalyticFunctionSpec from_doc(const KvDoc& d) {
        AnalyticFunctionSpec s;
        s.kind = kind_from_name(d.get("kind"));
        s.branch_points = d.get_complex_list("branch_points");
        s.polar_points = d.get_complex_list("polar_points");
        s.parameters = d.get_complex_list("parameters");
        s.normalization = d.get_or("normalization", "inverse_linear");
        s.margin = d.get_double_or("margin", 0.05);
        s.validate();
        return s;
    }

    static AnalyticFunctionSpec single_pole(cxd a, cxd residue = cxd(1, 0)) {
        AnalyticFunctionSpec s;
        s.kind = FunctionKind::rational_pole_sum;
        s.polar_points = {a};
        s.parameters = {residue};
        return s;
    }
    static AnalyticFunctionSpec two_branch(cxd a, cxd b) {
        AnalyticFunctionSpec s;
        s.kind = FunctionKind::two_branch_sqrt;
        s.branch_points = {a, b};
        return s;
    }
    static AnalyticFunctionSpec three_branch(cxd a, cxd b, cxd c) {
        AnalyticFunctionSpec s;
        s.kind = FunctionKind::three_branch_cuberoot;
        s.branch_points = {a, b, c};
        return s;
    }
    static AnalyticFunctionSpec essential(cxd a, cxd weight = cxd(1, 0)) {
        AnalyticFunctionSpec s;
        s.kind = FunctionKind::essential_exp;
        s.polar_points = {a};
        s.parameters = {weight};
        return s;
    }
};

namespace detail {

// Principal q-th root branch of the product prod (1 - a_i/z): analytic and
// -> 1 for |z| > max|a_i|. This realizes the normalized branch on A.
template <typename R>
Cx<R> outer_root_factor(const AnalyticFunctionSpec& spec, const Cx<R>& z) {
    const R one(1);
    Cx<R> acc(one);
    const int q = spec.root_order();
    for (const auto& bp : spec.branch_points) {
        Cx<R> w = one - cx_of<R>(bp) / z;
        // principal q-th root; w stays in the right half plane here
        Cx<R> lw = log(w);
        acc *= exp(lw / R(q));
    }
    return acc;
}

template <typename R>
Cx<R> eval_outer(const AnalyticFunctionSpec& spec, const Cx<R>& z) {
    switch (spec.kind) {
        case FunctionKind::rational_pole_sum: {
            Cx<R> s;
            for (std::size_t j = 0; j < spec.polar_points.size(); ++j)
                s += cx_of<R>(spec.parameters[j]) / (z - cx_of<R>(spec.polar_points[j]));
            return s;
        }
        case FunctionKind::two_branch_sqrt:
        case FunctionKind::three_branch_cuberoot:
            return Cx<R>(R(1)) / (z * outer_root_factor(spec, z));
        case FunctionKind::essential_exp: {
            Cx<R> s;
            for (std::size_t j = 0; j < spec.polar_points.size(); ++j) {
                Cx<R> w = spec.parameters.empty() ? Cx<R>(R(1)) : cx_of<R>(spec.parameters[j]);
                s += exp(w / (z - cx_of<R>(spec.polar_points[j]))) - R(1);
            }
            return s;
        }
        case FunctionKind::custom_coeff_stream: {
            Cx<R> s;
            Cx<R> zi = Cx<R>(R(1)) / z, p = zi;
            for (const auto& c : spec.parameters) {
                s += cx_of<R>(c) * p;
                p *= zi;
            }
            return s;
        }
    }
    throw domain_error("eval_outer: bad kind");
}

// P(z) = prod (z - a_i); the tracked branch satisfies s^q = P.
template <typename R>
Cx<R> branch_product(const AnalyticFunctionSpec& spec, const Cx<R>& z) {
    Cx<R> p(R(1));
    for (const auto& bp : spec.branch_points) p *= (z - cx_of<R>(bp));
    return p;
}

// Track s(t)^q = P(z(t)) continuously along a polyline; returns s at the end.
inline cxd track_branch(const AnalyticFunctionSpec& spec, const std::vector<cxd>& path, cxd s0) {
    const int q = spec.root_order();
    const double twopi = 2 * 3.14159265358979323846;
    cxd s = s0;
    for (std::size_t leg = 0; leg + 1 < path.size(); ++leg) {
        cxd a = path[leg], b = path[leg + 1];
        double t = 0;
        cxd pcur = branch_product(spec, a);
        while (t < 1.0) {
            double dt = 1.0 / 16;
            for (;;) {
                double tn = std::min(1.0, t + dt);
                cxd pn = branch_product(spec, a + tn * (b - a));
                if (abs(pn - pcur) <= 0.25 * abs(pcur) || dt < 1e-9) {
                    // nearest q-th root of pn to s
                    double mag = std::pow(abs(pn), 1.0 / q);
                    double base = arg(pn) / q;
                    cxd best;
                    double bd = std::numeric_limits<double>::infinity();
                    for (int k = 0; k < q; ++k) {
                        cxd cand = polar_cx(mag, base + twopi * k / q);
                        double d = abs(cand - s);
                        if (d < bd) { bd = d; best = cand; }
                    }
                    s = best;
                    pcur = pn;
                    t = tn;
                    break;
                }
                dt *= 0.5;
            }
        }
    }
    return s;
}

// Minimum distance from segment [a,b] to a dense sample cloud of the chain,
// by sphere marching: the step along the segment never exceeds the current
// clearance, so a crossing cannot slip between samples. Accurate to about
// half the cloud spacing, which the router's clearances stay well above.
inline double segment_chain_distance(const cxd& a, const cxd& b, const ArcChain& chain,
                                     const std::vector<cxd>& cloud) {
    (void)chain;
    const double L = abs(b - a);
    cxd dir = L > 0 ? (b - a) / L : cxd(0, 0);
    double best = std::numeric_limits<double>::infinity();
    double t = 0;
    const double floor_step = 1e-4;
    for (;;) {
        cxd p = a + t * dir;
        double d = std::numeric_limits<double>::infinity();
        for (const auto& c : cloud) d = std::min(d, abs(p - c));
        best = std::min(best, d);
        if (best < floor_step || t >= L) break;
        t = std::min(L, t + std::max(0.8 * d, floor_step));
    }
    return best;
}

// Route a polyline from `from` to `to` that stays clear of the chain.
// For a single unbowed Möbius-segment chain (every geodesic cut) the route is
// built in the model plane, where the cut is the real segment [-r, r]; the
// generic fallback is a small visibility graph over ring waypoints.
inline std::vector<cxd> route_path(const cxd& from, const cxd& to, const ArcChain& chain,
                                   double clearance) {
    if (chain.empty()) return {from, to};
    const std::vector<cxd> cloud = chain.sample(2048);

    if (segment_chain_distance(from, to, chain, cloud) > clearance) return {from, to};

    if (chain.arcs.size() == 1 && chain.arcs[0].kind == Arc::Kind::line &&
        chain.arcs[0].bulge == 0.0) {
        const Arc& a = chain.arcs[0];
        Mobius fwd = a.map.inverse();
        cxd u0 = fwd.apply(from), u1 = fwd.apply(to);
        // model cut is the straight segment [w0, w1]; rotate/scale it onto
        // the real axis
        cxd mid = 0.5 * (a.w0 + a.w1), half = 0.5 * (a.w1 - a.w0);
        auto tom = [&](const cxd& w) { return (w - mid) / half; };  // cut -> [-1, 1]
        auto fromm = [&](const cxd& w) { return mid + w * half; };
        cxd v0 = tom(u0), v1 = tom(u1);
        double H = 1.75;
        double side = v1.im != 0.0 ? (v1.im > 0 ? 1.0 : -1.0) : (v0.im >= 0 ? 1.0 : -1.0);
        std::vector<cxd> model{v0};
        auto clear_x = [&](double x) { return std::abs(x) > 1.3; };
        if ((v0.im > 0) != (side > 0) && !clear_x(v0.re))
            model.push_back(cxd(v0.re > 0 ? 1.6 : -1.6, v0.im));  // slide clear of the slit first
        model.push_back(cxd(model.back().re, side * H));
        model.push_back(cxd(v1.re, side * H));
        model.push_back(v1);
        std::vector<cxd> path;
        for (const auto& w : model) path.push_back(a.map.apply(fromm(w)));
        // verify clearance; fall through to the graph router on failure
        bool ok = true;
        for (std::size_t i = 0; i + 1 < path.size(); ++i)
            if (segment_chain_distance(path[i], path[i + 1], chain, cloud) <= clearance) ok = false;
        if (ok) return path;
    }

    // visibility-graph fallback
    std::vector<cxd> nodes{from, to};
    for (double rr : {0.12, 0.28, 0.45, 0.62, 0.5 * (1.0 + chain.max_modulus()), 1.3, 2.0}) {
        for (int k = 0; k < 20; ++k) {
            double th = 2 * 3.14159265358979323846 * (k + 0.5) / 20;
            nodes.push_back(cxd(rr * std::cos(th), rr * std::sin(th)));
        }
    }
    const std::size_t N = nodes.size();
    std::vector<double> dist(N, std::numeric_limits<double>::infinity());
    std::vector<int> prev(N, -1);
    std::vector<bool> done(N, false);
    dist[0] = 0;
    for (;;) {
        std::size_t u = N;
        double du = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < N; ++i)
            if (!done[i] && dist[i] < du) { du = dist[i]; u = i; }
        if (u == N) break;
        done[u] = true;
        if (u == 1) break;
        for (std::size_t v = 0; v < N; ++v) {
            if (done[v]) continue;
            double w = abs(nodes[u] - nodes[v]);
            if (w > 0.75 && !(u == 0 || v == 1 || u == 1 || v == 0)) continue;
            if (dist[u] + w >= dist[v]) continue;
            if (segment_chain_distance(nodes[u], nodes[v], chain, cloud) <= clearance) continue;
            dist[v] = dist[u] + w;
            prev[v] = int(u);
        }
    }
    if (!done[1] || dist[1] == std::numeric_limits<double>::infinity())
        throw domain_error("evaluate_continuation: no path to target avoiding the cut");
    std::vector<cxd> path;
    for (int v = 1; v != -1; v = prev[v]) path.push_back(nodes[v]);
    std::reverse(path.begin(), path.end());
    return path;
}

// Reference point for branch tracking: z = 2 (where the normalized branch is
// fixed by the principal-root product), unless the cut's chart crowds it, in
// which case the best-cleared point of modulus 2 is used instead.
inline cxd pick_reference(const ArcChain& chain) {
    if (chain.empty() || chain.distance(cxd(2, 0), 64) > 0.5) return cxd(2, 0);
    std::vector<cxd> cand;
    for (int k = 0; k < 8; ++k) {
        double th = 2 * 3.14159265358979323846 * k / 8;
        cand.push_back(cxd(2 * std::cos(th), 2 * std::sin(th)));
    }
    cxd best = cand[0];
    double bd = -1;
    for (const auto& z : cand) {
        double d = chain.distance(z, 64);
        if (d > bd) { bd = d; best = z; }
    }
    return best;
}

}  // namespace detail

// Normalized branch on |z| >= 1 (members of H(A)); a few ulps of slack so
// that grid points constructed as cos/sin pairs stay admissible.
template <typename R>
Cx<R> evaluate(const AnalyticFunctionSpec& spec, const Cx<R>& z) {
    if (abs(z) < R(1) - R(64) * eps_of<R>())
        throw domain_error("evaluate: |z| < 1; use evaluate_continuation");
    return detail::eval_outer(spec, z);
}

// Single-valued continuation of f into the disk off the declared cut.
// The branch is fixed by continuity from the normalized branch at modulus 2.
// For branch-free members the chain may be empty.
template <typename R>
Cx<R> evaluate_continuation(const AnalyticFunctionSpec& spec, const Cx<R>& z,
                            const ArcChain& cut, double collision_tol = 1e-9) {
    cxd zd = to_cxd(z);
    if (spec.root_order() == 1) {
        for (const auto& p : spec.polar_points)
            if (abs(zd - p) < collision_tol) throw domain_error("evaluate_continuation: singular point");
        return detail::eval_outer(spec, z);
    }
    if (!cut.empty() && cut.distance(zd) < collision_tol)
        throw domain_error("evaluate_continuation: point on the declared cut");
    if (abs(zd) > spec.max_singular_modulus() + 0.02 && (cut.empty() || cut.max_modulus() < abs(zd) - 0.01))
        return detail::eval_outer(spec, z);

    const int q = spec.root_order();
    cxd zref = detail::pick_reference(cut);
    cxd sref = to_cxd(Cx<double>(zref) * detail::outer_root_factor<double>(spec, zref));
    std::vector<cxd> path = detail::route_path(zref, zd, cut, std::max(collision_tol, 2e-3));
    cxd s_tracked = detail::track_branch(spec, path, sref);

    // express the tracked branch as a root-of-unity multiple of the principal
    // root of P(z), then evaluate that exactly in the working scalar
    cxd p_d = detail::branch_product<double>(spec, zd);
    double base = arg(p_d) / q;
    double delta = arg(s_tracked) - base;
    const double twopi = 2 * 3.14159265358979323846;
    long k = std::lround(delta * q / twopi);
    k = ((k % q) + q) % q;

    Cx<R> P = detail::branch_product(spec, z);
    Cx<R> s = exp(log(P) / R(q));
    R ang = R(twopi) * R(double(k)) / R(q);
    s *= Cx<R>(cos(ang), sin(ang));
    return Cx<R>(R(1)) / s;
}

// ---------------------------------------------------------------------------
// Fourier window
// ---------------------------------------------------------------------------

template <typename R>
struct FourierWindow {
    std::vector<Cx<R>> coef;   // coef[k-1] = c_{-k}, k = 1..K
    double radius = 0;         // extraction circle
    double decay_base = 0;     // max singular modulus of the source
    // certified coefficient envelope |c_{-k}| <= tail_const * tail_base^k
    // from the sup of |f| on a circle close to the singularities
    double tail_base = 0;
    R tail_const{};
    R tail_bound{};            // the envelope at k = K + 1
    R max_on_circle{};

    std::size_t size() const { return coef.size(); }
    Cx<R> c(std::size_t k) const {  // c_{-k}
        if (k == 0 || k > coef.size()) throw domain_error("FourierWindow: index out of window");
        return coef[k - 1];
    }
    // l1 bound on sum_{k > m} |c_{-k}| from the certified envelope
    R tail_l1(std::size_t m) const {
        R b(tail_base);
        R s = tail_const;
        for (std::size_t i = 0; i <= m; ++i) s *= b;
        return s / (R(1) - b);
    }
};

inline double default_extraction_radius(const AnalyticFunctionSpec& spec) {
    return 0.5 * (1.0 + spec.max_singular_modulus());
}

template <typename R>
FourierWindow<R> fourier_coefficients(const AnalyticFunctionSpec& spec, std::size_t K,
                                      double radius = 0.0, double tail_request = 0.0,
                                      bool verify_radius = true) {
    spec.validate();
    if (K < 1) throw domain_error("fourier_coefficients: K >= 1 required");
    const double sing_rad = spec.max_singular_modulus();
    if (radius == 0.0) radius = default_extraction_radius(spec);
    if (!(radius > sing_rad + 1e-6 && radius <= 1.0))
        throw domain_error("fourier_coefficients: radius must lie in (max singular modulus, 1]");

    // trapezoidal node count from the aliasing envelope M q^{N-K}/(1-q) < tail
    const double q = std::max(sing_rad / radius, 0.05);
    double tail = tail_request > 0 ? tail_request : 1e-30;
    std::size_t nodes = 256;
    auto alias_ok = [&](std::size_t N) {
        return N > K + 8 && std::pow(q, double(N - K)) / (1 - q) < tail;
    };
    while (!alias_ok(nodes) && nodes < (1u << 22)) nodes *= 2;

    auto compute = [&](double rho) {
        FourierWindow<R> w;
        w.radius = rho;
        w.decay_base = sing_rad;
        w.coef.assign(K, Cx<R>());
        const R twopi = R(2) * pi_const<R>();
        R maxf(0);
        std::vector<Cx<R>> f(nodes);
        std::vector<Cx<R>> zs(nodes);
        for (std::size_t j = 0; j < nodes; ++j) {
            R th = twopi * R(double(j)) / R(double(nodes));
            Cx<R> zj = polar_cx(R(rho), th);
            zs[j] = zj;
            f[j] = detail::eval_outer(spec, zj);
            maxf = rmax(maxf, abs(f[j]));
        }
        for (std::size_t j = 0; j < nodes; ++j) {
            Cx<R> p = zs[j];
            for (std::size_t k = 1; k <= K; ++k) {
                w.coef[k - 1] += f[j] * p;
                p *= zs[j];
            }
        }
        R inv(R(1) / R(double(nodes)));
        for (auto& c : w.coef) c *= inv;
        w.max_on_circle = maxf;
        // certified envelope from a circle close to the singularities:
        // |c_{-k}| <= max_{|z| = rho_t} |f| * rho_t^k for any admissible rho_t
        double rho_t = sing_rad + 0.25 * (rho - sing_rad);
        R maxt(0);
        for (std::size_t j = 0; j < 512; ++j) {
            R th = twopi * R(double(j)) / R(512);
            maxt = rmax(maxt, abs(detail::eval_outer(spec, polar_cx(R(rho_t), th))));
        }
        w.tail_base = rho_t;
        w.tail_const = maxt;
        R tb = maxt;
        for (std::size_t i = 0; i <= K; ++i) tb *= R(rho_t);
        w.tail_bound = tb;
        return w;
    };

    FourierWindow<R> w = compute(radius);
    if (verify_radius) {
        double radius2 = sing_rad + 0.8 * (radius - sing_rad);
        FourierWindow<R> w2 = compute(radius2);
        R allow = R(10) * rmax(w.tail_bound, w2.tail_bound) + R(64) * eps_of<R>() * w.max_on_circle;
        for (std::size_t k = 0; k < K; ++k) {
            if (abs(w.coef[k] - w2.coef[k]) > allow)
                throw numeric_error(
                    "fourier_coefficients: radius independence violated; singular point "
                    "outside the declared set?");
        }
    }
    return w;
}

}  // namespace merolab
