// diagnostics.hpp — turns approximant families into the limit objects of the
// theory: normalized pole counting measures, weak* distances to the Green
// equilibrium distribution of the extremal cut, convergence-in-capacity maps
// for (1/2n) log|f - M_n|, n-th-root rate extrapolation, and the Walsh /
// optimal-rate bound checks.

#pragma once

#include <random>

#include "interp.hpp"

namespace merolab {

// Normalized counting measure of the poles (each pole with its multiplicity,
// total mass (#poles)/n).
template <typename R>
DiscreteMeasure counting_measure(const MeromorphicApproximant<R>& M, std::size_t n) {
    if (n == 0) throw domain_error("counting_measure: n >= 1");
    DiscreteMeasure mu;
    for (const auto& p : M.poles) {
        mu.points.push_back(to_cxd(p.z));
        mu.weights.push_back(double(p.mult) / double(n));
    }
    return mu;
}

// ---------------------------------------------------------------------------
// Weak* distance diagnostics
// ---------------------------------------------------------------------------

struct WeakStarDistance {
    double kolmogorov = 0;     // sup CDF gap along the cut
    double potential_sup = 0;  // sup |g(emp) - g(ref)| on the control grid
    std::size_t far_poles = 0; // empirical points farther than 0.1 from the cut
};

namespace detail_diag {

// weighted one-dimensional Kolmogorov distance between atom lists
inline double kolmogorov_1d(std::vector<std::pair<double, double>> a,
                            std::vector<std::pair<double, double>> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double ma = 0, mb = 0;
    for (auto& [x, w] : a) ma += w;
    for (auto& [x, w] : b) mb += w;
    if (ma > 0) for (auto& [x, w] : a) w /= ma;
    if (mb > 0) for (auto& [x, w] : b) w /= mb;
    double fa = 0, fb = 0, best = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        double xa = i < a.size() ? a[i].first : std::numeric_limits<double>::infinity();
        double xb = j < b.size() ? b[j].first : std::numeric_limits<double>::infinity();
        double x = std::min(xa, xb);
        // consume every atom sitting at x on both sides before comparing,
        // so identical measures give distance zero
        while (i < a.size() && a[i].first <= x) fa += a[i++].second;
        while (j < b.size() && b[j].first <= x) fb += b[j++].second;
        best = std::max(best, std::abs(fa - fb));
    }
    return best;
}

inline std::vector<cxd> control_grid(const ArcChain& cut, double min_dist = 0.1,
                                     double max_mod = 0.9, std::size_t target = 240) {
    std::vector<cxd> grid;
    const double twopi = 2 * 3.14159265358979323846;
    for (int ir = 1; ir <= 12 && grid.size() < target; ++ir) {
        double r = max_mod * double(ir) / 12.0;
        int na = 4 + 3 * ir;
        for (int ia = 0; ia < na; ++ia) {
            cxd z(r * std::cos(twopi * ia / na), r * std::sin(twopi * ia / na));
            if (cut.distance(z) >= min_dist) grid.push_back(z);
        }
    }
    return grid;
}

}  // namespace detail_diag

// emp: empirical pole measure; ref: equilibrium measure on the cut.
// Kolmogorov is computed after Möbius transport to the model frame (the
// two-point cut becomes a real segment); tripods use per-arm CDFs from the
// junction. Empirical atoms farther than 0.1 from the cut are counted and
// still projected.
inline WeakStarDistance weak_star_distance(const DiscreteMeasure& emp, const DiscreteMeasure& ref,
                                           const CutSolution& cut) {
    WeakStarDistance out;
    for (const auto& z : emp.points)
        if (cut.chain.distance(z) > 0.1) ++out.far_poles;

    if (!cut.has_junction) {
        // model frame: the cut is [-r, r]; project to the real axis
        auto project = [&](const DiscreteMeasure& mu) {
            std::vector<std::pair<double, double>> atoms;
            for (std::size_t i = 0; i < mu.points.size(); ++i) {
                cxd w = cut.transport.apply(mu.points[i]);
                double x = std::min(cut.model_r, std::max(-cut.model_r, w.re));
                atoms.emplace_back(x, mu.weights[i]);
            }
            return atoms;
        };
        out.kolmogorov = detail_diag::kolmogorov_1d(project(emp), project(ref));
    } else {
        // per-arm CDFs: nearest arm, arclength position from the junction
        auto arm_atoms = [&](const DiscreteMeasure& mu, std::size_t arm) {
            std::vector<std::pair<double, double>> atoms;
            for (std::size_t i = 0; i < mu.points.size(); ++i) {
                double bd = std::numeric_limits<double>::infinity();
                std::size_t ba = 0;
                double bt = 0;
                for (std::size_t ai = 0; ai < cut.chain.arcs.size(); ++ai) {
                    const int C = 128;
                    for (int t = 0; t <= C; ++t) {
                        double v = abs(cut.chain.arcs[ai].point(double(t) / C) - mu.points[i]);
                        if (v < bd) { bd = v; ba = ai; bt = double(t) / C; }
                    }
                }
                if (ba == arm) atoms.emplace_back(bt, mu.weights[i]);
            }
            return atoms;
        };
        double k = 0;
        for (std::size_t arm = 0; arm < cut.chain.arcs.size(); ++arm)
            k = std::max(k, detail_diag::kolmogorov_1d(arm_atoms(emp, arm), arm_atoms(ref, arm)));
        out.kolmogorov = k;
    }

    double ps = 0;
    for (const cxd& z : detail_diag::control_grid(cut.chain))
        ps = std::max(ps, std::abs(green_potential(emp, z) - green_potential(ref, z)));
    out.potential_sup = ps;
    return out;
}

// ---------------------------------------------------------------------------
// Convergence-in-capacity map
// ---------------------------------------------------------------------------

struct CapacityMap {
    std::vector<cxd> points;
    std::vector<double> observed;    // (1/2n) log|f - M|
    std::vector<double> predicted;   // g(mu_{D,K_f}) - 1/cap
    std::vector<bool> masked;
    double median_dev = 0, p90_dev = 0;
    double masked_fraction = 0;
    double cover_capacity_bound = 0; // sum 1/log(1/r_i) over covering disks
    bool exact_recovery = false;
};

struct GridSpec {
    std::size_t count = 2000;
    double margin = 0.1;     // clearance from the cut
    double max_mod = 0.98;
    std::uint64_t seed = 1;
    double mask_budget = 0.05;
};

template <typename R>
CapacityMap capacity_map(const AnalyticFunctionSpec& spec, const MeromorphicApproximant<R>& M,
                         std::size_t n, const CutSolution& cut, const GridSpec& grid) {
    CapacityMap map;
    std::mt19937_64 rng(grid.seed);
    std::uniform_real_distribution<double> U(-grid.max_mod, grid.max_mod);
    while (map.points.size() < grid.count) {
        cxd z(U(rng), U(rng));
        if (abs(z) > grid.max_mod) continue;
        if (cut.chain.distance(z) < grid.margin) continue;
        map.points.push_back(z);
    }

    const double invcap = 1.0 / cut.capacity.capacity;
    std::size_t exact = 0;
    for (const cxd& zd : map.points) {
        Cx<R> z = cx_of<R>(zd);
        Cx<R> fz = evaluate_continuation(spec, z, cut.chain, grid.margin * 0.5);
        R err = abs(fz - M(z));
        double obs;
        if (err == R(0) || (abs(fz) > R(0) && err < R(16) * eps_of<R>() * abs(fz))) {
            obs = -std::numeric_limits<double>::infinity();
            ++exact;
        } else {
            obs = to_double(log(err)) / double(2 * n);
        }
        map.observed.push_back(obs);
        map.predicted.push_back(green_potential(cut.capacity.measure, zd) - invcap);
    }
    map.exact_recovery = exact > map.points.size() * 99 / 100;

    std::vector<double> dev(map.points.size());
    for (std::size_t i = 0; i < dev.size(); ++i) {
        double d = std::abs(map.observed[i] - map.predicted[i]);
        dev[i] = std::isfinite(d) ? d : std::numeric_limits<double>::infinity();
    }
    // mask the worst mask_budget fraction (proxy for the exceptional set)
    std::vector<std::size_t> idx(dev.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return dev[a] < dev[b]; });
    std::size_t keep = map.exact_recovery
                           ? dev.size()
                           : dev.size() - std::size_t(std::floor(grid.mask_budget * double(dev.size())));
    map.masked.assign(dev.size(), false);
    for (std::size_t i = keep; i < idx.size(); ++i) map.masked[idx[i]] = true;
    map.masked_fraction = dev.empty() ? 0.0 : double(dev.size() - keep) / double(dev.size());

    if (!map.exact_recovery && keep > 0) {
        std::vector<double> kept;
        for (std::size_t i = 0; i < keep; ++i) kept.push_back(dev[idx[i]]);
        map.median_dev = kept[kept.size() / 2];
        map.p90_dev = kept[std::min(kept.size() - 1, std::size_t(std::floor(0.9 * double(kept.size()))))];
    }

    // disk-cover capacity bound for the masked set: greedy merge of disks of
    // radius ~ the local grid spacing
    std::vector<cxd> bad;
    for (std::size_t i = 0; i < dev.size(); ++i)
        if (map.masked[i]) bad.push_back(map.points[i]);
    double h = grid.max_mod * 2.0 / std::sqrt(double(std::max<std::size_t>(grid.count, 1)));
    std::vector<std::pair<cxd, double>> disks;
    for (const cxd& z : bad) {
        bool merged = false;
        for (auto& [c, r] : disks) {
            if (abs(z - c) <= r + h) {
                double nr = std::max(r, abs(z - c) + h);
                c = 0.5 * (c + z);
                r = nr;
                merged = true;
                break;
            }
        }
        if (!merged) disks.emplace_back(z, h);
    }
    double bound = 0;
    for (const auto& [c, r] : disks)
        bound += r < 1.0 ? 1.0 / std::log(1.0 / r) : 1e9;
    map.cover_capacity_bound = bound;
    return map;
}

// ---------------------------------------------------------------------------
// Rate extrapolation and bound checks
// ---------------------------------------------------------------------------

struct RateSeries {
    std::vector<std::size_t> n;
    std::vector<double> value;      // s_n or ||f - M_n||, positive
    std::vector<double> log_value;  // natural logs
    std::vector<bool> trusted;
    std::size_t window_lo = 0, window_hi = 0;
    double slope = 0, intercept = 0;
    double limit = 0;               // extrapolated n-th-root limit exp(slope)
    double residual = 0;            // rms residual of the fit
};

// least-squares fit of log v = a + b n over the trailing window
inline RateSeries rate_extrapolate(const std::vector<std::size_t>& ns,
                                   const std::vector<double>& log_values,
                                   const std::vector<bool>& trusted,
                                   std::size_t window_lo = 0, std::size_t window_hi = 0) {
    if (ns.size() != log_values.size()) throw domain_error("rate_extrapolate: size mismatch");
    RateSeries s;
    s.n = ns;
    s.log_value = log_values;
    s.value.resize(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) s.value[i] = std::exp(log_values[i]);
    s.trusted = trusted.empty() ? std::vector<bool>(ns.size(), true) : trusted;

    std::size_t nmax = 0;
    for (auto v : ns) nmax = std::max(nmax, v);
    if (window_hi == 0) window_hi = nmax;
    if (window_lo == 0) window_lo = std::max<std::size_t>(5, nmax / 2);  // trailing window
    s.window_lo = window_lo;
    s.window_hi = window_hi;

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (!s.trusted[i] || ns[i] < window_lo || ns[i] > window_hi) continue;
        double x = double(ns[i]), y = log_values[i];
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++m;
    }
    if (m < 5) throw numeric_error("rate_extrapolate: fewer than 5 trusted points in the window");
    double det = double(m) * sxx - sx * sx;
    s.slope = (double(m) * sxy - sx * sy) / det;
    s.intercept = (sy * sxx - sx * sxy) / det;
    s.limit = std::exp(s.slope);
    double rss = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (!s.trusted[i] || ns[i] < window_lo || ns[i] > window_hi) continue;
        double r = log_values[i] - (s.intercept + s.slope * double(ns[i]));
        rss += r * r;
    }
    s.residual = std::sqrt(rss / double(m));
    return s;
}

struct BoundReport {
    double cap = 0;
    double walsh_bound = 0;     // exp(-1/cap)
    double optimal_rate = 0;    // exp(-2/cap)
    double limit = 0;
    bool walsh_pass = false;    // limit <= exp(-1/cap) (1 + tol)
    bool optimal_pass = false;  // |limit - exp(-2/cap)| <= tol exp(-2/cap)
    double walsh_margin = 0;    // (bound - limit)/bound
    double optimal_margin = 0;  // |limit - rate|/rate
};

inline BoundReport bound_checks(const RateSeries& series, double cap, double rel_tol = 0.03) {
    BoundReport r;
    r.cap = cap;
    r.limit = series.limit;
    r.walsh_bound = std::exp(-1.0 / cap);
    r.optimal_rate = std::exp(-2.0 / cap);
    r.walsh_margin = (r.walsh_bound - r.limit) / r.walsh_bound;
    r.walsh_pass = r.limit <= r.walsh_bound * (1.0 + rel_tol);
    r.optimal_margin = std::abs(r.limit - r.optimal_rate) / r.optimal_rate;
    r.optimal_pass = r.optimal_margin <= rel_tol;
    return r;
}

}  // namespace merolab
