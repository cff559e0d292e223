// arcs.hpp — Möbius transformations of the disk and piecewise-analytic arc
// systems (candidate cuts, extremal cuts, circles). Geometry is double
// precision throughout; multiprecision callers only ever need arc data to
// steer branch tracking, never to full working accuracy.

#pragma once

#include <algorithm>
#include <cmath>

#include "common.hpp"

namespace merolab {

// M(z) = (a z + b) / (c z + d)
struct Mobius {
    cxd a{1, 0}, b{0, 0}, c{0, 0}, d{1, 0};

    cxd apply(const cxd& z) const { return (a * z + b) / (c * z + d); }
    cxd derivative(const cxd& z) const {
        cxd den = c * z + d;
        return (a * d - b * c) / (den * den);
    }
    Mobius inverse() const { return Mobius{d, -b, -c, a}; }

    friend Mobius compose(const Mobius& f, const Mobius& g) {  // f after g
        return Mobius{f.a * g.a + f.b * g.c, f.a * g.b + f.b * g.d,
                      f.c * g.a + f.d * g.c, f.c * g.b + f.d * g.d};
    }

    // z -> e^{i phase} (z - center) / (1 - conj(center) z)
    static Mobius disk_automorphism(const cxd& center, double phase = 0.0) {
        cxd ph(std::cos(phase), std::sin(phase));
        return Mobius{ph, -ph * center, -conj(center), cxd(1, 0)};
    }
    static Mobius identity() { return Mobius{}; }
};

// One analytic arc. "line" arcs live in a model plane and are pushed through
// a Möbius map (straight segments, hyperbolic geodesics, bowed competitors
// via the quadratic bulge); "circle" arcs are closed curves used for circular
// cuts and region boundaries.
struct Arc {
    enum class Kind { line, circle };
    Kind kind = Kind::line;

    Mobius map;     // model plane -> disk (line kind)
    cxd w0, w1;     // model endpoints
    double bulge = 0.0;

    cxd center;     // circle kind
    double radius = 0.0;

    bool closed() const { return kind == Kind::circle; }

    cxd point(double t) const {
        if (kind == Kind::circle) {
            double th = 2.0 * 3.14159265358979323846 * t;
            return center + cxd(radius * std::cos(th), radius * std::sin(th));
        }
        cxd w = model_point(t);
        return map.apply(w);
    }
    cxd tangent(double t) const {
        if (kind == Kind::circle) {
            double th = 2.0 * 3.14159265358979323846 * t;
            double tp = 2.0 * 3.14159265358979323846 * radius;
            return cxd(-tp * std::sin(th), tp * std::cos(th));
        }
        cxd w = model_point(t);
        cxd dw = (w1 - w0) + bulge * 4.0 * (1.0 - 2.0 * t) * (cxd(0, 1) * (w1 - w0));
        return map.derivative(w) * dw;
    }
    cxd model_point(double t) const {
        return w0 + t * (w1 - w0) + bulge * 4.0 * t * (1.0 - t) * (cxd(0, 1) * (w1 - w0));
    }

    static Arc segment(const cxd& z0, const cxd& z1) {
        Arc a;
        a.w0 = z0;
        a.w1 = z1;
        return a;
    }
    static Arc mobius_segment(const Mobius& m, const cxd& w0, const cxd& w1, double bulge = 0.0) {
        Arc a;
        a.map = m;
        a.w0 = w0;
        a.w1 = w1;
        a.bulge = bulge;
        return a;
    }
    static Arc circle(const cxd& center, double radius) {
        Arc a;
        a.kind = Kind::circle;
        a.center = center;
        a.radius = radius;
        return a;
    }
};

struct ArcChain {
    std::vector<Arc> arcs;
    std::vector<cxd> junctions;  // points where >= 3 arcs meet (tripods)

    bool empty() const { return arcs.empty(); }

    double max_modulus(int samples_per_arc = 129) const {
        double m = 0;
        for (const auto& a : arcs)
            for (int i = 0; i <= samples_per_arc; ++i)
                m = std::max(m, abs(a.point(double(i) / samples_per_arc)));
        return m;
    }

    double total_length(int samples_per_arc = 512) const {
        double L = 0;
        for (const auto& a : arcs) {
            cxd prev = a.point(0.0);
            for (int i = 1; i <= samples_per_arc; ++i) {
                cxd p = a.point(double(i) / samples_per_arc);
                L += abs(p - prev);
                prev = p;
            }
        }
        return L;
    }

    // Distance from z to the chain: coarse sampling refined by local search.
    double distance(const cxd& z, int coarse = 192) const {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& a : arcs) {
            double bt = 0, bv = std::numeric_limits<double>::infinity();
            for (int i = 0; i <= coarse; ++i) {
                double t = double(i) / coarse;
                double v = abs(a.point(t) - z);
                if (v < bv) { bv = v; bt = t; }
            }
            double lo = std::max(0.0, bt - 1.5 / coarse), hi = std::min(1.0, bt + 1.5 / coarse);
            for (int it = 0; it < 48; ++it) {
                double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
                if (abs(a.point(m1) - z) < abs(a.point(m2) - z)) hi = m2; else lo = m1;
            }
            bv = std::min(bv, abs(a.point(0.5 * (lo + hi)) - z));
            best = std::min(best, bv);
        }
        return best;
    }

    std::vector<cxd> sample(int per_arc) const {
        std::vector<cxd> pts;
        for (const auto& a : arcs)
            for (int i = 0; i <= per_arc; ++i) pts.push_back(a.point(double(i) / per_arc));
        return pts;
    }
};

// Automorphism taking {a, b} to {-r, r} with r in (0,1) determined by the
// pseudo-hyperbolic distance of the pair; wr() reports r.
struct SymmetricPairMap {
    Mobius m;      // disk -> disk, m(a) = -r, m(b) = +r
    double r = 0;  // half-length of the model segment
};

inline SymmetricPairMap symmetric_pair_map(const cxd& a, const cxd& b) {
    if (abs(a - b) == 0.0) throw domain_error("symmetric_pair_map: coincident points");
    Mobius m1 = Mobius::disk_automorphism(a);
    cxd bp = m1.apply(b);
    double d = abs(bp);  // pseudo-hyperbolic distance of (a, b)
    Mobius rot = Mobius::disk_automorphism(cxd(0, 0), -std::atan2(bp.im, bp.re));
    // solve 2r/(1+r^2) = d for the root in (0,1)
    double r = (1.0 - std::sqrt(std::max(0.0, 1.0 - d * d))) / d;
    Mobius m2 = Mobius::disk_automorphism(cxd(r, 0));
    SymmetricPairMap out;
    out.m = compose(m2, compose(rot, m1));
    out.r = r;
    return out;
}

// Hyperbolic geodesic between two points of the disk, as a Möbius segment.
inline Arc geodesic_arc(const cxd& z0, const cxd& z1) {
    Mobius m = Mobius::disk_automorphism(z0);
    cxd w1 = m.apply(z1);
    return Arc::mobius_segment(m.inverse(), cxd(0, 0), w1);
}

}  // namespace merolab
