// aak.hpp — best meromorphic (AAK) approximants from Hankel singular
// triples, Nehari modification of arbitrary meromorphic approximants, and
// sup-norm error traces on the unit circle.
//
// With v_n an (n+1)-st singular vector of the section, the approximant is
//     M_n = P_+(f v_n) / v_n,      f - M_n = (f v_n - P_+(f v_n)) / v_n,
// and P_+(f v_n) is a polynomial assembled by convolving the Fourier window
// with v_n's coefficients. Poles are the zeros of v_n in the disk. When the
// target index falls below the numerical noise floor the symbol is a
// rational function to working accuracy, and the poles are recovered instead
// by a shifted-section matrix pencil; the AAK approximant is then f itself.

#pragma once

#include "hankel.hpp"

namespace merolab {

enum class Provenance { aak, nehari_modified, interpolation, retention };

inline std::string provenance_name(Provenance p) {
    switch (p) {
        case Provenance::aak: return "aak";
        case Provenance::nehari_modified: return "nehari_modified";
        case Provenance::interpolation: return "interpolation";
        case Provenance::retention: return "retention";
    }
    return "?";
}

template <typename R>
struct PoleInfo {
    Cx<R> z;
    int mult = 1;
    std::vector<Cx<R>> principal;  // principal[j] multiplies (z - pole)^{-(j+1)}
};

template <typename R>
struct MeromorphicApproximant {
    Poly<R> num, den;               // global evaluator num/den
    std::vector<PoleInfo<R>> poles; // poles inside the disk, with principal parts
    std::size_t degree_budget = 0;
    Provenance provenance = Provenance::aak;
    std::vector<std::string> warnings;

    // Alternative evaluator: discretized Cauchy integral over a circle that
    // separates the poles of this approximant from everything else. Used by
    // the retention construction, whose principal-part form is numerically
    // hopeless for tightly clustered poles, while the contour form is stable.
    // value_g = M(xi_g)(xi_g - center)/G; M(x) = sum_g value_g / (x - xi_g),
    // valid outside the contour.
    bool use_contour = false;
    std::vector<Cx<R>> contour_nodes, contour_values;

    Cx<R> operator()(const Cx<R>& z) const {
        if (use_contour) {
            Cx<R> s;
            for (std::size_t g = 0; g < contour_nodes.size(); ++g)
                s += contour_values[g] / (z - contour_nodes[g]);
            return s;
        }
        return poly_eval(num, z) / poly_eval(den, z);
    }

    std::size_t pole_count() const {
        std::size_t c = 0;
        for (const auto& p : poles) c += std::size_t(p.mult);
        return c;
    }

    // Sum of stored principal parts (the strictly meromorphic part).
    Cx<R> principal_sum(const Cx<R>& z) const {
        Cx<R> s;
        for (const auto& p : poles) {
            Cx<R> d = z - p.z;
            Cx<R> dp(R(1));
            for (int j = 0; j < p.mult; ++j) {
                dp *= d;
                s += p.principal[std::size_t(j)] / dp;
            }
        }
        return s;
    }

    // Taylor window of the analytic (H^inf) part M - principal_sum, computed
    // by a Cauchy integral on |z| = rho, with a certified geometric remainder
    // bound max|tail| <= bound * (|z|/rho)^{m} /(1 - |z|/rho).
    std::pair<Poly<R>, R> analytic_tail(std::size_t m, double rho = 0.97) const {
        const std::size_t G = 2048;
        const R twopi = R(2) * pi_const<R>();
        Poly<R> t(m, Cx<R>());
        R maxv(0);
        std::vector<Cx<R>> vals(G), zs(G);
        for (std::size_t g = 0; g < G; ++g) {
            R th = twopi * R(double(g)) / R(double(G));
            Cx<R> z = polar_cx(R(rho), th);
            zs[g] = z;
            vals[g] = (*this)(z)-principal_sum(z);
            maxv = rmax(maxv, abs(vals[g]));
        }
        for (std::size_t g = 0; g < G; ++g) {
            Cx<R> zik = Cx<R>(R(1));
            for (std::size_t k = 0; k < m; ++k) {
                t[k] += vals[g] * zik;
                zik /= zs[g];
            }
        }
        for (auto& c : t) c /= R(double(G));
        return {t, maxv};
    }
};

template <typename R>
Poly<R> poly_scale(Poly<R> p, const Cx<R>& s) {
    for (auto& c : p) c *= s;
    return p;
}

// Exact synthetic division by (z - root); remainder discarded.
template <typename R>
Poly<R> poly_deflate(const Poly<R>& p, const Cx<R>& root) {
    if (p.size() <= 1) return {Cx<R>(R(0))};
    Poly<R> q(p.size() - 1);
    Cx<R> carry = p.back();
    for (std::size_t k = p.size() - 1; k-- > 0;) {
        q[k] = carry;
        carry = p[k] + carry * root;
    }
    return q;
}

// Rational form of a sum of principal parts.
template <typename R>
void rational_from_principal_parts(MeromorphicApproximant<R>& M) {
    Poly<R> den{Cx<R>(R(1))};
    for (const auto& p : M.poles)
        for (int j = 0; j < p.mult; ++j) den = poly_mul(den, Poly<R>{-p.z, Cx<R>(R(1))});
    Poly<R> num{Cx<R>(R(0))};
    for (const auto& p : M.poles) {
        // contribution: sum_j principal[j] * den / (z - pole)^{j+1}
        Poly<R> rest = den;
        for (int j = 0; j < p.mult; ++j) {
            rest = poly_deflate(rest, p.z);
            num = poly_add(num, poly_scale(rest, p.principal[std::size_t(j)]));
        }
    }
    M.num = num.empty() ? Poly<R>{Cx<R>(R(0))} : num;
    M.den = den;
}

// ---------------------------------------------------------------------------
// Error trace on T
// ---------------------------------------------------------------------------

template <typename R>
struct ErrorTrace {
    std::size_t grid = 0;
    std::vector<R> samples;  // |f - M| at uniform angles
    R sup{}, inf{};
    double refinement = 0;   // relative sup change when the grid is doubled
};

template <typename R>
ErrorTrace<R> error_on_circle(const AnalyticFunctionSpec& spec, const MeromorphicApproximant<R>& M,
                              std::size_t grid_count = 1024) {
    if (grid_count < 64) throw domain_error("error_on_circle: grid_count >= 64");
    const R twopi = R(2) * pi_const<R>();
    auto sample_level = [&](std::size_t G, std::vector<R>* keep) {
        R sup(0), inf(0);
        bool first = true;
        for (std::size_t g = 0; g < G; ++g) {
            R th = twopi * R(double(g)) / R(double(G));
            Cx<R> z = polar_cx(R(1), th);
            R v = abs(evaluate(spec, z) - M(z));
            if (keep) keep->push_back(v);
            if (first) { sup = inf = v; first = false; }
            else {
                sup = rmax(sup, v);
                inf = rmin(inf, v);
            }
        }
        return std::make_pair(sup, inf);
    };
    ErrorTrace<R> t;
    t.grid = grid_count;
    t.samples.reserve(grid_count);
    auto [sup1, inf1] = sample_level(grid_count, &t.samples);
    auto [sup2, inf2] = sample_level(2 * grid_count, nullptr);
    t.sup = rmax(sup1, sup2);
    t.inf = rmin(inf1, inf2);
    R denom = t.sup > R(0) ? t.sup : R(1);
    t.refinement = to_double(abs(sup2 - sup1) / denom);
    return t;
}

// ---------------------------------------------------------------------------
// AAK approximant
// ---------------------------------------------------------------------------

namespace detail {

// P_+(f v): polynomial with b_l = sum_{j>l} v_j c_{-(j-l)}.
template <typename R>
Poly<R> plus_projection(const FourierWindow<R>& w, const std::vector<Cx<R>>& v) {
    const std::size_t N = v.size();
    Poly<R> b(N >= 2 ? N - 1 : 1, Cx<R>());
    for (std::size_t l = 0; l + 1 < N; ++l) {
        Cx<R> s;
        for (std::size_t j = l + 1; j < N; ++j) s += v[j] * w.c(j - l);
        b[l] = s;
    }
    return b;
}

inline std::vector<cxd> small_eigenvalues(const Matrix<cxd>& A) {
    const std::size_t n = A.rows;
    // Faddeev–LeVerrier: det(lam I - A) = sum_k c_k lam^{n-k}, c_0 = 1
    std::vector<cxd> c(n + 1);
    c[0] = cxd(1, 0);
    Matrix<cxd> M(n, n);  // M_0 = 0
    for (std::size_t k = 1; k <= n; ++k) {
        // M_k = A M_{k-1} + c_{k-1} I
        Matrix<cxd> Mk(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                cxd s = (i == j) ? c[k - 1] : cxd(0, 0);
                for (std::size_t l = 0; l < n; ++l) s += A(i, l) * M(l, j);
                Mk(i, j) = s;
            }
        M = Mk;
        cxd tr(0, 0);
        for (std::size_t i = 0; i < n; ++i) {
            cxd s(0, 0);
            for (std::size_t l = 0; l < n; ++l) s += A(i, l) * M(l, i);
            tr += s;
        }
        c[k] = -tr / double(k);
    }
    Poly<double> p(n + 1);
    for (std::size_t k = 0; k <= n; ++k) p[n - k] = c[k];
    return aberth_roots(p);
}

// Shifted-section matrix pencil: poles of a numerically rational symbol.
template <typename R>
std::vector<cxd> pencil_poles(const HankelSection<R>& sec, std::size_t r) {
    const std::size_t m = sec.N - 1;
    Matrix<Cx<R>> H0(m, m), H1(m, m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k) {
            H0(j, k) = sec.entries(j, k);
            H1(j, k) = sec.entries(j, k + 1);
        }
    // top-r column basis of H0 via SVD in double
    Matrix<cxd> H0d(m, m), H1d(m, m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k) {
            H0d(j, k) = to_cxd(H0(j, k));
            H1d(j, k) = to_cxd(H1(j, k));
        }
    JacobiSvd<double> svd = jacobi_svd(H0d);
    Matrix<cxd> A(r, r), B(r, r);
    for (std::size_t p = 0; p < r; ++p)
        for (std::size_t q = 0; q < r; ++q) {
            cxd sa(0, 0), sb(0, 0);
            for (std::size_t j = 0; j < m; ++j) {
                cxd up(0, 0), uq(0, 0);
                // columns of V are right singular vectors; use H0 V as range basis
                for (std::size_t k = 0; k < m; ++k) {
                    up += H0d(j, k) * svd.V(k, p);
                    uq += H0d(j, k) * svd.V(k, q);
                }
                sb += conj(up) * uq;
            }
            B(p, q) = sb;
        }
    // A(p,q) = (H0 v_p)^H H1 v_q
    for (std::size_t p = 0; p < r; ++p) {
        std::vector<cxd> up(m, cxd(0, 0));
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < m; ++k) up[j] += H0d(j, k) * svd.V(k, p);
        for (std::size_t q = 0; q < r; ++q) {
            std::vector<cxd> hq(m, cxd(0, 0));
            for (std::size_t j = 0; j < m; ++j)
                for (std::size_t k = 0; k < m; ++k) hq[j] += H1d(j, k) * svd.V(k, q);
            cxd s(0, 0);
            for (std::size_t j = 0; j < m; ++j) s += conj(up[j]) * hq[j];
            A(p, q) = s;
        }
    }
    // eigenvalues of B^{-1} A
    Matrix<cxd> X(r, r);
    for (std::size_t q = 0; q < r; ++q) {
        std::vector<cxd> col(r);
        for (std::size_t p = 0; p < r; ++p) col[p] = A(p, q);
        std::vector<cxd> x = lu_solve(B, col);
        for (std::size_t p = 0; p < r; ++p) X(p, q) = x[p];
    }
    return small_eigenvalues(X);
}

}  // namespace detail

template <typename R>
struct AakResult {
    MeromorphicApproximant<R> approx;
    ErrorTrace<R> trace;
    R s_value{};        // the singular value actually used
    std::size_t index;  // effective index after cluster handling
    R defect{};
    bool exact_recovery = false;  // rational symbol recovered below noise floor
};

// Variant taking precomputed singular triples (n-sweeps share one
// eigendecomposition of the largest section).
template <typename R>
AakResult<R> aak_from_triples(const AnalyticFunctionSpec& spec, const FourierWindow<R>& window,
                              const HankelSection<R>& sec,
                              const std::vector<SingularTriple<R>>& triples, std::size_t n,
                              std::size_t grid = 1024);

template <typename R>
AakResult<R> aak_approximant(const AnalyticFunctionSpec& spec, const FourierWindow<R>& window,
                             std::size_t n, std::size_t N, std::size_t grid = 1024) {
    HankelSection<R> sec = build_section(window, N);
    if (n + 1 >= N) throw domain_error("aak_approximant: need n + 1 < N");
    auto triples = singular_triples(sec, n + 1);
    return aak_from_triples(spec, window, sec, triples, n, grid);
}

template <typename R>
AakResult<R> aak_from_triples(const AnalyticFunctionSpec& spec, const FourierWindow<R>& window,
                              const HankelSection<R>& sec,
                              const std::vector<SingularTriple<R>>& triples, std::size_t n,
                              std::size_t grid) {
    if (n + 1 >= triples.size())
        throw domain_error("aak_from_triples: need triples up to index n + 1");
    const R s0 = triples[0].value;

    AakResult<R> out;
    out.defect = sec.truncation_defect;

    // degenerate cluster bookkeeping: step down to the lowest index of the
    // cluster containing n. The gap threshold is 1e-12 s_0 in double and
    // scales with the working epsilon for wider scalars.
    const R cluster_gap = R(1e-12) * s0 * (eps_of<R>() / R(2.220446049250313e-16));
    std::size_t n_eff = n;
    while (n_eff >= 1 && triples[n_eff - 1].value - triples[n_eff].value < cluster_gap) --n_eff;
    if (n_eff != n) {
        out.approx.warnings.push_back("degenerate singular value cluster; reporting index " +
                                      std::to_string(n_eff));
    }

    if (!triples[n_eff].trusted) {
        // numerically rational symbol: recover the r poles by matrix pencil
        std::vector<R> sv;
        for (const auto& t : triples) sv.push_back(t.value);
        std::size_t r = effective_rank(sv);
        out.exact_recovery = true;
        out.index = n_eff;
        out.s_value = triples[n_eff].value;
        MeromorphicApproximant<R>& M = out.approx;
        M.provenance = Provenance::aak;
        M.degree_budget = n;
        if (r > 0) {
            std::vector<cxd> ps = detail::pencil_poles(sec, r);
            // residues from the leading window moments
            Matrix<cxd> V(r, r);
            std::vector<cxd> rhs(r);
            for (std::size_t k = 0; k < r; ++k) {
                for (std::size_t m = 0; m < r; ++m) V(k, m) = ipow(ps[m], long(k));
                rhs[k] = to_cxd(window.c(k + 1));
            }
            std::vector<cxd> res = lu_solve(V, rhs);
            for (std::size_t m = 0; m < r; ++m) {
                PoleInfo<R> p;
                p.z = cx_of<R>(ps[m]);
                p.mult = 1;
                p.principal = {cx_of<R>(res[m])};
                M.poles.push_back(p);
            }
        }
        rational_from_principal_parts(M);
        out.trace = error_on_circle(spec, M, grid);
        return out;
    }

    const auto& t = triples[n_eff];
    MeromorphicApproximant<R>& M = out.approx;
    M.provenance = Provenance::aak;
    M.degree_budget = n;
    M.num = detail::plus_projection(window, t.v);
    M.den = t.v;
    out.index = n_eff;
    out.s_value = t.value;

    // poles: zeros of v_n inside the disk. Double-precision roots seed a
    // simultaneous refinement in the working scalar; seeds of clustered roots
    // can otherwise collapse onto one root under per-root polishing.
    std::vector<cxd> roots_d = aberth_roots_structured(poly_to_double(t.v));
    std::vector<Cx<R>> seeds;
    for (const auto& z : roots_d)
        if (abs(z) < 1.02) seeds.push_back(cx_of<R>(z));
    std::vector<Cx<R>> refined = aberth_polish(t.v, seeds);
    std::vector<Cx<R>> inside;
    for (const auto& z : refined)
        if (abs(z) < R(1) - R(1e-8)) inside.push_back(z);
    if (n_eff != n || triples[n_eff + 1].value >= t.value - cluster_gap) {
        // Degenerate singular value: the chosen cluster vector has removable
        // zeros on top of the true poles (the error numerator vanishes there
        // as well), and near-coincident refined roots may repeat. Keep one
        // representative per location and only zeros where the numerator
        // stays away from its roundoff floor.
        R env(0);
        for (const auto& cc : M.num) env += abs(cc);
        R floor_num = R(1e6) * eps_of<R>() * env * R(double(M.num.size()));
        std::vector<Cx<R>> kept;
        for (const auto& z : inside) {
            bool dup = false;
            for (const auto& q : kept)
                if (abs(z - q) < R(1e-12)) dup = true;
            if (dup) continue;
            if (abs(poly_eval(M.num, z)) <= floor_num) continue;  // removable
            kept.push_back(z);
        }
        if (kept.size() != inside.size())
            M.warnings.push_back("degenerate cluster: dropped " +
                                 std::to_string(inside.size() - kept.size()) +
                                 " removable zero(s)");
        inside = std::move(kept);
    } else if (inside.size() != n_eff) {
        M.warnings.push_back("pole count mismatch (" + std::to_string(inside.size()) + " of " +
                             std::to_string(n_eff) + "); keeping smallest-modulus roots");
        std::sort(refined.begin(), refined.end(),
                  [](const Cx<R>& a, const Cx<R>& b) { return abs(a) < abs(b); });
        inside.assign(refined.begin(),
                      refined.begin() + long(std::min<std::size_t>(n_eff, refined.size())));
        while (!inside.empty() && !(abs(inside.back()) < R(1))) inside.pop_back();
    }
    Poly<R> dden = poly_derivative(t.v);
    for (const auto& zr : inside) {
        PoleInfo<R> p;
        p.z = zr;
        p.mult = 1;
        Cx<R> resid = poly_eval(M.num, p.z) / poly_eval(dden, p.z);
        p.principal = {resid};
        M.poles.push_back(p);
    }

    out.trace = error_on_circle(spec, M, grid);
    return out;
}

// ---------------------------------------------------------------------------
// Nehari modification: N(M) = M + best-H^inf approximant of f - M.
// Implemented through the symbol g = f - (principal parts of M), whose Hankel
// operator coincides with that of f - M; the modification is
//     N(M) = M_- + P_+(g v_0) / v_0
// with v_0 a top singular vector of the g-section. Poles are unchanged.
// ---------------------------------------------------------------------------

namespace detail {

template <typename R>
Cx<R> binom_r(std::size_t top, std::size_t j) {
    // C(top, j) as scalar
    R v(1);
    for (std::size_t i = 0; i < j; ++i) v = v * R(double(top - i)) / R(double(i + 1));
    return Cx<R>(v);
}

// negative Fourier coefficients of a sum of principal parts:
// c_{-k}[(z-xi)^{-(j+1)}] = C(k-1, j) xi^{k-1-j}
template <typename R>
std::vector<Cx<R>> principal_part_coeffs(const std::vector<PoleInfo<R>>& poles, std::size_t K) {
    std::vector<Cx<R>> c(K, Cx<R>());
    for (const auto& p : poles) {
        for (int j = 0; j < p.mult; ++j) {
            for (std::size_t k = std::size_t(j) + 1; k <= K; ++k) {
                Cx<R> term = binom_r<R>(k - 1, std::size_t(j)) * ipow(p.z, long(k - 1 - std::size_t(j)));
                c[k - 1] += p.principal[std::size_t(j)] * term;
            }
        }
    }
    return c;
}

}  // namespace detail

template <typename R>
struct NehariResult {
    MeromorphicApproximant<R> approx;
    ErrorTrace<R> trace;
    R hankel_norm{};  // ||Gamma_{f-M}|| = sup modulus of the new error
};

template <typename R>
NehariResult<R> nehari_modify(const AnalyticFunctionSpec& spec, const FourierWindow<R>& window,
                              const MeromorphicApproximant<R>& M, std::size_t N,
                              std::size_t grid = 1024) {
    if (2 * N > window.size()) throw domain_error("nehari_modify: window too short for section");
    // window of g = f - M_-
    FourierWindow<R> gw = window;
    std::vector<Cx<R>> mc = detail::principal_part_coeffs(M.poles, window.size());
    for (std::size_t k = 0; k < gw.coef.size(); ++k) gw.coef[k] -= mc[k];
    // the principal parts decay with the pole moduli; widen the certified
    // envelope so the defect bookkeeping stays valid for the modified symbol
    double pmax = 0;
    for (const auto& p : M.poles) pmax = std::max(pmax, to_double(abs(p.z)));
    if (!M.poles.empty()) {
        R scale(0);
        for (const auto& p : M.poles)
            for (const auto& q : p.principal) scale += abs(q);
        gw.tail_base = std::min(std::max(gw.tail_base, pmax), 0.995);
        gw.tail_const += scale * R(double(window.size() + 1));
        R tb = gw.tail_const;
        for (std::size_t i = 0; i <= window.size(); ++i) tb *= R(gw.tail_base);
        gw.tail_bound = tb;
        gw.max_on_circle += scale;
    }

    HankelSection<R> sec = build_section(gw, N);
    // The top singular value of Gamma_{f-M} is typically degenerate (for an
    // AAK input its multiplicity is 2n+1), and the section returns an
    // arbitrary vector of the cluster. All cluster vectors are maximizing
    // vectors, so each realizes a valid Nehari correction in exact
    // arithmetic; numerically their realized errors differ through the
    // uncontrolled output tail, so the vector whose error is most circular
    // on a coarse probe grid is selected.
    std::size_t upto = std::min<std::size_t>(sec.N - 1, 40);
    auto triples = singular_triples(sec, upto);
    const R s0 = triples[0].value;
    std::vector<std::size_t> cluster;
    for (std::size_t k = 0; k <= upto; ++k)
        if (triples[k].value >= s0 * R(1 - 1e-6)) cluster.push_back(k);

    MeromorphicApproximant<R> Mminus;
    Mminus.poles = M.poles;
    rational_from_principal_parts(Mminus);

    auto realize = [&](const SingularTriple<R>& t) {
        MeromorphicApproximant<R> NM;
        NM.provenance = Provenance::nehari_modified;
        NM.degree_budget = M.degree_budget;
        NM.poles = M.poles;
        NM.warnings = M.warnings;
        Poly<R> b = detail::plus_projection(gw, t.v);
        NM.num = poly_add(poly_mul(Mminus.num, t.v), poly_mul(b, Mminus.den));
        NM.den = poly_mul(Mminus.den, t.v);
        return NM;
    };
    auto probe_ratio = [&](const MeromorphicApproximant<R>& NM) {
        const R twopi = R(2) * pi_const<R>();
        R sup(0), inf(0);
        for (int g = 0; g < 128; ++g) {
            Cx<R> z = polar_cx(R(1), twopi * R(double(g) + 0.5) / R(128));
            R v = abs(evaluate(spec, z) - NM(z));
            if (g == 0) sup = inf = v;
            sup = rmax(sup, v);
            inf = rmin(inf, v);
        }
        return inf > R(0) ? sup / inf : R(1e30);
    };

    NehariResult<R> out;
    out.hankel_norm = s0;
    R best_ratio(1e30);
    std::size_t chosen = 0;
    for (std::size_t k : cluster) {
        MeromorphicApproximant<R> cand = realize(triples[k]);
        R ratio = probe_ratio(cand);
        if (ratio < best_ratio) {
            best_ratio = ratio;
            chosen = k;
            out.approx = std::move(cand);
        }
    }
    if (best_ratio > R(1.05))
        out.approx.warnings.push_back("nehari correction failed to restore circularity");

    // the chosen vector should be outer; flag in-disk zeros
    for (const auto& z : aberth_roots_structured(poly_to_double(triples[chosen].v)))
        if (abs(z) < 1.0 - 1e-8) {
            out.approx.warnings.push_back("nehari correction vector has an in-disk zero");
            break;
        }

    out.trace = error_on_circle(spec, out.approx, grid);
    return out;
}

}  // namespace merolab
