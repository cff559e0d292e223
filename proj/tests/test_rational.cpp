#include <catch2/catch_amalgamated.hpp>

#include "merolab/interp.hpp"

using namespace merolab;

namespace {
const double PI = 3.14159265358979323846;

double circ_dist(double a, double b) {
    double d = std::fmod(std::abs(a - b), 2 * PI);
    return std::min(d, 2 * PI - d);
}
}  // namespace

TEST_CASE("balayage scheme: symmetry and the n=0 maximizer") {
    CutSolution cut = geodesic_cut(cxd(-0.5, 0), cxd(0.5, 0));
    auto bal = balayage_to_circle(cut.capacity.measure, 8192);

    // n = 0: the single node sits at a maximizer of the swept density
    auto s0 = balayage_scheme(cut, 0);
    REQUIRE(s0.angles.size() == 1);
    double dmax = *std::max_element(bal.density.begin(), bal.density.end());
    std::size_t cell = std::size_t(std::fmod(s0.angles[0] + 2 * PI, 2 * PI) / (2 * PI) * 8192) % 8192;
    REQUIRE(bal.density[cell] > 0.999 * dmax);

    // theta -> -theta symmetry holds exactly (up to quantile resolution)
    auto s5 = balayage_scheme(cut, 5);
    REQUIRE(s5.angles.size() == 11);
    for (double th : s5.angles) {
        double best = 1e9;
        for (double th2 : s5.angles) best = std::min(best, circ_dist(-th, th2));
        REQUIRE(best < 1e-3);
    }
    // theta -> pi - theta only within the quantile spacing (odd node counts
    // cannot be invariant under the full reflection group)
    double spacing = 2 * PI / 11.0;
    for (double th : s5.angles) {
        double best = 1e9;
        for (double th2 : s5.angles) best = std::min(best, circ_dist(PI - th, th2));
        REQUIRE(best < 0.75 * spacing);
    }
}

TEST_CASE("balayage scheme of a concentrated measure is nearly uniform") {
    ArcChain tiny;
    tiny.arcs.push_back(Arc::circle(cxd(0, 0), 1e-6));
    CutSolution cut;
    cut.chain = tiny;
    cut.capacity = equilibrium(tiny);
    auto s = balayage_scheme(cut, 4);
    std::vector<double> a = s.angles;
    std::sort(a.begin(), a.end());
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        double gap = a[i + 1] - a[i];
        REQUIRE(std::abs(gap - 2 * PI / 9.0) < 0.05 * 2 * PI / 9.0);
    }
}

TEST_CASE("interpolation reproduces rational members exactly") {
    auto spec = AnalyticFunctionSpec::single_pole(cxd(0.4, 0));
    auto M = interpolate<double>(spec, uniform_scheme(1), 1);
    REQUIRE(M.poles.size() == 1);
    REQUIRE(abs(M.poles[0].z - Cx<double>(0.4, 0)) < 1e-10);
    auto t = error_on_circle(spec, M, 128);
    REQUIRE(to_double(t.sup) < 1e-10);

    // two-pole member at n = 2, quantile scheme
    AnalyticFunctionSpec two;
    two.kind = FunctionKind::rational_pole_sum;
    two.polar_points = {cxd(0.4, 0.1), cxd(-0.3, -0.2)};
    two.parameters = {cxd(1, 0), cxd(0.5, -0.5)};
    auto M2 = interpolate<double>(two, uniform_scheme(2), 2);
    auto t2 = error_on_circle(two, M2, 128);
    REQUIRE(to_double(t2.sup) < 1e-10);
}

TEST_CASE("interpolation of the square-root member puts poles near the cut") {
    auto spec = AnalyticFunctionSpec::two_branch(cxd(0.5, 0), cxd(-0.5, 0));
    CutSolution cut = geodesic_cut(cxd(-0.5, 0), cxd(0.5, 0));
    auto M = interpolate<double>(spec, balayage_scheme(cut, 8), 8);
    REQUIRE(M.poles.size() == 8);
    for (const auto& p : M.poles) REQUIRE(cut.chain.distance(to_cxd(p.z)) < 1e-2);
}

TEST_CASE("classical Pade is worse than the balayage scheme on T") {
    auto spec = AnalyticFunctionSpec::two_branch(cxd(0.5, 0), cxd(-0.5, 0));
    CutSolution cut = geodesic_cut(cxd(-0.5, 0), cxd(0.5, 0));
    auto w = fourier_coefficients<double>(spec, 32, 0.0, 1e-18);
    std::size_t n = 6;
    auto Mb = interpolate<double>(spec, balayage_scheme(cut, n), n);
    auto Mp = interpolate<double>(spec, pade_scheme(), n, &w);
    double eb = to_double(error_on_circle(spec, Mb, 256).sup);
    double ep = to_double(error_on_circle(spec, Mp, 256).sup);
    REQUIRE(ep > eb);  // qualitative sign check
}

TEST_CASE("degenerate interpolation yields the minimal-norm solution with a warning") {
    auto spec = AnalyticFunctionSpec::single_pole(cxd(0.4, 0));
    auto M = interpolate<double>(spec, uniform_scheme(2), 2);  // (2,2) on a (1,1) member
    bool flagged = false;
    for (const auto& w : M.warnings) flagged = flagged || w.find("rank-deficient") != std::string::npos;
    REQUIRE(flagged);
    auto t = error_on_circle(spec, M, 128);
    REQUIRE(to_double(t.sup) < 1e-8);
}

TEST_CASE("retention keeps only the poles inside the region") {
    MeromorphicApproximant<double> M;
    for (auto [z, r] : {std::pair{cxd(0.3, 0), cxd(1, 0)}, std::pair{cxd(0.9, 0), cxd(0.2, 0)}}) {
        PoleInfo<double> p;
        p.z = Cx<double>(z.re, z.im);
        p.principal = {Cx<double>(r.re, r.im)};
        M.poles.push_back(p);
    }
    M.degree_budget = 2;
    rational_from_principal_parts(M);
    RetentionRegion region = make_retention_region(cxd(0.3, 0), 0.05);
    auto R = retain_singular_part(M, region);
    REQUIRE(R.poles.size() == 1);
    REQUIRE(abs(R.poles[0].z - Cx<double>(0.3, 0)) < 1e-14);
    REQUIRE(R.provenance == Provenance::retention);

    // degree bookkeeping: count equals the in-region poles, <= budget
    REQUIRE(R.pole_count() <= M.degree_budget);

    // projection: retaining the output again changes nothing
    auto R2 = retain_singular_part(R, region);
    REQUIRE(R2.poles.size() == R.poles.size());
    for (int k = 0; k < 8; ++k) {
        Cx<double> z = polar_cx(1.0, 0.7 * k);
        REQUIRE(abs(R2(z) - R(z)) < 1e-12);
    }
}

TEST_CASE("retention with no pole in the region gives the zero approximant") {
    MeromorphicApproximant<double> M;
    PoleInfo<double> p;
    p.z = Cx<double>(0.9, 0);
    p.principal = {Cx<double>(1, 0)};
    M.poles = {p};
    M.degree_budget = 1;
    rational_from_principal_parts(M);
    RetentionRegion region = make_retention_region(cxd(0.3, 0), 0.05);
    auto R = retain_singular_part(M, region);
    REQUIRE(R.poles.empty());
    auto spec = AnalyticFunctionSpec::single_pole(cxd(0.9 * 0.3, 0));  // any f of unit scale
    auto t = error_on_circle(spec, R, 128);
    REQUIRE(to_double(t.sup) > 0.5);  // error at the scale of ||f||
}

TEST_CASE("retention on a real AAK output of the essential member") {
    auto spec = AnalyticFunctionSpec::essential(cxd(0.3, 0));
    auto w = fourier_coefficients<double>(spec, 96, 0.0, 1e-24);
    auto res = aak_approximant(spec, w, 4, 48, 256);
    RetentionRegion region = make_retention_region(cxd(0.3, 0), 0.05);
    auto R = retain_singular_part(res.approx, region);
    REQUIRE(R.pole_count() == res.approx.pole_count());  // everything clusters at 0.3
    for (const auto& p : R.poles) REQUIRE(region.contains(to_cxd(p.z)));
    auto t = error_on_circle(spec, R, 256);
    REQUIRE(to_double(t.sup) < 100 * to_double(res.trace.sup) + 1e-12);
}
