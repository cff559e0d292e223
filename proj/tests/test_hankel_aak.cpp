#include <catch2/catch_amalgamated.hpp>

#include <boost/multiprecision/mpfr.hpp>

#include "merolab/aak.hpp"
#include "merolab/serialize.hpp"
#include "merolab/elliptic.hpp"

namespace bmp = boost::multiprecision;
using MP = bmp::number<bmp::mpfr_float_backend<100>, bmp::et_off>;

using namespace merolab;

TEST_CASE("hankel section of a single pole") {
    auto spec = AnalyticFunctionSpec::single_pole(cxd(0.4, 0));
    auto w = fourier_coefficients<double>(spec, 8, 0.7, 1e-16);
    auto sec = build_section(w, 3);
    double want[3][3] = {{1, .4, .16}, {.4, .16, .064}, {.16, .064, .0256}};
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
            REQUIRE(abs(sec.entries(std::size_t(j), std::size_t(k)) - cxd(want[j][k], 0)) < 1e-13);
    REQUIRE(sec.real_symmetric);
}

TEST_CASE("hankel section of 1/z and of the symmetric square root") {
    auto spec0 = AnalyticFunctionSpec::single_pole(cxd(0, 0));
    auto w0 = fourier_coefficients<double>(spec0, 4, 0.5, 1e-16);
    auto s0 = build_section(w0, 2);
    REQUIRE(abs(s0.entries(0, 0) - cxd(1, 0)) < 1e-14);
    REQUIRE(abs(s0.entries(0, 1)) < 1e-14);
    REQUIRE(abs(s0.entries(1, 1)) < 1e-14);

    auto spec = AnalyticFunctionSpec::two_branch(cxd(0.5, 0), cxd(-0.5, 0));
    auto w = fourier_coefficients<double>(spec, 6, 0.0, 1e-15);
    auto sec = build_section(w, 2);
    REQUIRE(abs(sec.entries(0, 0) - cxd(1, 0)) < 1e-13);
    REQUIRE(abs(sec.entries(0, 1)) < 1e-13);
    REQUIRE(abs(sec.entries(1, 1) - cxd(0.125, 0)) < 1e-13);
}

TEST_CASE("hankel structure is exactly anti-diagonal-constant") {
    auto spec = AnalyticFunctionSpec::two_branch(cxd(0.4, 0.1), cxd(-0.3, -0.2));
    auto w = fourier_coefficients<double>(spec, 24, 0.0, 1e-14);
    auto sec = build_section(w, 8);
    for (std::size_t j = 0; j < 8; ++j)
        for (std::size_t k = 0; k < 8; ++k)
            for (std::size_t j2 = 0; j2 < 8; ++j2) {
                std::size_t sum = j + k;
                if (j2 > sum || sum - j2 >= 8) continue;
                REQUIRE(sec.entries(j, k) == sec.entries(j2, sum - j2));
            }
}

TEST_CASE("build_section demands a long enough window") {
    auto spec = AnalyticFunctionSpec::single_pole(cxd(0.4, 0));
    auto w = fourier_coefficients<double>(spec, 8, 0.7, 1e-16);
    REQUIRE_THROWS_AS(build_section(w, 5), domain_error);
}

TEST_CASE("rank-one Hankel: singular values and noise floor") {
    auto spec = AnalyticFunctionSpec::single_pole(cxd(0.4, 0));
    const std::size_t N = 16;
    auto w = fourier_coefficients<double>(spec, 2 * N, 0.7, 1e-18);
    auto sec = build_section(w, N);
    auto tr = singular_triples(sec, 5);
    double want = (1 - std::pow(0.4, 2.0 * N)) / (1 - 0.16);
    REQUIRE(std::abs(to_double(tr[0].value) - want) < 1e-13);
    for (std::size_t k = 1; k <= 5; ++k) {
        REQUIRE(tr[k].value <= to_double(sec.truncation_defect) + 1e-14);
        REQUIRE_FALSE(tr[k].trusted);  // numerical-rank warning
    }
}

TEST_CASE("singular values are stable in the section size") {
    auto spec = AnalyticFunctionSpec::two_branch(cxd(0.5, 0), cxd(-0.5, 0));
    auto w = fourier_coefficients<double>(spec, 96, 0.0, 1e-22);
    auto secA = build_section(w, 32);
    auto secB = build_section(w, 48);
    auto trA = singular_triples(secA, 6);
    auto trB = singular_triples(secB, 6);
    double allow = to_double(secA.truncation_defect) + to_double(secB.truncation_defect) + 1e-13;
    for (std::size_t n = 0; n <= 6; ++n)
        REQUIRE(std::abs(to_double(trA[n].value) - to_double(trB[n].value)) <= allow);
    for (std::size_t n = 1; n <= 6; ++n) REQUIRE(trB[n].value <= trB[n - 1].value);
}

TEST_CASE("AAK at n=1 recovers a rational symbol exactly") {
    auto spec = AnalyticFunctionSpec::single_pole(cxd(0.4, 0));
    auto w = fourier_coefficients<double>(spec, 64, 0.7, 1e-20);
    auto res = aak_approximant(spec, w, 1, 32, 256);
    REQUIRE(res.exact_recovery);
    REQUIRE(res.approx.poles.size() == 1);
    REQUIRE(abs(res.approx.poles[0].z - Cx<double>(0.4, 0)) < 1e-10);
    REQUIRE(to_double(res.trace.sup) <= 10 * to_double(res.defect) + 1e-13);
}

TEST_CASE("AAK at n=0 yields the circular Nehari error") {
    auto spec = AnalyticFunctionSpec::single_pole(cxd(0.4, 0));
    const std::size_t N = 24;
    auto w = fourier_coefficients<double>(spec, 2 * N, 0.7, 1e-20);
    auto sec = build_section(w, N);
    auto tr = singular_triples(sec, 1);
    auto res = aak_approximant(spec, w, 0, N, 512);
    // sup = s_0 = (1 - 0.4^{2N})/(1 - 0.16) at this section size
    REQUIRE(std::abs(to_double(res.trace.sup) - to_double(tr[0].value)) <
            1e-6 * to_double(tr[0].value));
    REQUIRE(to_double(res.trace.sup / res.trace.inf) < 1.0 + 1e-6);
    REQUIRE(res.approx.poles.empty());
}

TEST_CASE("AAK on the symmetric square root: poles on the cut, identity, circularity") {
    auto spec = AnalyticFunctionSpec::two_branch(cxd(0.5, 0), cxd(-0.5, 0));
    const std::size_t N = 64, n = 10;
    auto w = fourier_coefficients<MP>(spec, 2 * N, 0.0, 1e-45, false);
    auto sec = build_section(w, N);
    auto res = aak_approximant(spec, w, n, N, 1024);
    REQUIRE(res.approx.poles.size() == n);
    for (const auto& p : res.approx.poles) {
        REQUIRE(std::abs(to_double(p.z.im)) < 1e-3);   // symmetry oracle: poles real
        REQUIRE(std::abs(to_double(p.z.re)) < 0.5);
    }
    double s = to_double(res.s_value);
    double tol = 1e-3 * s + to_double(sec.truncation_defect);
    REQUIRE(std::abs(to_double(res.trace.sup) - s) <= tol);
    REQUIRE(to_double(res.trace.sup / res.trace.inf) <= 1.05);
    REQUIRE(res.trace.refinement < 1e-3);
    // pole budget invariant
    REQUIRE(res.approx.pole_count() <= n);
}

TEST_CASE("sup over A is attained on T (maximum principle spot check)") {
    auto spec = AnalyticFunctionSpec::two_branch(cxd(0.5, 0), cxd(-0.5, 0));
    auto w = fourier_coefficients<double>(spec, 96, 0.0, 1e-22);
    auto res = aak_approximant(spec, w, 4, 48, 512);
    for (int k = 0; k < 12; ++k) {
        double th = 0.5 * k;
        Cx<double> z(2 * std::cos(th), 2 * std::sin(th));
        double outside = to_double(abs(evaluate(spec, z) - res.approx(z)));
        REQUIRE(outside <= to_double(res.trace.sup) * (1 + 1e-9) + 1e-15);
    }
}

TEST_CASE("nehari modification is idempotent on AAK output") {
    auto spec = AnalyticFunctionSpec::two_branch(cxd(0.5, 0), cxd(-0.5, 0));
    const std::size_t N = 48;
    auto w = fourier_coefficients<double>(spec, 2 * N, 0.0, 1e-22);
    auto res = aak_approximant(spec, w, 4, N, 512);
    auto nm = nehari_modify(spec, w, res.approx, N, 512);
    REQUIRE(nm.approx.poles.size() == res.approx.poles.size());
    REQUIRE(std::abs(to_double(nm.trace.sup) - to_double(res.trace.sup)) <=
            1e-8 * to_double(res.trace.sup));
}

TEST_CASE("nehari modification at n=0 solves the Nehari problem") {
    auto spec = AnalyticFunctionSpec::single_pole(cxd(0.4, 0));
    const std::size_t N = 24;
    auto w = fourier_coefficients<double>(spec, 2 * N, 0.7, 1e-20);
    auto sec = build_section(w, N);
    auto tr = singular_triples(sec, 0);
    MeromorphicApproximant<double> zero;  // M = 0, no poles
    zero.num = {Cx<double>(0, 0)};
    zero.den = {Cx<double>(1, 0)};
    auto nm = nehari_modify(spec, w, zero, N, 512);
    REQUIRE(std::abs(to_double(nm.trace.sup) - to_double(tr[0].value)) <
            1e-8 * to_double(tr[0].value));
    REQUIRE(to_double(nm.trace.sup / nm.trace.inf) < 1.0 + 1e-6);
}

TEST_CASE("error_on_circle basics") {
    auto spec = AnalyticFunctionSpec::single_pole(cxd(0.4, 0));
    MeromorphicApproximant<double> M;  // M = f
    PoleInfo<double> p;
    p.z = Cx<double>(0.4, 0);
    p.principal = {Cx<double>(1, 0)};
    M.poles = {p};
    rational_from_principal_parts(M);
    auto t = error_on_circle(spec, M, 128);
    REQUIRE(to_double(t.sup) < 1e-14);

    MeromorphicApproximant<double> zero;
    zero.num = {Cx<double>(0, 0)};
    zero.den = {Cx<double>(1, 0)};
    auto tz = error_on_circle(spec, zero, 128);
    REQUIRE(std::abs(to_double(tz.sup) - 1.0 / 0.6) < 1e-12);  // attained at z = 1
    REQUIRE_THROWS_AS(error_on_circle(spec, zero, 32), domain_error);
}

TEST_CASE("analytic tail reproduces the H-infinity part") {
    auto spec = AnalyticFunctionSpec::two_branch(cxd(0.5, 0), cxd(-0.5, 0));
    auto w = fourier_coefficients<double>(spec, 96, 0.0, 1e-22);
    auto res = aak_approximant(spec, w, 3, 48, 256);
    auto [taylor, bound] = res.approx.analytic_tail(48, 0.9);
    // compare at an interior point
    Cx<double> z(0.31, -0.2);
    Cx<double> direct = res.approx(z) - res.approx.principal_sum(z);
    Cx<double> viataylor = poly_eval(taylor, z);
    REQUIRE(abs(direct - viataylor) < 1e-8 * (1 + to_double(bound)));
}

TEST_CASE("approximant export carries poles, residues and the trace summary") {
    auto spec = AnalyticFunctionSpec::single_pole(cxd(0.4, 0), cxd(2, 0));
    auto w = fourier_coefficients<double>(spec, 64, 0.7, 1e-20);
    auto res = aak_approximant(spec, w, 1, 32, 256);
    KvDoc doc = serialize_approximant(res.approx, &res.trace);
    REQUIRE(doc.get("provenance") == "aak");
    REQUIRE(doc.get_int("pole_count") == 1);
    auto ps = doc.get_complex_list("poles");
    REQUIRE(abs(ps.at(0) - cxd(0.4, 0)) < 1e-9);
    REQUIRE(doc.get_double("error_sup") >= 0);
    // parses back as a stable document
    REQUIRE(KvDoc::parse(doc.to_string()).to_string() == doc.to_string());
}

TEST_CASE("singular values of the square-root member trend geometrically") {
    auto spec = AnalyticFunctionSpec::two_branch(cxd(0.5, 0), cxd(-0.5, 0));
    const std::size_t N = 48;
    auto w = fourier_coefficients<double>(spec, 2 * N, 0.0, 1e-24);
    auto sec = build_section(w, N);
    auto tr = singular_triples(sec, 10);
    // n-th roots settle toward a constant < 1 (regression over the tail)
    std::vector<std::size_t> ns;
    std::vector<double> lv;
    for (std::size_t n = 1; n <= 10; ++n) {
        ns.push_back(n);
        lv.push_back(std::log(to_double(tr[n].value)));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 3; i < ns.size(); ++i) {
        double x = double(ns[i]), y = lv[i];
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++m;
    }
    double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    double limit = std::exp(slope);
    REQUIRE(limit < 1.0);
    REQUIRE(limit > 0.0);
    // matches the capacity route to 10% already at these degrees
    double want = std::exp(-2.0 / segment_capacity_oracle(0.5));
    REQUIRE(std::abs(limit - want) < 0.1 * want);
}
