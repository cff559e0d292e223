#include <catch2/catch_amalgamated.hpp>

#include "merolab/cuts.hpp"

#include <random>

using namespace merolab;

TEST_CASE("geodesic cut of a symmetric pair is the segment itself") {
    CutSolution g = geodesic_cut(cxd(-0.5, 0), cxd(0.5, 0));
    REQUIRE(std::abs(g.model_r - 0.5) < 1e-12);
    for (int i = 0; i <= 16; ++i) {
        cxd p = g.chain.arcs[0].point(i / 16.0);
        REQUIRE(std::abs(p.im) < 1e-12);
        REQUIRE(std::abs(p.re) <= 0.5 + 1e-12);
    }
    REQUIRE(std::abs(g.capacity.capacity - segment_capacity_oracle(0.5)) < 1e-8);
}

TEST_CASE("geodesic cut of {0, 0.5}: the transported half-length") {
    CutSolution g = geodesic_cut(cxd(0, 0), cxd(0.5, 0));
    REQUIRE(std::abs(g.model_r - (2.0 - std::sqrt(3.0))) < 1e-12);  // 0.267949...
    cxd ma = g.transport.apply(cxd(0, 0));
    cxd mb = g.transport.apply(cxd(0.5, 0));
    REQUIRE(abs(ma + mb) < 1e-12);  // m(a) = -m(b)
    REQUIRE(std::abs(ma.im) < 1e-12);
    REQUIRE_THROWS_AS(geodesic_cut(cxd(0.2, 0), cxd(0.2, 0)), domain_error);
}

TEST_CASE("geodesic capacity is Mobius invariant") {
    cxd a(-0.32, 0.1), b(0.44, -0.25);
    CutSolution base = geodesic_cut(a, b);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-0.35, 0.35);
    for (int t = 0; t < 2; ++t) {
        Mobius m = Mobius::disk_automorphism(cxd(U(rng), U(rng)), U(rng) * 3);
        CutSolution moved = geodesic_cut(m.apply(a), m.apply(b));
        REQUIRE(std::abs(moved.capacity.capacity - base.capacity.capacity) < 1e-6);
    }
}

TEST_CASE("geodesic cuts are Mobius equivariant as point sets") {
    cxd a(-0.32, 0.1), b(0.44, -0.25);
    CutSolution base = geodesic_cut(a, b);
    Mobius m = Mobius::disk_automorphism(cxd(0.21, -0.13), 0.8);
    CutSolution moved = geodesic_cut(m.apply(a), m.apply(b));
    auto sa = transport_chain(base.chain, m).sample(257);
    auto sb = moved.chain.sample(257);
    double hausdorff = 0;
    for (const auto& p : sa) {
        double best = 1e9;
        for (const auto& q : sb) best = std::min(best, abs(p - q));
        hausdorff = std::max(hausdorff, best);
    }
    // sampled Hausdorff bound: sample spacing dominates; the sets agree to 1e-8
    double spacing = moved.chain.total_length() / 256.0;
    REQUIRE(hausdorff < spacing + 1e-8);
    // and exact point membership: endpoints map to endpoints
    REQUIRE(moved.chain.distance(m.apply(a)) < 1e-9);
    REQUIRE(moved.chain.distance(m.apply(b)) < 1e-9);
}

TEST_CASE("competitor battery never beats the geodesic") {
    cxd a(-0.5, 0), b(0.5, 0);
    CutSolution g = geodesic_cut(a, b);
    std::vector<ArcChain> rivals;
    rivals.push_back(bowed_chain(a, b, 0.15));
    rivals.push_back(bowed_chain(a, b, -0.25));
    rivals.push_back(bowed_chain(a, b, 0.4));
    rivals.push_back(polyline_chain(a, cxd(0, 0.25), b));
    rivals.push_back(polyline_chain(a, cxd(-0.1, -0.35), b));
    for (const auto& rc : rivals) {
        double cap = equilibrium(rc).capacity;
        REQUIRE(cap >= g.capacity.capacity + 1e-4);  // strictly larger
    }
}

TEST_CASE("s-property residual: extremal vs bowed") {
    CutSolution g = geodesic_cut(cxd(-0.5, 0), cxd(0.5, 0));
    REQUIRE(s_property_residual(g) < 0.02);

    // deliberately bowed competitor through 0.2i
    CutSolution bowed;
    bowed.chain = bowed_chain(cxd(-0.5, 0), cxd(0.5, 0), 0.2);
    bowed.capacity = equilibrium(bowed.chain);
    REQUIRE(s_property_residual(bowed) > 0.1);
}

TEST_CASE("tripod at the equilateral configuration") {
    cxd a(0.5, 0);
    cxd b = 0.5 * cxd(std::cos(2 * 3.14159265358979323846 / 3), std::sin(2 * 3.14159265358979323846 / 3));
    cxd c = conj(b);
    CutSolution tri = tripod_cut(a, b, c);
    REQUIRE(abs(tri.junction) < 1e-6);  // symmetry forces the center
    REQUIRE(tri.chain.arcs.size() == 3);
    REQUIRE(tri.chain.junctions.size() == 1);
    // all three points are arc endpoints
    for (const cxd& p : {a, b, c}) REQUIRE(tri.chain.distance(p) < 1e-9);
    // certificate: capacity increases under all tested perturbations
    REQUIRE(tri.perturbation_margin >= -tri.capacity.cap_error_estimate - 1e-9);
    REQUIRE(s_property_residual(tri) < 0.05);
}

TEST_CASE("collinear tripod degenerates to the geodesic") {
    CutSolution tri = tripod_cut(cxd(-0.5, 0), cxd(0.1, 0), cxd(0.5, 0));
    REQUIRE_FALSE(tri.warnings.empty());
    CutSolution g = geodesic_cut(cxd(-0.5, 0), cxd(0.5, 0));
    REQUIRE(std::abs(tri.capacity.capacity - g.capacity.capacity) < 1e-5);
}

TEST_CASE("tripod rejects bad input") {
    REQUIRE_THROWS_AS(tripod_cut(cxd(0.2, 0), cxd(0.2, 0), cxd(0, 0.3)), domain_error);
    REQUIRE_THROWS_AS(tripod_cut(cxd(0.97, 0), cxd(-0.2, 0), cxd(0, 0.3)), domain_error);
}
