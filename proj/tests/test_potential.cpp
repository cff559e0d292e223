#include <catch2/catch_amalgamated.hpp>

#include "merolab/elliptic.hpp"
#include "merolab/potential.hpp"

#include <random>

using namespace merolab;

TEST_CASE("green function of the disk") {
    REQUIRE(std::abs(green_function(cxd(0, 0), cxd(0.5, 0)) - std::log(2.0)) < 1e-14);
    REQUIRE(std::abs(green_function(cxd(0.3, 0), cxd(0, 0.6)) -
                     green_function(cxd(0, 0.6), cxd(0.3, 0))) < 1e-14);
    for (int k = 0; k < 32; ++k) {
        double th = 2 * 3.14159265358979323846 * k / 32;
        cxd z(0.999 * std::cos(th), 0.999 * std::sin(th));
        double g = green_function(z, cxd(0.5, 0));
        REQUIRE(g > 0);
        REQUIRE(g < 0.01);
    }
    REQUIRE_THROWS_AS(green_function(cxd(0.2, 0), cxd(0.2, 0)), domain_error);
    REQUIRE(std::isinf(green_function(cxd(0.2, 0), cxd(0.2, 0), true)));
    REQUIRE_THROWS_AS(green_function(cxd(1.5, 0), cxd(0.2, 0)), domain_error);
}

TEST_CASE("green potential: atom and mean value") {
    DiscreteMeasure d0;
    d0.points = {cxd(0, 0)};
    d0.weights = {1.0};
    REQUIRE(std::abs(green_potential(d0, cxd(0.5, 0)) - std::log(2.0)) < 1e-14);

    DiscreteMeasure ring;
    for (int k = 0; k < 256; ++k) {
        double th = 2 * 3.14159265358979323846 * k / 256;
        ring.points.push_back(cxd(0.5 * std::cos(th), 0.5 * std::sin(th)));
        ring.weights.push_back(1.0 / 256);
    }
    REQUIRE(std::abs(green_potential(ring, cxd(0, 0)) - std::log(2.0)) < 1e-12);
    REQUIRE(std::isinf(green_potential(d0, cxd(0, 0))));
}

TEST_CASE("log potential basics") {
    DiscreteMeasure d0;
    d0.points = {cxd(0, 0)};
    d0.weights = {1.0};
    REQUIRE(std::abs(log_potential(d0, cxd(2, 0)) + std::log(2.0)) < 1e-14);
    DiscreteMeasure circ;
    for (int k = 0; k < 512; ++k) {
        double th = 2 * 3.14159265358979323846 * (k + 0.5) / 512;
        circ.points.push_back(cxd(std::cos(th), std::sin(th)));
        circ.weights.push_back(1.0 / 512);
    }
    REQUIRE(std::abs(log_potential(circ, cxd(0, 0))) < 1e-12);
    REQUIRE(std::abs(log_potential(circ, cxd(2, 0)) + std::log(2.0)) < 1e-12);
}

TEST_CASE("equilibrium on a circle: capacity 1/log(1/r), potential constant inside") {
    ArcChain chain;
    chain.arcs.push_back(Arc::circle(cxd(0, 0), 0.5));
    auto cr = equilibrium(chain);
    REQUIRE(std::abs(cr.capacity - 1.0 / std::log(2.0)) < 1e-10);
    REQUIRE(cr.residual_rel < 1e-8);
    // uniform equilibrium: interior potential is the constant level
    for (const cxd& z : {cxd(0, 0), cxd(0.2, 0.1), cxd(-0.3, 0.2)})
        REQUIRE(std::abs(cr.solution->potential(z) - cr.level) < 1e-10);
}

TEST_CASE("equilibrium on a segment agrees with the conformal-modulus oracle") {
    ArcChain chain;
    chain.arcs.push_back(Arc::segment(cxd(-0.5, 0), cxd(0.5, 0)));
    auto coarse_prm = EquilibriumParams{};
    auto cr = equilibrium(chain, coarse_prm);
    double oracle = segment_capacity_oracle(0.5);
    REQUIRE(std::abs(cr.capacity - oracle) < 1e-6);            // two independent routes
    REQUIRE(std::abs(cr.capacity_extrapolated - oracle) < 1e-6);
    REQUIRE(cr.cap_error_estimate < 1e-6);
    REQUIRE(cr.residual_abs < 1e-6);
    // both resolutions bracket the truth within the reported estimate
    REQUIRE(std::abs(cr.capacity - oracle) <= 10 * cr.cap_error_estimate + 1e-9);
}

TEST_CASE("equilibrium rejects degenerate chains") {
    ArcChain tiny;
    tiny.arcs.push_back(Arc::segment(cxd(0.1, 0), cxd(0.1 + 1e-9, 0)));
    REQUIRE_THROWS_AS(equilibrium(tiny), domain_error);
    ArcChain empty;
    REQUIRE_THROWS_AS(equilibrium(empty), domain_error);
    ArcChain outside;
    outside.arcs.push_back(Arc::segment(cxd(-0.5, 0), cxd(0.9999999999, 0)));
    REQUIRE_THROWS_AS(equilibrium(outside), domain_error);
}

TEST_CASE("equilibrium potential bound off the cut") {
    ArcChain chain;
    chain.arcs.push_back(Arc::segment(cxd(-0.5, 0), cxd(0.5, 0)));
    auto cr = equilibrium(chain);
    // strict inequality with positive margin away from the cut (Green
    // equilibrium potential <= 1/cap everywhere, < off the support)
    double at09 = green_potential(cr.measure, cxd(0.9, 0));
    REQUIRE(at09 < cr.level);
    for (const cxd& z : {cxd(0, 0.3), cxd(0.7, 0.1), cxd(-0.2, -0.5)}) {
        double u = cr.solution->potential(z);
        REQUIRE(u <= cr.level + cr.residual_abs + 1e-9);
        REQUIRE(u < cr.level - 1e-3);  // dist >= 0.1 from the cut
    }
}

TEST_CASE("capacity is monotone under chain inclusion") {
    double caps[3];
    int i = 0;
    for (double r : {0.3, 0.5, 0.7}) {
        ArcChain chain;
        chain.arcs.push_back(Arc::segment(cxd(-r, 0), cxd(r, 0)));
        caps[i++] = equilibrium(chain).capacity;
    }
    REQUIRE(caps[0] < caps[1]);
    REQUIRE(caps[1] < caps[2]);
}

TEST_CASE("conformal invariance of capacity and potentials") {
    ArcChain chain;
    chain.arcs.push_back(Arc::segment(cxd(-0.5, 0), cxd(0.5, 0)));
    auto base = equilibrium(chain);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-0.4, 0.4);
    for (int trial = 0; trial < 2; ++trial) {
        Mobius m = Mobius::disk_automorphism(cxd(U(rng), U(rng)), U(rng));
        ArcChain moved = transport_chain(chain, m);
        auto tr = equilibrium(moved);
        REQUIRE(std::abs(tr.capacity - base.capacity) < 1e-6);
        // potentials correspond under the map
        cxd z(0.2, 0.55);
        REQUIRE(std::abs(tr.solution->potential(m.apply(z)) - base.solution->potential(z)) < 1e-6);
    }
}

TEST_CASE("balayage onto the circle") {
    DiscreteMeasure d0;
    d0.points = {cxd(0, 0)};
    d0.weights = {1.0};
    auto bal = balayage_to_circle(d0, 512);
    for (double m : bal.mass) REQUIRE(std::abs(m - 1.0 / 512) < 1e-15);  // uniform

    DiscreteMeasure mu;
    mu.points = {cxd(0.3, 0.2), cxd(-0.1, -0.5), cxd(0.6, 0)};
    mu.weights = {0.4, 0.35, 0.25};
    auto b2 = balayage_to_circle(mu, 1024);
    double total = 0;
    for (double m : b2.mass) total += m;
    REQUIRE(std::abs(total - 1.0) < 1e-14);  // exact mass preservation

    DiscreteMeasure onT;
    onT.points = {cxd(1.0, 0)};
    onT.weights = {1.0};
    REQUIRE_THROWS_AS(balayage_to_circle(onT), domain_error);
}

TEST_CASE("balayage identity: V^mu - V^{mu^T} = g(mu, D; .)") {
    DiscreteMeasure mu;
    mu.points = {cxd(0.3, 0.2), cxd(-0.1, -0.5), cxd(0.6, 0)};
    mu.weights = {0.4, 0.35, 0.25};
    auto bal = balayage_to_circle(mu, 2048).as_discrete();
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> U(-0.85, 0.85);
    int checked = 0;
    while (checked < 20) {
        cxd z(U(rng), U(rng));
        if (abs(z) > 0.85) continue;
        bool near = false;
        for (const auto& p : mu.points) near = near || abs(z - p) < 0.05;
        if (near) continue;
        double lhs = log_potential(mu, z) - log_potential(bal, z);
        double rhs = green_potential(mu, z);
        REQUIRE(std::abs(lhs - rhs) < 1e-8);
        ++checked;
    }
}

TEST_CASE("fekete/Leja points and lemniscates") {
    FeketeResult one = fekete_points({cxd(0.3, 0)}, 1);
    REQUIRE(one.monic.size() == 2);
    REQUIRE(abs(one.monic[0] - cxd(-0.3, 0)) < 1e-15);  // z - 0.3

    FeketeResult two = fekete_points({cxd(0.3, 0), cxd(-0.3, 0)}, 2);
    REQUIRE(abs(two.monic[0] - cxd(-0.09, 0)) < 1e-15);  // z^2 - 0.09
    REQUIRE(abs(two.monic[1]) < 1e-15);

    std::vector<cxd> cloud;
    for (int k = 0; k < 50; ++k) {
        double th = 2 * 3.14159265358979323846 * k / 50;
        cloud.push_back(cxd(0.3 + 1e-3 * std::cos(th), 1e-3 * std::sin(th)));
    }
    FeketeResult five = fekete_points(cloud, 5);
    for (const auto& p : five.points) REQUIRE(abs(p - cxd(0.3, 0)) < 2e-3);
    auto inside = lemniscate_level(five.monic, 0.1);
    for (const auto& p : cloud) REQUIRE(inside(p));
    REQUIRE_THROWS_AS(fekete_points({cxd(0, 0)}, 3), domain_error);
}

TEST_CASE("discrete measure validation") {
    DiscreteMeasure bad;
    bad.points = {cxd(0.2, 0)};
    bad.weights = {-0.1};
    REQUIRE_THROWS_AS(bad.validate(), domain_error);
}

TEST_CASE("Mobius transport of circle chains preserves capacity") {
    ArcChain circ;
    circ.arcs.push_back(Arc::circle(cxd(0.1, -0.05), 0.3));
    auto base = equilibrium(circ);
    Mobius m = Mobius::disk_automorphism(cxd(-0.2, 0.3), 1.2);
    ArcChain moved = transport_chain(circ, m);
    REQUIRE(moved.arcs[0].kind == Arc::Kind::circle);
    auto tr = equilibrium(moved);
    REQUIRE(std::abs(tr.capacity - base.capacity) < 1e-6);
}
