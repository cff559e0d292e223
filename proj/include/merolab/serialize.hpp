// serialize.hpp — text-document export of measures, chains, cut solutions,
// and approximants. Everything rides on the flat key-value format of
// kvdoc.hpp; lists of points are "re,im;re,im;..." strings, arcs get an
// index-prefixed key block.

#pragma once

#include "aak.hpp"
#include "cuts.hpp"

namespace merolab {

inline KvDoc serialize_measure(const DiscreteMeasure& mu) {
    KvDoc d;
    d.set("type", "measure");
    d.set_complex_list("points", mu.points);
    std::string w;
    for (std::size_t i = 0; i < mu.weights.size(); ++i) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", mu.weights[i]);
        w += (i ? ";" : "") + std::string(buf);
    }
    d.set("weights", w);
    d.set_double("total_mass", mu.total_mass());
    return d;
}

inline DiscreteMeasure parse_measure(const KvDoc& d) {
    DiscreteMeasure mu;
    mu.points = d.get_complex_list("points");
    std::stringstream ss(d.get("weights"));
    std::string item;
    while (std::getline(ss, item, ';'))
        if (!item.empty()) mu.weights.push_back(std::strtod(item.c_str(), nullptr));
    if (mu.points.size() != mu.weights.size()) throw config_error("measure: size mismatch");
    return mu;
}

inline KvDoc serialize_chain(const ArcChain& chain) {
    KvDoc d;
    d.set("type", "chain");
    d.set_int("arcs", long(chain.arcs.size()));
    for (std::size_t i = 0; i < chain.arcs.size(); ++i) {
        const Arc& a = chain.arcs[i];
        std::string p = "arc" + std::to_string(i) + "_";
        if (a.kind == Arc::Kind::circle) {
            d.set(p + "kind", "circle");
            d.set_complex_list(p + "center", {a.center});
            d.set_double(p + "radius", a.radius);
        } else {
            d.set(p + "kind", "line");
            d.set_complex_list(p + "map", {a.map.a, a.map.b, a.map.c, a.map.d});
            d.set_complex_list(p + "w", {a.w0, a.w1});
            d.set_double(p + "bulge", a.bulge);
        }
    }
    d.set_complex_list("junctions", chain.junctions);
    return d;
}

inline ArcChain parse_chain(const KvDoc& d) {
    ArcChain chain;
    long count = d.get_int("arcs");
    for (long i = 0; i < count; ++i) {
        std::string p = "arc" + std::to_string(i) + "_";
        Arc a;
        if (d.get(p + "kind") == "circle") {
            a = Arc::circle(d.get_complex_list(p + "center").at(0), d.get_double(p + "radius"));
        } else {
            auto m = d.get_complex_list(p + "map");
            auto w = d.get_complex_list(p + "w");
            Mobius mob{m.at(0), m.at(1), m.at(2), m.at(3)};
            a = Arc::mobius_segment(mob, w.at(0), w.at(1), d.get_double_or(p + "bulge", 0.0));
        }
        chain.arcs.push_back(a);
    }
    chain.junctions = d.get_complex_list("junctions");
    return chain;
}

inline KvDoc serialize_cut(const CutSolution& cut) {
    KvDoc d = serialize_chain(cut.chain);
    d.set("type", "cut");
    d.set_double("capacity", cut.capacity.capacity);
    d.set_double("capacity_extrapolated", cut.capacity.capacity_extrapolated);
    d.set_double("capacity_error_estimate", cut.capacity.cap_error_estimate);
    d.set_double("level", cut.capacity.level);
    d.set_double("residual_abs", cut.capacity.residual_abs);
    d.set_complex_list("endpoints", cut.endpoints);
    d.set_complex_list("transport", {cut.transport.a, cut.transport.b, cut.transport.c, cut.transport.d});
    d.set_double("model_r", cut.model_r);
    if (cut.has_junction) d.set_complex_list("junction", {cut.junction});
    d.set_double("perturbation_margin", cut.perturbation_margin);
    d.set_double("symmetry_residual", cut.symmetry_residual);
    return d;
}

// Approximant export: poles with multiplicities, principal-part (residue)
// coefficients, and the error-trace summary.
template <typename R>
KvDoc serialize_approximant(const MeromorphicApproximant<R>& M, const ErrorTrace<R>* trace = nullptr) {
    KvDoc d;
    d.set("type", "approximant");
    d.set("provenance", provenance_name(M.provenance));
    d.set_int("degree_budget", long(M.degree_budget));
    d.set_int("pole_count", long(M.pole_count()));
    std::vector<cxd> ps;
    std::string mults, residues;
    for (const auto& p : M.poles) {
        ps.push_back(to_cxd(p.z));
        mults += (mults.empty() ? "" : ";") + std::to_string(p.mult);
        for (const auto& c : p.principal) {
            char buf[96];
            cxd cd = to_cxd(c);
            std::snprintf(buf, sizeof buf, "%.17g,%.17g", cd.re, cd.im);
            residues += (residues.empty() ? "" : ";") + std::string(buf);
        }
    }
    d.set_complex_list("poles", ps);
    d.set("mults", mults);
    d.set("residues", residues);
    if (trace) {
        d.set_double("error_sup", to_double(trace->sup));
        d.set_double("error_inf", to_double(trace->inf));
        d.set_int("error_grid", long(trace->grid));
        d.set_double("error_refinement", trace->refinement);
    }
    std::string warn;
    for (const auto& w : M.warnings) warn += (warn.empty() ? "" : " | ") + w;
    if (!warn.empty()) d.set("warnings", warn);
    return d;
}

}  // namespace merolab
