// runner.hpp — experiment orchestration: declarative configs, n-sweeps with
// optional per-n concurrency, content-addressed caching, and report emission
// (CSV tables with sidecar schemas, plot data, machine-readable summary).

#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

#include "diagnostics.hpp"
#include "serialize.hpp"

namespace merolab {

struct ExperimentConfig {
    std::string function;            // path to a serialized function spec
    AnalyticFunctionSpec spec;       // loaded from `function`
    std::vector<std::string> generators;  // aak | interpolation:<scheme> | retention
    std::size_t n_min = 1, n_max = 10;
    std::string section_policy = "auto";  // auto | fixed:<N>
    std::size_t fourier_K = 0;            // 0: derived from the section size
    std::size_t grid_points = 2000;
    double grid_margin = 0.1;
    double mask_budget = 0.05;
    double tol_solver = 1e-6;
    double tol_rate = 0.03;
    double region_radius = 0.05;
    std::size_t error_grid = 1024;
    std::string precision = "double";     // double | high
    std::string out_dir = "out";
    bool cache_on = true;
    std::uint64_t seed = 1;
    std::size_t jobs = 1;

    KvDoc canonical;  // parsed document (canonical form, cache identity)
};

inline const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "function",    "generators",  "n_min",        "n_max",       "section_policy",
        "fourier_K",   "grid_points", "grid_margin",  "mask_budget", "tol_solver",
        "tol_rate",    "region_radius", "error_grid", "precision",   "out",
        "cache",       "seed",        "jobs"};
    return keys;
}

inline ExperimentConfig parse_config(const std::string& text, const std::string& base_dir = "") {
    KvDoc doc = KvDoc::parse(text);
    for (const auto& [k, v] : doc.kv) {
        bool known = false;
        for (const auto& key : config_keys()) known = known || key == k;
        if (!known) throw config_error("unknown config key: " + k);
    }
    ExperimentConfig c;
    c.canonical = doc;
    c.function = doc.get("function");
    {
        std::string path = c.function;
        if (!base_dir.empty() && !std::filesystem::path(path).is_absolute())
            path = (std::filesystem::path(base_dir) / path).string();
        std::ifstream in(path);
        if (!in) throw config_error("cannot open function spec: " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        c.spec = AnalyticFunctionSpec::from_doc(KvDoc::parse(ss.str()));
    }
    {
        std::stringstream ss(doc.get("generators"));
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) c.generators.push_back(item);
        if (c.generators.empty()) throw config_error("generators: at least one required");
        for (const auto& g : c.generators) {
            if (g != "aak" && g != "retention" && g != "interpolation:balayage" &&
                g != "interpolation:uniform" && g != "interpolation:pade")
                throw config_error("unknown generator: " + g);
            if (g == "retention" && !c.spec.in_polar_class())
                throw config_error("retention requires a polar-class function");
        }
    }
    c.n_min = std::size_t(doc.get_int("n_min"));
    c.n_max = std::size_t(doc.get_int("n_max"));
    if (c.n_min < 1 || c.n_max < c.n_min) throw config_error("empty n range");
    c.section_policy = doc.get_or("section_policy", "auto");
    if (c.section_policy != "auto" && c.section_policy.rfind("fixed:", 0) != 0)
        throw config_error("section_policy must be auto or fixed:<N>");
    c.fourier_K = std::size_t(doc.get_int_or("fourier_K", 0));
    c.grid_points = std::size_t(doc.get_int_or("grid_points", 2000));
    c.grid_margin = doc.get_double_or("grid_margin", 0.1);
    c.mask_budget = doc.get_double_or("mask_budget", 0.05);
    c.tol_solver = doc.get_double_or("tol_solver", 1e-6);
    c.tol_rate = doc.get_double_or("tol_rate", 0.03);
    c.region_radius = doc.get_double_or("region_radius", 0.05);
    c.error_grid = std::size_t(doc.get_int_or("error_grid", 1024));
    c.precision = doc.get_or("precision", "double");
    if (c.precision != "double" && c.precision != "high")
        throw config_error("precision must be double or high");
    c.out_dir = doc.get_or("out", "out");
    std::string cache = doc.get_or("cache", "on");
    if (cache != "on" && cache != "off") throw config_error("cache must be on or off");
    c.cache_on = cache == "on";
    c.seed = std::uint64_t(doc.get_int_or("seed", 1));
    c.jobs = std::size_t(doc.get_int_or("jobs", 1));
    if (!(c.tol_solver > 0) || !(c.tol_rate > 0) || !(c.grid_margin > 0) ||
        !(c.region_radius > 0))
        throw config_error("tolerances must be positive");
    return c;
}

// Content hash of the canonical inputs of a stage; reordered but
// value-identical configs produce the same key.
inline std::string cache_key(const ExperimentConfig& c, const std::string& stage,
                             long n = -1) {
    KvDoc id = c.canonical;
    id.kv.erase("out");
    id.kv.erase("cache");
    id.kv.erase("jobs");
    std::string payload = id.to_string() + "|stage=" + stage;
    if (n >= 0) payload += "|n=" + std::to_string(n);
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)fnv1a(payload));
    return buf;
}

struct StageFailure : std::runtime_error {
    std::string stage;
    StageFailure(const std::string& st, const std::string& msg)
        : std::runtime_error(msg), stage(st) {}
};

// ---------------------------------------------------------------------------
// per-n results (written as pole tables and aggregated into rates)
// ---------------------------------------------------------------------------

struct GeneratorResult {
    std::string generator;
    std::size_t n = 0;
    double sup = 0, inf = 0;    // error trace estimates
    double log_sup = 0;
    std::vector<cxd> poles;
    std::vector<int> mults;
    std::vector<std::string> warnings;
    bool from_cache = false;

    KvDoc to_doc() const {
        KvDoc d;
        d.set("generator", generator);
        d.set_int("n", long(n));
        d.set_double("sup", sup);
        d.set_double("inf", inf);
        d.set_double("log_sup", log_sup);
        d.set_complex_list("poles", poles);
        std::string ms;
        for (std::size_t i = 0; i < mults.size(); ++i)
            ms += (i ? ";" : "") + std::to_string(mults[i]);
        d.set("mults", ms);
        return d;
    }
    static GeneratorResult from_doc(const KvDoc& d) {
        GeneratorResult r;
        r.generator = d.get("generator");
        r.n = std::size_t(d.get_int("n"));
        r.sup = d.get_double("sup");
        r.inf = d.get_double("inf");
        r.log_sup = d.get_double("log_sup");
        r.poles = d.get_complex_list("poles");
        std::stringstream ss(d.get_or("mults", ""));
        std::string item;
        while (std::getline(ss, item, ';'))
            if (!item.empty()) r.mults.push_back(std::atoi(item.c_str()));
        r.from_cache = true;
        return r;
    }
};

struct RunReport {
    std::map<std::string, RateSeries> rates;   // per generator
    std::vector<GeneratorResult> results;
    bool has_cut = false;
    CutSolution cut;
    std::vector<std::string> check_lines;      // "name pass|fail margin"
    bool partial = false;
    std::string failed_stage;
    std::size_t cache_hits = 0;
};

namespace detail_run {

inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

inline std::string csv_escape_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename R>
struct Engine {
    const ExperimentConfig& cfg;
    FourierWindow<R> window;
    std::size_t N = 0;
    HankelSection<R> section;
    std::vector<SingularTriple<R>> triples;
    bool has_cut = false;
    CutSolution cut;
    bool has_region = false;
    RetentionRegion region;

    explicit Engine(const ExperimentConfig& c) : cfg(c) {}

    std::size_t section_size(std::size_t n) const {
        if (cfg.section_policy.rfind("fixed:", 0) == 0)
            return std::size_t(std::atol(cfg.section_policy.c_str() + 6));
        return std::max<std::size_t>(4 * n, 64);
    }

    void prepare() {
        const auto& spec = cfg.spec;
        if (spec.branch_points.size() == 2) {
            cut = geodesic_cut(spec.branch_points[0], spec.branch_points[1]);
            has_cut = true;
        } else if (spec.branch_points.size() == 3) {
            cut = tripod_cut(spec.branch_points[0], spec.branch_points[1], spec.branch_points[2]);
            has_cut = true;
        }
        bool need_retention = false, need_section = false, need_window = false;
        for (const auto& g : cfg.generators) {
            if (g == "retention") need_retention = true;
            if (g == "aak" || g == "retention") need_section = true;
            if (g == "aak" || g == "retention" || g == "interpolation:pade") need_window = true;
        }
        if (need_retention) {
            region = make_retention_region(spec.polar_points.at(0), cfg.region_radius);
            has_region = true;
        }
        if (!need_window) return;

        double tail = std::is_same<R, double>::value ? 1e-30 : 1e-80;
        if (!need_section) {
            std::size_t K = cfg.fourier_K ? cfg.fourier_K : 2 * cfg.n_max + 1;
            window = fourier_coefficients<R>(cfg.spec, K, 0.0, tail);
            return;
        }
        N = section_size(cfg.n_max);
        for (int tries = 0; tries < 3; ++tries) {
            std::size_t K = cfg.fourier_K ? cfg.fourier_K : 2 * N;
            if (K < 2 * N)
                throw domain_error("fourier_K too small for the section size (need K >= 2N)");
            window = fourier_coefficients<R>(cfg.spec, K, 0.0, tail);
            section = build_section(window, N);
            triples = singular_triples(section, std::min(cfg.n_max + 1, N - 1));
            // raise the section until the defect is negligible at n_max
            R est = triples[std::min(cfg.n_max, triples.size() - 1)].value;
            if (cfg.fourier_K || section.truncation_defect <= R(1e-3) * est ||
                !triples[std::min(cfg.n_max, triples.size() - 1)].trusted)
                break;
            N = N + N / 2;
        }
    }

    GeneratorResult run_one(const std::string& gen, std::size_t n) {
        GeneratorResult r;
        r.generator = gen;
        r.n = n;
        MeromorphicApproximant<R> M;
        ErrorTrace<R> trace;
        if (gen == "aak" || gen == "retention") {
            auto res = aak_from_triples(cfg.spec, window, section, triples, n, cfg.error_grid);
            if (gen == "retention") {
                RetentionRegion local = region;
                M = retain_singular_part(res.approx, local);
                trace = error_on_circle(cfg.spec, M, cfg.error_grid);
                r.warnings = local.warnings;
            } else {
                M = res.approx;
                trace = res.trace;
            }
        } else {
            InterpolationScheme sch;
            if (gen == "interpolation:balayage") {
                if (!has_cut) throw domain_error("balayage scheme requires a branch cut");
                sch = balayage_scheme(cut, n);
            } else if (gen == "interpolation:uniform") {
                sch = uniform_scheme(n);
            } else {
                sch = pade_scheme();
            }
            M = interpolate<R>(cfg.spec, sch, n, &window);
            trace = error_on_circle(cfg.spec, M, cfg.error_grid);
        }
        r.sup = to_double(trace.sup);
        r.inf = to_double(trace.inf);
        r.log_sup = trace.sup > R(0) ? to_double(log(trace.sup)) : -1e9;
        for (const auto& p : M.poles) {
            r.poles.push_back(to_cxd(p.z));
            r.mults.push_back(p.mult);
        }
        for (const auto& wmsg : M.warnings) r.warnings.push_back(wmsg);
        return r;
    }
};

}  // namespace detail_run

template <typename R>
RunReport run_experiment(const ExperimentConfig& cfg, const std::string& verb = "run") {
    namespace fs = std::filesystem;
    RunReport report;
    fs::create_directories(cfg.out_dir);
    fs::path cache_dir = fs::path(cfg.out_dir) / ".cache";
    if (cfg.cache_on) fs::create_directories(cache_dir);

    detail_run::Engine<R> engine(cfg);
    try {
        engine.prepare();
    } catch (const std::exception& e) {
        throw StageFailure("prepare", e.what());
    }
    report.has_cut = engine.has_cut;
    if (engine.has_cut) report.cut = engine.cut;

    if (engine.has_cut)
        detail_run::atomic_write(fs::path(cfg.out_dir) / "cut.txt",
                                 serialize_cut(engine.cut).to_string());
    if (verb == "cut") return report;

    // ---- per-n sweep --------------------------------------------------------
    struct Task {
        std::string gen;
        std::size_t n;
    };
    std::vector<Task> tasks;
    for (const auto& g : cfg.generators)
        for (std::size_t n = cfg.n_min; n <= cfg.n_max; ++n) tasks.push_back({g, n});

    std::vector<GeneratorResult> results(tasks.size());
    std::vector<std::string> errors(tasks.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> hits{0};

    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const Task& t = tasks[i];
            std::string key = cache_key(cfg, t.gen, long(t.n));
            fs::path cpath = cache_dir / (key + ".txt");
            if (cfg.cache_on && fs::exists(cpath)) {
                std::ifstream in(cpath);
                std::stringstream ss;
                ss << in.rdbuf();
                try {
                    KvDoc d = KvDoc::parse(ss.str());
                    // full recompute on input-echo mismatch
                    if (d.get_or("input_echo", "") == cache_key(cfg, "echo")) {
                        results[i] = GeneratorResult::from_doc(d);
                        hits.fetch_add(1);
                        continue;
                    }
                } catch (const std::exception&) { /* recompute */ }
            }
            try {
                results[i] = engine.run_one(t.gen, t.n);
                if (cfg.cache_on) {
                    KvDoc d = results[i].to_doc();
                    d.set("input_echo", cache_key(cfg, "echo"));
                    detail_run::atomic_write(cpath, d.to_string());
                }
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    std::size_t nthreads = std::max<std::size_t>(1, std::min(cfg.jobs, tasks.size()));
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    report.cache_hits = hits.load();

    // write pole tables for completed work, in deterministic order
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (!errors[i].empty()) continue;
        const GeneratorResult& r = results[i];
        std::string gen_tag = r.generator;
        for (auto& ch : gen_tag)
            if (ch == ':') ch = '_';
        std::string csv = "re,im,mult\n";
        for (std::size_t p = 0; p < r.poles.size(); ++p)
            csv += detail_run::csv_escape_double(r.poles[p].re) + "," +
                   detail_run::csv_escape_double(r.poles[p].im) + "," +
                   std::to_string(r.mults.empty() ? 1 : r.mults[p]) + "\n";
        fs::path f = fs::path(cfg.out_dir) / ("poles_" + gen_tag + "_n" + std::to_string(r.n) + ".csv");
        detail_run::atomic_write(f, csv);
    }
    detail_run::atomic_write(fs::path(cfg.out_dir) / "poles.schema.txt",
                             "re: float64\nim: float64\nmult: int\n");

    // first failure (lowest n) aborts the remaining aggregation but keeps files
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (!errors[i].empty()) {
            report.partial = true;
            report.failed_stage = tasks[i].gen + " n=" + std::to_string(tasks[i].n);
            for (std::size_t j = 0; j < i; ++j)
                if (errors[j].empty()) report.results.push_back(results[j]);
            throw StageFailure(report.failed_stage, errors[i]);
        }
    }
    report.results = results;
    if (verb == "poles") return report;

    // ---- rates and diagnostics ---------------------------------------------
    std::string rates_csv = "n,generator,value,log_value\n";
    for (const auto& g : cfg.generators) {
        std::vector<std::size_t> ns;
        std::vector<double> lv;
        for (const auto& r : results)
            if (r.generator == g) {
                ns.push_back(r.n);
                lv.push_back(r.log_sup);
                rates_csv += std::to_string(r.n) + "," + g + "," +
                             detail_run::csv_escape_double(r.sup) + "," +
                             detail_run::csv_escape_double(r.log_sup) + "\n";
            }
        try {
            report.rates[g] = rate_extrapolate(ns, lv, {});
        } catch (const std::exception&) { /* too few points; leave empty */ }
    }
    detail_run::atomic_write(fs::path(cfg.out_dir) / "rates.csv", rates_csv);
    detail_run::atomic_write(fs::path(cfg.out_dir) / "rates.schema.txt",
                             "n: int\ngenerator: string\nvalue: float64\nlog_value: float64\n");
    if (verb == "rates") return report;

    std::string diag_csv =
        "n,value,log_value,fitted_limit,kolmogorov,potential_sup,median_dev,p90_dev,masked_fraction\n";
    std::string plot_csv = "x,y,series\n";
    CapacityMap last_map;
    bool have_map = false;
    for (const auto& r : report.results) {
        double kol = std::nan(""), ps = std::nan("");
        double med = std::nan(""), p90 = std::nan(""), mf = std::nan("");
        if (engine.has_cut && r.generator == "aak" && !r.poles.empty()) {
            DiscreteMeasure emp;
            for (std::size_t p = 0; p < r.poles.size(); ++p) {
                emp.points.push_back(r.poles[p]);
                emp.weights.push_back(double(r.mults[p]) / double(r.n));
            }
            WeakStarDistance wsd = weak_star_distance(emp, engine.cut.capacity.measure, engine.cut);
            kol = wsd.kolmogorov;
            ps = wsd.potential_sup;
        }
        if (engine.has_cut && r.generator == "aak" && r.n == cfg.n_max && verb != "rates") {
            try {
                auto res_full = aak_from_triples(cfg.spec, engine.window, engine.section,
                                                 engine.triples, r.n, 256);
                GridSpec gs;
                gs.count = cfg.grid_points;
                gs.margin = cfg.grid_margin;
                gs.seed = cfg.seed;
                gs.mask_budget = cfg.mask_budget;
                last_map = capacity_map(cfg.spec, res_full.approx, r.n, engine.cut, gs);
                have_map = true;
                med = last_map.median_dev;
                p90 = last_map.p90_dev;
                mf = last_map.masked_fraction;
            } catch (const std::exception& e) {
                throw StageFailure("capmap n=" + std::to_string(r.n), e.what());
            }
        }
        double fitted = report.rates.count(r.generator) ? report.rates[r.generator].limit : std::nan("");
        diag_csv += std::to_string(r.n) + "," + detail_run::csv_escape_double(r.sup) + "," +
                    detail_run::csv_escape_double(r.log_sup) + "," +
                    detail_run::csv_escape_double(fitted) + "," + detail_run::csv_escape_double(kol) +
                    "," + detail_run::csv_escape_double(ps) + "," + detail_run::csv_escape_double(med) +
                    "," + detail_run::csv_escape_double(p90) + "," + detail_run::csv_escape_double(mf) +
                    "\n";
        plot_csv += std::to_string(r.n) + "," + detail_run::csv_escape_double(r.log_sup) + "," +
                    r.generator + "\n";
    }
    detail_run::atomic_write(fs::path(cfg.out_dir) / "diagnostics.csv", diag_csv);
    detail_run::atomic_write(
        fs::path(cfg.out_dir) / "diagnostics.schema.txt",
        "n: int\nvalue: float64\nlog_value: float64\nfitted_limit: float64\nkolmogorov: "
        "float64\npotential_sup: float64\nmedian_dev: float64\np90_dev: float64\nmasked_fraction: "
        "float64\n");
    detail_run::atomic_write(fs::path(cfg.out_dir) / "plotdata.csv", plot_csv);

    if (have_map) {
        std::string cm = "re,im,observed,predicted,masked\n";
        for (std::size_t i = 0; i < last_map.points.size(); ++i)
            cm += detail_run::csv_escape_double(last_map.points[i].re) + "," +
                  detail_run::csv_escape_double(last_map.points[i].im) + "," +
                  detail_run::csv_escape_double(last_map.observed[i]) + "," +
                  detail_run::csv_escape_double(last_map.predicted[i]) + "," +
                  (last_map.masked[i] ? "1" : "0") + "\n";
        detail_run::atomic_write(fs::path(cfg.out_dir) / "capmap.csv", cm);
        detail_run::atomic_write(fs::path(cfg.out_dir) / "capmap.schema.txt",
                                 "re: float64\nim: float64\nobserved: float64\npredicted: "
                                 "float64\nmasked: int\n");
    }
    if (verb == "capmap") return report;

    // ---- summary with pass/fail checks --------------------------------------
    std::string summary;
    summary += "config_key = " + cache_key(cfg, "echo") + "\n";
    summary += "partial = 0\n";
    summary += "cache_hits = " + std::to_string(report.cache_hits) + "\n";
    if (engine.has_cut) {
        double cap = engine.cut.capacity.capacity;
        summary += "capacity = " + detail_run::csv_escape_double(cap) + "\n";
        for (const auto& [g, series] : report.rates) {
            BoundReport br = bound_checks(series, cap, cfg.tol_rate);
            std::string tag = g;
            for (auto& ch : tag)
                if (ch == ':') ch = '_';
            summary += "check_walsh_" + tag + " = " + (br.walsh_pass ? "pass" : "fail") +
                       " margin " + detail_run::csv_escape_double(br.walsh_margin) + "\n";
            if (g == "aak" || g == "interpolation:balayage")
                summary += "check_optimal_rate_" + tag + " = " + (br.optimal_pass ? "pass" : "fail") +
                           " margin " + detail_run::csv_escape_double(br.optimal_margin) + "\n";
            report.check_lines.push_back("walsh_" + tag + (br.walsh_pass ? " pass" : " fail"));
        }
    }
    if (have_map) {
        double invcap = engine.has_cut ? 1.0 / engine.cut.capacity.capacity : 1.0;
        bool med_ok = last_map.median_dev <= 0.05 * invcap;
        bool p90_ok = last_map.p90_dev <= 0.15 * invcap;
        summary += std::string("check_capmap_median = ") + (med_ok ? "pass" : "fail") + " value " +
                   detail_run::csv_escape_double(last_map.median_dev) + "\n";
        summary += std::string("check_capmap_p90 = ") + (p90_ok ? "pass" : "fail") + " value " +
                   detail_run::csv_escape_double(last_map.p90_dev) + "\n";
    }
    for (const auto& r : report.results) {
        if (r.generator != "aak") continue;
        if (r.inf > 0 && r.sup / r.inf > 1.05) {
            summary += "check_circularity_n" + std::to_string(r.n) + " = fail ratio " +
                       detail_run::csv_escape_double(r.sup / r.inf) + "\n";
        }
    }
    detail_run::atomic_write(fs::path(cfg.out_dir) / "summary.txt", summary);
    return report;
}

}  // namespace merolab
