// lab — experiment runner CLI.
//
// Verbs: run (full bundle), rates, poles, cut, capmap, validate.
// Global flags: --config PATH, --out DIR, --cache on|off, --jobs K.
// Exit codes: 0 success, 2 config validation failure, 3 numerical failure
// (failing stage reported on stderr).

#include <CLI11.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include "merolab/merolab.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

namespace bmp = boost::multiprecision;
using HighScalar = bmp::number<bmp::mpfr_float_backend<140>, bmp::et_off>;

int main(int argc, char** argv) {
    CLI::App app{"n-th root optimal meromorphic/rational approximation lab"};
    app.require_subcommand(1);

    std::string config_path, out_dir, cache = "on";
    std::size_t jobs = 1;
    app.add_option("--config", config_path, "experiment config path")->required();
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_option("--cache", cache, "on|off (overrides config)")->check(CLI::IsMember({"on", "off"}));
    app.add_option("--jobs", jobs, "max concurrent per-n stages");

    for (const char* verb : {"run", "rates", "poles", "cut", "capmap", "validate"})
        app.add_subcommand(verb, "");

    CLI11_PARSE(app, argc, argv);
    std::string verb = app.get_subcommands().front()->get_name();

    merolab::ExperimentConfig cfg;
    try {
        std::ifstream in(config_path);
        if (!in) throw merolab::config_error("cannot open config: " + config_path);
        std::stringstream ss;
        ss << in.rdbuf();
        cfg = merolab::parse_config(ss.str(),
                                    std::filesystem::path(config_path).parent_path().string());
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (app.count("--cache")) cfg.cache_on = cache == "on";
        if (app.count("--jobs")) cfg.jobs = jobs;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (verb == "validate") {
        std::cout << "config ok\n";
        return 0;
    }

    try {
        merolab::RunReport report;
        if (cfg.precision == "high")
            report = merolab::run_experiment<HighScalar>(cfg, verb);
        else
            report = merolab::run_experiment<double>(cfg, verb);
        if (report.cache_hits)
            std::cout << "cache-hit x" << report.cache_hits << "\n";
        for (const auto& [gen, series] : report.rates)
            std::cout << gen << ": fitted n-th root limit " << series.limit << "\n";
        std::cout << "outputs in " << cfg.out_dir << "\n";
        return 0;
    } catch (const merolab::StageFailure& e) {
        std::cerr << "numerical failure at stage [" << e.stage << "]: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}
