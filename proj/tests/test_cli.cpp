#include <catch2/catch_amalgamated.hpp>

#include "merolab/runner.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace merolab;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
    fs::path p = fs::temp_directory_path() / "merolab_cli_test";
    fs::create_directories(p);
    return p;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_lab(const std::string& args, const fs::path& log) {
    std::string cmd = std::string(LAB_BINARY) + " " + args + " >" + log.string() + " 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

const char* kSpec =
    "kind = two_branch_sqrt\n"
    "branch_points = -0.5,0;0.5,0\n"
    "polar_points =\n"
    "parameters =\n";

std::string small_config(const fs::path& dir, const std::string& extra = "") {
    return "function = " + (dir / "spec.txt").string() +
           "\n"
           "generators = aak\n"
           "n_min = 1\n"
           "n_max = 9\n"
           "grid_points = 250\n"
           "error_grid = 256\n" +
           extra;
}

}  // namespace

TEST_CASE("config parsing: unknown keys and bad ranges are rejected") {
    fs::path dir = scratch();
    write_file(dir / "spec.txt", kSpec);
    REQUIRE_THROWS_AS(parse_config("function = x\ngenerators = aak\nn_min = 1\nn_max = 3\ntypo_key = 1\n"),
                      config_error);
    REQUIRE_THROWS_AS(parse_config(small_config(dir) + "n_min = 9\n"), config_error);  // dup key
    REQUIRE_THROWS_AS(
        parse_config("function = " + (dir / "spec.txt").string() + "\ngenerators = aak\nn_min = 5\nn_max = 2\n"),
        config_error);
    // retention demands the polar class
    REQUIRE_THROWS_AS(
        parse_config("function = " + (dir / "spec.txt").string() +
                     "\ngenerators = retention\nn_min = 1\nn_max = 3\n"),
        config_error);
    REQUIRE_THROWS_AS(parse_config(small_config(dir) + "tol_rate = -1\n"), config_error);
}

TEST_CASE("cache keys: canonical, order-insensitive, tolerance-sensitive") {
    fs::path dir = scratch();
    write_file(dir / "spec.txt", kSpec);
    auto a = parse_config(small_config(dir) + "tol_rate = 0.03\nseed = 2\n");
    auto b = parse_config("seed = 2\ntol_rate = 0.03\n" + small_config(dir));  // reordered
    auto c = parse_config(small_config(dir) + "tol_rate = 0.04\nseed = 2\n");
    REQUIRE(cache_key(a, "aak", 3) == cache_key(b, "aak", 3));
    REQUIRE(cache_key(a, "aak", 3) != cache_key(c, "aak", 3));
    REQUIRE(cache_key(a, "aak", 3) != cache_key(a, "aak", 4));
    // out/cache/jobs do not affect identity
    auto d = parse_config(small_config(dir) + "out = elsewhere\njobs = 4\ncache = off\n");
    auto e = parse_config(small_config(dir));
    REQUIRE(cache_key(d, "aak", 1) == cache_key(e, "aak", 1));
}

TEST_CASE("lab run: bundle outputs, reproducibility, cache hits") {
    fs::path dir = scratch();
    fs::path out1 = dir / "out1", out2 = dir / "out2";
    fs::remove_all(out1);
    fs::remove_all(out2);
    write_file(dir / "spec.txt", kSpec);
    write_file(dir / "cfg.txt", small_config(dir));

    REQUIRE(run_lab("--config " + (dir / "cfg.txt").string() + " validate", dir / "v.log") == 0);

    REQUIRE(run_lab("--config " + (dir / "cfg.txt").string() + " --out " + out1.string() + " run",
                    dir / "r1.log") == 0);
    for (const char* f : {"rates.csv", "rates.schema.txt", "diagnostics.csv", "cut.txt",
                          "summary.txt", "capmap.csv", "plotdata.csv", "poles_aak_n3.csv"})
        REQUIRE(fs::exists(out1 / f));

    // reproducibility: a second run in a fresh directory is byte-identical
    REQUIRE(run_lab("--config " + (dir / "cfg.txt").string() + " --out " + out2.string() +
                        " --cache off run",
                    dir / "r2.log") == 0);
    REQUIRE(read_file(out1 / "rates.csv") == read_file(out2 / "rates.csv"));
    REQUIRE(read_file(out1 / "diagnostics.csv") == read_file(out2 / "diagnostics.csv"));

    // warm-cache rerun reports hits and produces the same bundle
    REQUIRE(run_lab("--config " + (dir / "cfg.txt").string() + " --out " + out1.string() + " run",
                    dir / "r3.log") == 0);
    REQUIRE(read_file(dir / "r3.log").find("cache-hit") != std::string::npos);
    REQUIRE(read_file(out1 / "rates.csv") == read_file(out2 / "rates.csv"));
}

TEST_CASE("lab exit codes: config failure and numerical failure with crash isolation") {
    fs::path dir = scratch();
    write_file(dir / "spec.txt", kSpec);
    write_file(dir / "bad.txt", small_config(dir) + "mystery = 1\n");
    REQUIRE(run_lab("--config " + (dir / "bad.txt").string() + " validate", dir / "b.log") == 2);

    // Padé needs a window of length >= 2n+1: with fourier_K = 13 the sweep
    // fails at n = 7, leaving n < 7 on disk
    fs::path out = dir / "outfail";
    fs::remove_all(out);
    write_file(dir / "failing.txt",
               "function = " + (dir / "spec.txt").string() +
                   "\n"
                   "generators = interpolation:pade\n"
                   "n_min = 1\nn_max = 9\nfourier_K = 13\nerror_grid = 256\n");
    int rc = run_lab("--config " + (dir / "failing.txt").string() + " --out " + out.string() + " run",
                     dir / "f.log");
    REQUIRE(rc == 3);
    REQUIRE(read_file(dir / "f.log").find("numerical failure") != std::string::npos);
    REQUIRE(fs::exists(out / "poles_interpolation_pade_n6.csv"));
    REQUIRE_FALSE(fs::exists(out / "poles_interpolation_pade_n7.csv"));
}

TEST_CASE("parallel jobs produce identical tables") {
    fs::path dir = scratch();
    fs::path outs = dir / "out_serial", outp = dir / "out_par";
    fs::remove_all(outs);
    fs::remove_all(outp);
    write_file(dir / "spec.txt", kSpec);
    write_file(dir / "cfg.txt", small_config(dir));
    REQUIRE(run_lab("--config " + (dir / "cfg.txt").string() + " --out " + outs.string() +
                        " --cache off --jobs 1 run",
                    dir / "s.log") == 0);
    REQUIRE(run_lab("--config " + (dir / "cfg.txt").string() + " --out " + outp.string() +
                        " --cache off --jobs 4 run",
                    dir / "p.log") == 0);
    REQUIRE(read_file(outs / "rates.csv") == read_file(outp / "rates.csv"));
}

TEST_CASE("run_experiment works through the library API as well") {
    fs::path dir = scratch();
    write_file(dir / "spec.txt", kSpec);
    auto cfg = parse_config(small_config(dir) + "out = " + (dir / "api_out").string() + "\n");
    fs::remove_all(cfg.out_dir);
    auto report = run_experiment<double>(cfg);
    REQUIRE(report.has_cut);
    REQUIRE(report.rates.count("aak") == 1);
    REQUIRE(report.results.size() == 9);
}
