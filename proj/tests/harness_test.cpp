#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tso/harness.hpp"

using tso::ExperimentConfig;
using tso::ExperimentResults;
using tso::StatsSummary;

namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.tso.dim = 2;
    cfg.tso.pop_size = 5;
    cfg.tso.eval_budget = 300;
    cfg.function_names = {"sphere", "shifted:sphere"};
    cfg.n_runs = 3;
    cfg.master_seed = 99;
    cfg.jobs = 1;
    return cfg;
}

}  // namespace

TEST_CASE("summarize") {
    SECTION("degenerate all-zero sample") {
        const auto s = tso::summarize(std::vector<double>{0.0, 0.0, 0.0});
        CHECK(s.mean == 0.0);
        CHECK(s.std_dev == 0.0);
        CHECK(s.min == 0.0);
        CHECK(s.max == 0.0);
    }
    SECTION("sample standard deviation uses the n-1 denominator") {
        const auto s = tso::summarize(std::vector<double>{1.0, 2.0, 3.0});
        CHECK(s.mean == 2.0);
        CHECK(s.std_dev == 1.0);
        CHECK(s.min == 1.0);
        CHECK(s.max == 3.0);
    }
    SECTION("single run") {
        const auto s = tso::summarize(std::vector<double>{4.25});
        CHECK(s.mean == 4.25);
        CHECK(s.std_dev == 0.0);
        CHECK(s.min == 4.25);
        CHECK(s.max == 4.25);
    }
    SECTION("empty sample is rejected") {
        CHECK_THROWS_AS(tso::summarize(std::vector<double>{}), std::invalid_argument);
    }
}

TEST_CASE("summary statistics match a brute-force recomputation") {
    tso::RandomStream rng(5);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> xs(2 + static_cast<std::size_t>(rng.uniform() * 20));
        for (double& v : xs) v = std::exp(-200.0 * rng.uniform()) * (rng.uniform() - 0.3);
        const auto s = tso::summarize(xs);
        double lo = xs[0], hi = xs[0], sum = 0.0;
        for (double v : xs) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            sum += v;
        }
        const double mean = sum / xs.size();
        double sq = 0.0;
        for (double v : xs) sq += (v - mean) * (v - mean);
        const double sd = std::sqrt(sq / (xs.size() - 1));
        REQUIRE(s.min == lo);
        REQUIRE(s.max == hi);
        REQUIRE(s.mean == Catch::Approx(mean).epsilon(1e-12).margin(0.0));
        REQUIRE(s.std_dev == Catch::Approx(sd).epsilon(1e-12).margin(0.0));
    }
}

TEST_CASE("derive_seed is a pure function that separates runs and functions") {
    CHECK(tso::derive_seed(1, "sphere", 0) == tso::derive_seed(1, "sphere", 0));
    CHECK(tso::derive_seed(1, "sphere", 0) != tso::derive_seed(1, "sphere", 1));
    CHECK(tso::derive_seed(1, "sphere", 0) != tso::derive_seed(1, "griewank", 0));
    CHECK(tso::derive_seed(1, "sphere", 0) != tso::derive_seed(2, "sphere", 0));
}

TEST_CASE("run_experiment is deterministic and ordered by the function list") {
    const auto cfg = small_config();
    const auto a = tso::run_experiment(cfg);
    const auto b = tso::run_experiment(cfg);
    REQUIRE(a.functions.size() == 2);
    CHECK(a.functions[0].function == "sphere");
    CHECK(a.functions[1].function == "shifted:sphere");
    for (std::size_t f = 0; f < a.functions.size(); ++f) {
        REQUIRE(a.functions[f].runs.size() == cfg.n_runs);
        for (std::size_t r = 0; r < cfg.n_runs; ++r) {
            CHECK(a.functions[f].runs[r].result.best.fitness ==
                  b.functions[f].runs[r].result.best.fitness);
            CHECK(a.functions[f].runs[r].seed == b.functions[f].runs[r].seed);
        }
    }
}

TEST_CASE("permuting the function list leaves each run untouched") {
    auto cfg = small_config();
    const auto a = tso::run_experiment(cfg);
    std::swap(cfg.function_names[0], cfg.function_names[1]);
    const auto b = tso::run_experiment(cfg);
    for (std::size_t r = 0; r < cfg.n_runs; ++r) {
        CHECK(a.functions[0].runs[r].result.best.fitness ==
              b.functions[1].runs[r].result.best.fitness);
        CHECK(a.functions[1].runs[r].result.best.fitness ==
              b.functions[0].runs[r].result.best.fitness);
    }
}

TEST_CASE("worker count never changes results") {
    auto cfg = small_config();
    cfg.jobs = 1;
    const auto serial = tso::run_experiment(cfg);
    cfg.jobs = 4;
    const auto parallel = tso::run_experiment(cfg);
    for (std::size_t f = 0; f < serial.functions.size(); ++f)
        for (std::size_t r = 0; r < cfg.n_runs; ++r)
            CHECK(serial.functions[f].runs[r].result.best.fitness ==
                  parallel.functions[f].runs[r].result.best.fitness);
}

TEST_CASE("shifted runs record a per-run shift inside the shifted bounds") {
    const auto cfg = small_config();
    const auto results = tso::run_experiment(cfg);
    const auto& moved = results.functions[1];
    CHECK(results.functions[0].runs[0].shift.empty());
    for (const auto& run : moved.runs) {
        REQUIRE(run.shift.size() == cfg.tso.dim);
        for (double v : run.shift) {
            REQUIRE(v >= -100.0);
            REQUIRE(v < 100.0);
        }
    }
    CHECK(moved.runs[0].shift != moved.runs[1].shift);
}

TEST_CASE("per-function stats summarize the recorded finals") {
    const auto results = tso::run_experiment(small_config());
    for (const auto& f : results.functions) {
        std::vector<double> finals;
        for (const auto& run : f.runs) finals.push_back(run.result.best.fitness);
        const auto expected = tso::summarize(finals);
        CHECK(f.stats.mean == expected.mean);
        CHECK(f.stats.std_dev == expected.std_dev);
        CHECK(f.stats.min == expected.min);
        CHECK(f.stats.max == expected.max);
    }
}

TEST_CASE("unknown function names fail before any run starts") {
    auto cfg = small_config();
    cfg.function_names.push_back("ackley");
    CHECK_THROWS_AS(tso::run_experiment(cfg), std::invalid_argument);
}

TEST_CASE("format_stat renders zeros bare and keeps 5 significant digits") {
    CHECK(tso::format_stat(0.0) == "0");
    CHECK(tso::format_stat(2.4918e-80) == "2.4918e-80");
    CHECK(tso::format_stat(1.1501e-03) == "1.1501e-03");
    CHECK(tso::format_stat(5.3639e+01) == "5.3639e+01");
}

TEST_CASE("emit_table") {
    ExperimentResults results;
    tso::FunctionResults f;
    f.function = "sphere";
    f.stats = StatsSummary{0.0, 0.0, 0.0, 0.0};
    results.functions.push_back(f);
    f.function = "rosenbrock";
    f.stats = StatsSummary{5.3639e+01, 3.0451e+01, 3.8180e-01, 9.6405e+01};
    results.functions.push_back(f);

    SECTION("csv rows") {
        const std::string csv = tso::emit_table(results, tso::TableFormat::csv);
        CHECK(csv.starts_with("function,mean,std,min,max\n"));
        CHECK(csv.find("sphere,0,0,0,0\n") != std::string::npos);
        CHECK(csv.find("rosenbrock,5.3639e+01,3.0451e+01,3.8180e-01,9.6405e+01\n") !=
              std::string::npos);
    }
    SECTION("aligned header") {
        const std::string text = tso::emit_table(results, tso::TableFormat::aligned);
        CHECK(text.find("function") != std::string::npos);
        CHECK(text.find("5.3639e+01") != std::string::npos);
    }
    SECTION("json round-trips bit-exact") {
        const std::string dumped = tso::emit_table(results, tso::TableFormat::json);
        const auto parsed = nlohmann::json::parse(dumped);
        REQUIRE(parsed.size() == 2);
        CHECK(parsed[0]["function"] == "sphere");
        CHECK(parsed[1]["mean"].get<double>() == 5.3639e+01);
        CHECK(parsed[1]["std"].get<double>() == 3.0451e+01);
        CHECK(parsed[1]["min"].get<double>() == 3.8180e-01);
        CHECK(parsed[1]["max"].get<double>() == 9.6405e+01);
    }
    SECTION("empty results are rejected") {
        CHECK_THROWS_AS(tso::emit_table(ExperimentResults{}, tso::TableFormat::csv),
                        std::invalid_argument);
    }
}

TEST_CASE("emit_trace") {
    tso::RunResult result;
    result.best.fitness = 0.25;
    result.evals_used = 90;
    result.trace = {{1, 8.0}, {17, 2.0}, {44, 0.25}, {90, 0.25}};
    const std::string csv = tso::emit_trace(result);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "evals,best_fitness");
    std::uint64_t prev = 0;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        const std::uint64_t evals = std::stoull(line.substr(0, comma));
        REQUIRE(evals > prev);
        prev = evals;
        ++rows;
    }
    CHECK(rows == result.trace.size());
    CHECK(csv == tso::emit_trace(result));  // byte-stable
}

TEST_CASE("trace of a no-improvement run has the first and final rows") {
    tso::RunResult result;
    result.best.fitness = 5.0;
    result.evals_used = 120;
    result.trace = {{1, 5.0}, {120, 5.0}};
    const std::string csv = tso::emit_trace(result);
    CHECK(csv == "evals,best_fitness\n1,5\n120,5\n");
}

TEST_CASE("write_experiment_files lays out summaries, traces and metadata") {
    const auto cfg = small_config();
    const auto results = tso::run_experiment(cfg);
    const fs::path dir =
        fs::temp_directory_path() / "tso_harness_test_out";
    fs::remove_all(dir);
    tso::write_experiment_files(results, cfg, dir);

    CHECK(fs::exists(dir / "sphere_summary.csv"));
    CHECK(fs::exists(dir / "sphere_summary.json"));
    CHECK(fs::exists(dir / "shifted_sphere_summary.csv"));
    CHECK(fs::exists(dir / "shifted_sphere_summary.json"));
    for (std::size_t r = 0; r < cfg.n_runs; ++r) {
        CHECK(fs::exists(dir / ("sphere_run" + std::to_string(r) + "_trace.csv")));
        CHECK(fs::exists(dir / ("shifted_sphere_run" + std::to_string(r) + "_trace.csv")));
    }
    REQUIRE(fs::exists(dir / "metadata.json"));

    std::ifstream meta_file(dir / "metadata.json");
    const auto meta = nlohmann::json::parse(meta_file);
    CHECK(meta["config"]["pop_size"] == 5);
    CHECK(meta["config"]["master_seed"] == 99);
    REQUIRE(meta["functions"].size() == 2);
    CHECK(meta["functions"][1]["file_stem"] == "shifted_sphere");
    REQUIRE(meta["functions"][1]["runs"].size() == cfg.n_runs);
    CHECK(meta["functions"][1]["runs"][0].contains("shift"));
    CHECK(meta["functions"][1]["runs"][0]["seed"].get<std::uint64_t>() ==
          tso::derive_seed(99, "shifted:sphere", 0));
    fs::remove_all(dir);
}
