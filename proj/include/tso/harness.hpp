#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "tso/benchmarks.hpp"
#include "tso/optimizer.hpp"

namespace tso {

inline constexpr std::string_view kVersion = "0.1.0";

/// Mean, sample standard deviation (n-1 denominator, 0 for a single run),
/// minimum and maximum of the final fitnesses of a batch of runs.
struct StatsSummary {
    double mean = 0.0;
    double std_dev = 0.0;
    double min = 0.0;
    double max = 0.0;
};

inline StatsSummary summarize(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("summarize: empty sample");
    StatsSummary s;
    s.min = *std::min_element(values.begin(), values.end());
    s.max = *std::max_element(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double sq = 0.0;
        for (double v : values) sq += (v - s.mean) * (v - s.mean);
        s.std_dev = std::sqrt(sq / static_cast<double>(values.size() - 1));
    }
    return s;
}

struct ExperimentConfig {
    TsoConfig tso;  // per-run template; the seed field is replaced per run
    std::vector<std::string> function_names;
    std::size_t n_runs = 30;
    std::uint64_t master_seed = 0;
    std::size_t jobs = 0;  // 0 = one worker per processor
};

struct RunRecord {
    std::uint64_t seed = 0;
    std::vector<double> shift;  // empty for unshifted functions
    RunResult result;
};

struct FunctionResults {
    std::string function;
    Bounds bounds;
    StatsSummary stats;
    std::vector<RunRecord> runs;
};

struct ExperimentResults {
    std::vector<FunctionResults> functions;
};

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Child seed for run r of a function: a pure function of (master seed,
/// function name, run index), independent of the order functions are listed.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view function,
                                 std::size_t run_index) {
    const std::uint64_t mixed = splitmix64(master ^ fnv1a64(function));
    return splitmix64(mixed ^ (static_cast<std::uint64_t>(run_index) + 1));
}

/// One seeded run: the stream first yields the shift vector when the function
/// is a shifted variant, then drives the optimizer.
inline RunRecord run_one(const TsoConfig& base, std::string_view function,
                         std::uint64_t seed) {
    RandomStream rng(seed);
    TsoConfig cfg = base;
    cfg.seed = seed;
    ResolvedObjective resolved = resolve_objective(function, cfg.dim, rng);
    RunRecord record;
    record.seed = seed;
    record.shift = std::move(resolved.shift);
    record.result = tso_run(cfg, resolved.objective, rng);
    return record;
}

/// Runs n_runs independent seeded runs per function and summarizes the final
/// best fitnesses. Run (f, r) is fully determined by the derived child seed,
/// so the worker count never changes any result, only the wall time; records
/// are stored by (function, run index) regardless of completion order.
inline ExperimentResults run_experiment(const ExperimentConfig& cfg) {
    validate(cfg.tso);
    if (cfg.n_runs < 1) throw std::invalid_argument("run_experiment: n_runs must be >= 1");
    for (const std::string& name : cfg.function_names)
        if (!is_shifted_name(name) ? !find_objective(name)
                                   : !find_objective(name.substr(kShiftedPrefix.size())))
            throw std::invalid_argument("unknown objective: " + name);

    ExperimentResults results;
    results.functions.resize(cfg.function_names.size());
    struct Task {
        std::size_t func;
        std::size_t run;
    };
    std::vector<Task> tasks;
    for (std::size_t f = 0; f < cfg.function_names.size(); ++f) {
        results.functions[f].function = cfg.function_names[f];
        results.functions[f].runs.resize(cfg.n_runs);
        for (std::size_t r = 0; r < cfg.n_runs; ++r) tasks.push_back({f, r});
    }

    const std::size_t workers =
        std::max<std::size_t>(1, cfg.jobs != 0 ? cfg.jobs
                                               : std::thread::hardware_concurrency());
    std::atomic<std::size_t> next{0};
    auto drain = [&] {
        for (std::size_t t = next.fetch_add(1); t < tasks.size(); t = next.fetch_add(1)) {
            const Task& task = tasks[t];
            const std::string& name = cfg.function_names[task.func];
            results.functions[task.func].runs[task.run] =
                run_one(cfg.tso, name, derive_seed(cfg.master_seed, name, task.run));
        }
    };
    if (workers == 1) {
        drain();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(drain);
        for (std::thread& t : pool) t.join();
    }

    for (FunctionResults& fr : results.functions) {
        std::vector<double> finals;
        finals.reserve(fr.runs.size());
        for (const RunRecord& r : fr.runs) finals.push_back(r.result.best.fitness);
        fr.stats = summarize(finals);
        RandomStream probe(0);
        fr.bounds = resolve_objective(fr.function, 1, probe).objective.default_bounds;
    }
    return results;
}

enum class TableFormat { aligned, csv, json };

/// Scientific notation with five significant digits; exact zeros render as a
/// bare 0, matching the usual result-table convention.
inline std::string format_stat(double v) {
    if (v == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4e", v);
    return buf;
}

inline std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string emit_table(const ExperimentResults& results, TableFormat format) {
    if (results.functions.empty())
        throw std::invalid_argument("emit_table: empty results");
    std::ostringstream out;
    switch (format) {
        case TableFormat::csv:
            out << "function,mean,std,min,max\n";
            for (const FunctionResults& f : results.functions)
                out << f.function << ',' << format_stat(f.stats.mean) << ','
                    << format_stat(f.stats.std_dev) << ',' << format_stat(f.stats.min)
                    << ',' << format_stat(f.stats.max) << '\n';
            break;
        case TableFormat::aligned: {
            std::size_t width = 8;
            for (const FunctionResults& f : results.functions)
                width = std::max(width, f.function.size());
            auto pad = [&out](const std::string& s, std::size_t w) {
                out << s;
                for (std::size_t i = s.size(); i < w; ++i) out << ' ';
            };
            pad("function", width + 2);
            pad("mean", 14);
            pad("std", 14);
            pad("min", 14);
            pad("max", 14);
            out << '\n';
            for (const FunctionResults& f : results.functions) {
                pad(f.function, width + 2);
                pad(format_stat(f.stats.mean), 14);
                pad(format_stat(f.stats.std_dev), 14);
                pad(format_stat(f.stats.min), 14);
                pad(format_stat(f.stats.max), 14);
                out << '\n';
            }
            break;
        }
        case TableFormat::json: {
            nlohmann::json rows = nlohmann::json::array();
            for (const FunctionResults& f : results.functions)
                rows.push_back({{"function", f.function},
                                {"mean", f.stats.mean},
                                {"std", f.stats.std_dev},
                                {"min", f.stats.min},
                                {"max", f.stats.max}});
            out << rows.dump(2) << '\n';
            break;
        }
    }
    return out.str();
}

/// Improvement trace as CSV, full double precision, strictly increasing
/// evaluation indices.
inline std::string emit_trace(const RunResult& result) {
    std::ostringstream out;
    out << "evals,best_fitness\n";
    for (const TracePoint& p : result.trace)
        out << p.evals << ',' << format_full(p.best_fitness) << '\n';
    return out.str();
}

/// Filesystem-safe stem for a function name ("shifted:sphere" ->
/// "shifted_sphere").
inline std::string file_stem(std::string_view function) {
    std::string stem(function);
    std::replace(stem.begin(), stem.end(), ':', '_');
    return stem;
}

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    return {
        {"pop_size", cfg.tso.pop_size},
        {"dim", cfg.tso.dim},
        {"eval_budget", cfg.tso.eval_budget},
        {"perturbation_rate", cfg.tso.perturbation_rate},
        {"global_move_prob", cfg.tso.global_move_prob},
        {"escape_prob", cfg.tso.escape_prob},
        {"escape_enabled", cfg.tso.escape_enabled},
        {"dist_step_prob", cfg.tso.dist_step_prob},
        {"b_scale", cfg.tso.b_scale},
        {"log_offset_global", cfg.tso.log_offset_global},
        {"variant", cfg.tso.variant == MoveVariant::code ? "code" : "text"},
        {"functions", cfg.function_names},
        {"n_runs", cfg.n_runs},
        {"master_seed", cfg.master_seed},
    };
}

/// Writes <stem>_summary.csv, <stem>_summary.json and per-run trace files for
/// each function, plus metadata.json carrying the full configuration, derived
/// seeds and shift vectors needed to replay the experiment.
inline void write_experiment_files(const ExperimentResults& results,
                                   const ExperimentConfig& cfg,
                                   const std::filesystem::path& outdir) {
    std::filesystem::create_directories(outdir);
    auto open = [](const std::filesystem::path& p) {
        std::ofstream f(p);
        if (!f) throw std::runtime_error("cannot write " + p.string());
        return f;
    };

    nlohmann::json meta;
    meta["config"] = config_to_json(cfg);
    meta["build"] = {{"library_version", std::string(kVersion)},
                     {"compiler", __VERSION__}};
    meta["functions"] = nlohmann::json::array();

    for (const FunctionResults& f : results.functions) {
        const std::string stem = file_stem(f.function);
        {
            ExperimentResults single;
            single.functions.push_back(f);
            open(outdir / (stem + "_summary.csv"))
                << emit_table(single, TableFormat::csv);
        }
        nlohmann::json summary = {{"function", f.function},
                                  {"bounds", {f.bounds.lower, f.bounds.upper}},
                                  {"mean", f.stats.mean},
                                  {"std", f.stats.std_dev},
                                  {"min", f.stats.min},
                                  {"max", f.stats.max},
                                  {"runs", nlohmann::json::array()}};
        nlohmann::json fn_meta = {{"function", f.function},
                                  {"file_stem", stem},
                                  {"bounds", {f.bounds.lower, f.bounds.upper}},
                                  {"runs", nlohmann::json::array()}};
        for (std::size_t r = 0; r < f.runs.size(); ++r) {
            const RunRecord& run = f.runs[r];
            nlohmann::json row = {{"run", r},
                                  {"seed", run.seed},
                                  {"best_fitness", run.result.best.fitness},
                                  {"evals_used", run.result.evals_used}};
            if (!run.shift.empty()) row["shift"] = run.shift;
            summary["runs"].push_back(row);
            fn_meta["runs"].push_back(row);
            open(outdir / (stem + "_run" + std::to_string(r) + "_trace.csv"))
                << emit_trace(run.result);
        }
        open(outdir / (stem + "_summary.json")) << summary.dump(2) << '\n';
        meta["functions"].push_back(fn_meta);
    }
    open(outdir / "metadata.json") << meta.dump(2) << '\n';
}

}  // namespace tso
