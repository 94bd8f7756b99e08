// Command-line front end: seeded single runs, benchmark suites with summary
// tables, and trochoid curve sampling as CSV.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tso/tso.hpp"

namespace {

// Applies a flat JSON key-value document ({"dim": 10, "escape": "on"}) as
// defaults for a parsed subcommand: keys name long flags without the leading
// dashes, and options given explicitly on the command line keep precedence.
void apply_json_config(CLI::App& cmd, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::FileError("cannot read config file " + path);
    const nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw CLI::FileError(path + ": config must be a flat JSON object");
    for (const auto& [key, value] : doc.items()) {
        CLI::Option* opt = cmd.get_option_no_throw("--" + key);
        if (opt == nullptr)
            throw CLI::FileError(path + ": unknown config key '" + key + "'");
        if (opt->count() > 0) continue;  // explicit flag wins
        opt->add_result(value.is_string() ? value.get<std::string>() : value.dump());
        opt->run_callback();
    }
}

struct AlgorithmFlags {
    std::size_t dim = 30;
    std::size_t pop = 50;
    std::uint64_t budget = 0;  // resolved to 10000 * dim when not given
    double pm = 0.05;
    double p_switch = 0.9;
    double p_escape = 0.1;
    std::string escape = "off";
    double p_dist_step = 0.8;
    double b_scale = 10.0;
    double log_offset = 0.0;  // resolved per variant when not given
    std::string variant = "code";
    std::uint64_t seed = 0;
    std::string config_path;

    CLI::Option* budget_opt = nullptr;
    CLI::Option* log_offset_opt = nullptr;
};

void add_algorithm_flags(CLI::App& cmd, AlgorithmFlags& f) {
    cmd.add_option("--dim", f.dim, "Problem dimension")->capture_default_str();
    cmd.add_option("--pop", f.pop, "Population size")->capture_default_str();
    f.budget_opt =
        cmd.add_option("--budget", f.budget, "Evaluation budget (default: 10000*dim)");
    cmd.add_option("--pm", f.pm, "Per-dimension perturbation rate")
        ->capture_default_str();
    cmd.add_option("--p-switch", f.p_switch, "Probability of the global move")
        ->capture_default_str();
    cmd.add_option("--p-escape", f.p_escape, "Escape procedure rate")
        ->capture_default_str();
    cmd.add_option("--escape", f.escape, "Enable the escape procedure")
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
    cmd.add_option("--p-dist-step", f.p_dist_step,
                   "Probability of the distance-based global step")
        ->capture_default_str();
    cmd.add_option("--b-scale", f.b_scale, "Scale of the random trochoid arm factor")
        ->capture_default_str();
    f.log_offset_opt = cmd.add_option(
        "--log-offset", f.log_offset,
        "Offset inside the log of the distance step (default: 1 for code, 10 for text)");
    cmd.add_option("--variant", f.variant, "Move equation variant")
        ->check(CLI::IsMember({"code", "text"}))
        ->capture_default_str();
    cmd.add_option("--seed", f.seed, "Random seed")->capture_default_str();
    cmd.add_option("--config", f.config_path, "Flat JSON file with flag defaults");
}

tso::TsoConfig to_config(const AlgorithmFlags& f) {
    tso::TsoConfig cfg;
    cfg.dim = f.dim;
    cfg.pop_size = f.pop;
    cfg.eval_budget =
        f.budget_opt->count() > 0 ? f.budget : tso::default_eval_budget(f.dim);
    cfg.perturbation_rate = f.pm;
    cfg.global_move_prob = f.p_switch;
    cfg.escape_prob = f.p_escape;
    cfg.escape_enabled = f.escape == "on";
    cfg.dist_step_prob = f.p_dist_step;
    cfg.b_scale = f.b_scale;
    cfg.variant = f.variant == "text" ? tso::MoveVariant::text : tso::MoveVariant::code;
    cfg.log_offset_global =
        f.log_offset_opt->count() > 0
            ? f.log_offset
            : (cfg.variant == tso::MoveVariant::text ? 10.0 : 1.0);
    cfg.seed = f.seed;
    return cfg;
}

int check_function_known(const std::string& name) {
    const auto names = tso::registry_names();
    if (std::find(names.begin(), names.end(), name) != names.end()) return 0;
    std::cerr << "unknown function '" << name << "'; available:";
    for (const auto& n : names) std::cerr << ' ' << n;
    std::cerr << '\n';
    return 2;
}

int cmd_run(const AlgorithmFlags& flags, const std::string& function,
            const std::string& trace_path) {
    if (int rc = check_function_known(function)) return rc;
    const tso::TsoConfig cfg = to_config(flags);
    const tso::RunRecord record = tso::run_one(cfg, function, cfg.seed);
    std::printf("best=%.17g evals=%llu\n", record.result.best.fitness,
                static_cast<unsigned long long>(record.result.evals_used));
    if (!trace_path.empty()) {
        std::ofstream out(trace_path);
        if (!out) {
            std::cerr << "cannot write trace file " << trace_path << '\n';
            return 1;
        }
        out << tso::emit_trace(record.result);
    }
    return 0;
}

int cmd_bench(const AlgorithmFlags& flags, const std::string& suite,
              const std::vector<std::string>& functions, std::size_t runs,
              std::size_t jobs, const std::string& outdir, const std::string& format) {
    tso::ExperimentConfig cfg;
    cfg.tso = to_config(flags);
    cfg.n_runs = runs;
    cfg.master_seed = flags.seed;
    cfg.jobs = jobs;
    if (!suite.empty()) {
        if (suite != "paper") {
            std::cerr << "unknown suite '" << suite << "'; available: paper\n";
            return 2;
        }
        cfg.function_names = tso::registry_names();
    } else {
        cfg.function_names = functions;
    }
    if (cfg.function_names.empty()) {
        std::cerr << "no functions selected; use --suite paper or --functions\n";
        return 2;
    }
    for (const auto& name : cfg.function_names)
        if (int rc = check_function_known(name)) return rc;
    if (!outdir.empty()) std::filesystem::create_directories(outdir);  // fail fast

    const tso::ExperimentResults results = tso::run_experiment(cfg);
    if (!outdir.empty()) tso::write_experiment_files(results, cfg, outdir);
    const auto table_format = format == "csv"    ? tso::TableFormat::csv
                              : format == "json" ? tso::TableFormat::json
                                                 : tso::TableFormat::aligned;
    std::cout << tso::emit_table(results, table_format);
    return 0;
}

int cmd_curve(double radius, double ratio, double theta_min, double theta_max,
              std::size_t n) {
    const auto points = tso::trochoid_points({radius, ratio}, theta_min, theta_max, n);
    std::printf("theta,x,y\n");
    for (const auto& p : points)
        std::printf("%.17g,%.17g,%.17g\n", p.theta, p.x, p.y);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trochoid search optimization"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "One seeded optimization run");
    AlgorithmFlags run_flags;
    std::string run_function;
    std::string trace_path;
    run->add_option("--function", run_function, "Objective from the registry")
        ->required();
    add_algorithm_flags(*run, run_flags);
    run->add_option("--trace", trace_path, "Write the improvement trace CSV here");

    auto* bench = app.add_subcommand("bench", "Multi-run benchmark with summaries");
    AlgorithmFlags bench_flags;
    std::string suite;
    std::vector<std::string> functions;
    std::size_t runs = 30;
    std::size_t jobs = 0;
    std::string outdir;
    std::string format = "aligned";
    auto* suite_opt = bench->add_option("--suite", suite, "Named suite (paper)");
    bench->add_option("--functions", functions, "Explicit function list")
        ->delimiter(',')
        ->excludes(suite_opt);
    bench->add_option("--runs", runs, "Independent runs per function")
        ->capture_default_str();
    bench->add_option("--jobs", jobs, "Worker threads (0 = all processors)")
        ->capture_default_str();
    bench->add_option("--out", outdir, "Directory for summaries, traces, metadata");
    bench->add_option("--format", format, "Stdout table format")
        ->check(CLI::IsMember({"aligned", "csv", "json"}))
        ->capture_default_str();
    add_algorithm_flags(*bench, bench_flags);

    auto* curve = app.add_subcommand("curve", "Sample a trochoid curve as CSV");
    double radius = 1.0, ratio = 1.0, theta_min = 0.0, theta_max = 0.0;
    std::size_t samples = 0;
    curve->add_option("--R", radius, "Rolling-circle radius (> 0)")->required();
    curve->add_option("--B", ratio, "Arm ratio (>= 0)")->required();
    curve->add_option("--theta-min", theta_min, "Start angle")->required();
    curve->add_option("--theta-max", theta_max, "End angle")->required();
    curve->add_option("--n", samples, "Sample count (>= 2)")->required();

    try {
        app.parse(argc, argv);
        if (run->parsed() && !run_flags.config_path.empty())
            apply_json_config(*run, run_flags.config_path);
        if (bench->parsed() && !bench_flags.config_path.empty())
            apply_json_config(*bench, bench_flags.config_path);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run->parsed()) return cmd_run(run_flags, run_function, trace_path);
        if (bench->parsed())
            return cmd_bench(bench_flags, suite, functions, runs, jobs, outdir, format);
        if (curve->parsed())
            return cmd_curve(radius, ratio, theta_min, theta_max, samples);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const tso::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
