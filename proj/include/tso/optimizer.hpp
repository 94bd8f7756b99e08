#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tso/benchmarks.hpp"
#include "tso/core.hpp"

namespace tso {

/// The two published forms of the trochoid move equations. They disagree on
/// which trigonometric term lands on which coordinate, on whether the two
/// random arm factors are shared, and on the offset inside the logarithmic
/// step decay. `code` reproduces the executable reference that produced the
/// published results; `text` follows the prose equations.
enum class MoveVariant { code, text };

inline std::uint64_t default_eval_budget(std::size_t dim) {
    return 10000ULL * static_cast<std::uint64_t>(dim);
}

struct TsoConfig {
    std::size_t pop_size = 50;
    std::size_t dim = 30;
    std::uint64_t eval_budget = default_eval_budget(30);
    double perturbation_rate = 0.05;  // per-dimension gate probability (pm)
    double global_move_prob = 0.9;    // global vs local selector (Pswitch)
    double escape_prob = 0.1;
    bool escape_enabled = false;
    double dist_step_prob = 0.8;      // distance-based vs decay-based global step
    double b_scale = 10.0;            // scale of the random trochoid arm factors
    double log_offset_global = 1.0;   // offset inside ln() of the distance step;
                                      // 1 in the code variant, 10 in the text variant
    MoveVariant variant = MoveVariant::code;
    std::uint64_t seed = 0;
};

inline void validate(const TsoConfig& cfg) {
    auto probability = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (cfg.pop_size < 1) throw ConfigError("pop_size must be >= 1");
    if (cfg.dim < 1) throw ConfigError("dim must be >= 1");
    if (cfg.eval_budget < 1) throw ConfigError("eval_budget must be >= 1");
    if (!probability(cfg.perturbation_rate))
        throw ConfigError("perturbation_rate must be in [0,1]");
    if (!probability(cfg.global_move_prob))
        throw ConfigError("global_move_prob must be in [0,1]");
    if (!probability(cfg.escape_prob)) throw ConfigError("escape_prob must be in [0,1]");
    if (!probability(cfg.dist_step_prob))
        throw ConfigError("dist_step_prob must be in [0,1]");
    if (!(cfg.b_scale >= 0.0)) throw ConfigError("b_scale must be >= 0");
    if (!(cfg.log_offset_global > 0.0))
        throw ConfigError("log_offset_global must be > 0");
}

/// Move parameters for one trochoid step: the angle, the step size (the
/// trochoid radius, sign included), and the two random arm factors applied to
/// the sin and cos terms. The text variant shares a single factor (b1).
struct MoveParams {
    double theta = 0.0;
    double step = 0.0;
    double b1 = 0.0;
    double b2 = 0.0;
};

struct TracePoint {
    std::uint64_t evals;
    double best_fitness;
};

struct RunResult {
    Candidate best;
    std::uint64_t evals_used = 0;
    /// (evaluation index, incumbent fitness) at the first evaluation and at
    /// every strict improvement, plus one final entry at evals_used when the
    /// last improvement happened earlier. Fitness is strictly decreasing
    /// along the list except for that duplicated final entry.
    std::vector<TracePoint> trace;
};

/// Trochoid angle: one standard normal draw scaled by pi/2 (two engine words).
inline double sample_theta(RandomSource auto& rng) {
    return rng.normal() * std::numbers::pi / 2.0;
}

/// Step size of the global move. Draw order: one uniform u_sel selects the
/// branch; if u_sel < dist_step_prob one more uniform u gives the sign factor
/// and the step is 0.5*(1-2u)*dist/ln(itr+log_offset_global), which shrinks
/// with the distance to the incumbent and may be negative. Otherwise the step
/// is the decay curve (1 - itr/itr_max)^(2*itr/itr_max) in [0, 1], no further
/// draw.
inline double global_step_size(std::uint64_t itr, std::uint64_t itr_max, double dist,
                               const TsoConfig& cfg, RandomSource auto& rng) {
    if (!(static_cast<double>(itr) + cfg.log_offset_global > 1.0))
        throw ConfigError("global_step_size: itr + log_offset_global must exceed 1");
    const double u_sel = rng.uniform();
    if (u_sel < cfg.dist_step_prob) {
        const double u = rng.uniform();
        return 0.5 * (1.0 - 2.0 * u) * dist /
               std::log(static_cast<double>(itr) + cfg.log_offset_global);
    }
    const double t = static_cast<double>(itr) / static_cast<double>(itr_max);
    return std::pow(1.0 - t, 2.0 * t);
}

/// Step size of the local move: 0.05*(1-2u)*|x|/ln(itr+1), one uniform draw.
inline double local_step_size(std::uint64_t itr, double x_norm, RandomSource auto& rng) {
    const double u = rng.uniform();
    return 0.05 * (1.0 - 2.0 * u) * x_norm / std::log(static_cast<double>(itr) + 1.0);
}

namespace detail {

// The two coordinate assignments of a trochoid move, applied sequentially so
// an i == k collision behaves exactly like the reference implementation (the
// second write sees the first).
inline void apply_move(std::vector<double>& x, std::span<const double> base_i,
                       std::span<const double> base_k, std::size_t i, std::size_t k,
                       const MoveParams& p, MoveVariant variant) {
    if (i >= x.size() || k >= x.size())
        throw std::invalid_argument("trochoid move: index out of range");
    const double sin_t = std::sin(p.theta);
    const double cos_t = std::cos(p.theta);
    if (variant == MoveVariant::code) {
        x[i] = base_i[i] + p.step * (p.theta - p.b1 * sin_t);
        x[k] = base_k[k] + p.step * (1.0 - p.b2 * cos_t);
    } else {
        x[i] = base_i[i] + p.step * (1.0 - p.b1 * sin_t);
        x[k] = base_k[k] + p.step * (p.theta - p.b1 * cos_t);
    }
}

}  // namespace detail

/// Exploration move anchored at the incumbent: coordinates i and k are
/// rewritten relative to `best`, everything else keeps the value from `x`.
inline std::vector<double> global_move(std::vector<double> x,
                                       std::span<const double> best, std::size_t i,
                                       std::size_t k, const MoveParams& params,
                                       MoveVariant variant = MoveVariant::code) {
    detail::apply_move(x, best, best, i, k, params, variant);
    return x;
}

/// Exploitation move around the solution itself: the same two assignments
/// with `x` as the base, so with i == k the second increment compounds on the
/// first, as in the reference implementation.
inline std::vector<double> local_move(std::vector<double> x, std::size_t i,
                                      std::size_t k, const MoveParams& params,
                                      MoveVariant variant = MoveVariant::code) {
    detail::apply_move(x, x, x, i, k, params, variant);
    return x;
}

/// Occasional large perturbation intended to leave a local basin. The caller
/// gates the invocation (uniform draw <= escape_prob) and repairs afterwards.
///
/// Draw order: one uniform u_branch. If u_branch <= 0.5 and itr is in the
/// first half of the budget, a tangent flight: one shared uniform u (redrawn
/// while within 1e-12 of 0.5 to dodge the tan singularity) and every
/// component gains tan(u*pi)*(ub-lb). Otherwise a drift step: two shared
/// uniforms u, v; step = 15*(1-2u)/ln(1+itr) and every component becomes
/// x + step*(x - v*(best - x)).
inline std::vector<double> escape_move(std::vector<double> x,
                                       std::span<const double> best,
                                       std::uint64_t itr, std::uint64_t itr_max,
                                       const Bounds& bounds, RandomSource auto& rng) {
    const double u_branch = rng.uniform();
    if (u_branch <= 0.5 &&
        static_cast<double>(itr) <= 0.5 * static_cast<double>(itr_max)) {
        double u = rng.uniform();
        while (std::abs(u - 0.5) <= 1e-12) u = rng.uniform();
        const double flight = std::tan(u * std::numbers::pi) * bounds.width();
        for (double& v : x) v += flight;
    } else {
        const double u = rng.uniform();
        const double v = rng.uniform();
        const double step =
            15.0 * (1.0 - 2.0 * u) / std::log(1.0 + static_cast<double>(itr));
        for (std::size_t d = 0; d < x.size(); ++d)
            x[d] = x[d] + step * (x[d] - v * (best[d] - x[d]));
    }
    return x;
}

/// Builds one trial solution from a candidate. Per dimension i (ascending):
/// one uniform gate draw against perturbation_rate; when it fires, draw the
/// partner coordinate k = floor(u * dim) (one uniform), theta (one normal)
/// and the move selector (one uniform), then either the global or the local
/// move on (i, k). The step size uses the working vector, so later gates see
/// earlier edits. Arm factors b1 and b2 are drawn (b_scale * uniform) after
/// the step size, in that order; the text variant draws only b1. When escape
/// is enabled, one more uniform gates the escape move. The result is
/// repaired into the box before returning.
inline std::vector<double> perturb_candidate(const Candidate& candidate,
                                             std::span<const double> best,
                                             const TsoConfig& cfg, std::uint64_t itr,
                                             const Bounds& bounds, RandomSource auto& rng) {
    std::vector<double> work = candidate.position;
    const std::size_t dim = work.size();
    for (std::size_t i = 0; i < dim; ++i) {
        if (rng.uniform() > cfg.perturbation_rate) continue;
        const std::size_t k =
            static_cast<std::size_t>(rng.uniform() * static_cast<double>(dim));
        MoveParams params;
        params.theta = sample_theta(rng);
        const bool go_global = rng.uniform() < cfg.global_move_prob;
        if (go_global) {
            const double dist = distance(best, work);
            params.step = global_step_size(itr, cfg.eval_budget, dist, cfg, rng);
        } else {
            params.step = local_step_size(itr, norm(work), rng);
        }
        params.b1 = cfg.b_scale * rng.uniform();
        params.b2 = cfg.variant == MoveVariant::code ? cfg.b_scale * rng.uniform()
                                                     : params.b1;
        if (go_global)
            work = global_move(std::move(work), best, i, k, params, cfg.variant);
        else
            work = local_move(std::move(work), i, k, params, cfg.variant);
    }
    if (cfg.escape_enabled && rng.uniform() <= cfg.escape_prob)
        work = escape_move(std::move(work), best, itr, cfg.eval_budget, bounds, rng);
    return repair(std::move(work), bounds, rng);
}

/// The full population loop.
///
/// Initialization draws pop_size box samples (fitness left unevaluated), then
/// one extra sample as the incumbent, which is evaluated immediately and
/// consumes the first evaluation. Sweeps then cycle over the population:
/// each candidate spawns a trial via perturb_candidate, the trial is
/// evaluated, and greedy replacement keeps the better of trial and candidate;
/// a trial that also beats the incumbent becomes the new incumbent and is
/// appended to the trace. The budget is checked before every evaluation, so
/// evals_used equals eval_budget exactly. The iteration index fed to the
/// step-size schedules is the number of evaluations consumed so far.
inline RunResult tso_run(const TsoConfig& cfg, const Objective& objective,
                         RandomSource auto& rng) {
    validate(cfg);
    const Bounds bounds = objective.default_bounds;
    ensure_valid(bounds);

    std::vector<Candidate> population(cfg.pop_size);
    for (Candidate& c : population)
        c.position = uniform_init(bounds, cfg.dim, rng);

    RunResult result;
    result.best.position = uniform_init(bounds, cfg.dim, rng);
    result.best.fitness = objective.evaluate(result.best.position);
    result.evals_used = 1;
    result.trace.push_back({result.evals_used, result.best.fitness});

    while (result.evals_used < cfg.eval_budget) {
        for (Candidate& candidate : population) {
            if (result.evals_used >= cfg.eval_budget) break;
            std::vector<double> trial = perturb_candidate(
                candidate, result.best.position, cfg, result.evals_used, bounds, rng);
            const double value = objective.evaluate(trial);
            ++result.evals_used;
            if (value < candidate.fitness) {
                candidate.position = std::move(trial);
                candidate.fitness = value;
                if (value < result.best.fitness) {
                    result.best = candidate;
                    result.trace.push_back({result.evals_used, value});
                }
            }
        }
    }
    if (result.trace.back().evals != result.evals_used)
        result.trace.push_back({result.evals_used, result.best.fitness});
    return result;
}

}  // namespace tso
