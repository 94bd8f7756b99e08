#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tso/core.hpp"

namespace tso {

/// A minimization target. `evaluate` must be pure: deterministic and free of
/// side effects, so concurrent runs can share it.
struct Objective {
    std::string name;
    Bounds default_bounds;
    double known_optimum_value = 0.0;
    std::function<double(std::span<const double>)> evaluate;
};

/// Sum of squares. Minimum 0 at the origin.
inline double sphere(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("sphere: empty input");
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

/// Banana-valley function: sum of 100*(x[i+1]-x[i]^2)^2 + (x[i]-1)^2.
/// Minimum 0 at all-ones. Needs at least two dimensions.
inline double rosenbrock(std::span<const double> x) {
    if (x.size() < 2) throw std::invalid_argument("rosenbrock: needs length >= 2");
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i + 1] - x[i] * x[i];
        const double b = x[i] - 1.0;
        s += 100.0 * a * a + b * b;
    }
    return s;
}

/// Highly multimodal: sum of x^2 - 10 cos(2 pi x) + 10. Minimum 0 at the origin.
inline double rastrigin(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("rastrigin: empty input");
    double s = 0.0;
    for (double v : x)
        s += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v) + 10.0;
    return s;
}

/// Sum of x^2/4000 minus the product of cos(x[i]/sqrt(i+1)) plus 1, with the
/// conventional 1-based index inside the square root. Minimum 0 at the origin.
inline double griewank(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("griewank: empty input");
    double sum = 0.0;
    double prod = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sum += x[i] * x[i];
        prod *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return sum / 4000.0 - prod + 1.0;
}

/// Random translation vector with each component in [lb, ub), one independent
/// uniform draw per component in index order.
inline std::vector<double> make_shift(const Bounds& bounds, std::size_t dim,
                                      RandomSource auto& rng) {
    return uniform_init(bounds, dim, rng);
}

/// An objective composed with a translation: evaluate(x) = base(x - shift),
/// so the minimizer moves to shift + base_argmin.
struct ShiftedObjective {
    Objective base;
    std::vector<double> shift;

    double evaluate(std::span<const double> x) const {
        if (x.size() != shift.size())
            throw std::invalid_argument("ShiftedObjective: dimension mismatch");
        std::vector<double> y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] - shift[i];
        return base.evaluate(y);
    }

    /// Packages the shifted evaluation as a plain Objective named
    /// "shifted:<base>" with the given search bounds.
    Objective as_objective(Bounds bounds) const {
        ShiftedObjective copy = *this;
        return Objective{
            "shifted:" + base.name, bounds, base.known_optimum_value,
            [copy = std::move(copy)](std::span<const double> x) { return copy.evaluate(x); }};
    }
};

inline ShiftedObjective shifted(Objective base, std::vector<double> shift) {
    return ShiftedObjective{std::move(base), std::move(shift)};
}

/// The built-in suite. Classic rastrigin and rosenbrock search their
/// conventional domains ([-5.12, 5.12] and [-2.048, 2.048]); sphere,
/// griewank and every shifted variant search [-100, 100].
inline const std::vector<Objective>& builtin_objectives() {
    static const std::vector<Objective> table = {
        {"sphere", {-100.0, 100.0}, 0.0,
         [](std::span<const double> x) { return sphere(x); }},
        {"rosenbrock", {-2.048, 2.048}, 0.0,
         [](std::span<const double> x) { return rosenbrock(x); }},
        {"rastrigin", {-5.12, 5.12}, 0.0,
         [](std::span<const double> x) { return rastrigin(x); }},
        {"griewank", {-100.0, 100.0}, 0.0,
         [](std::span<const double> x) { return griewank(x); }},
    };
    return table;
}

inline constexpr std::string_view kShiftedPrefix = "shifted:";

inline bool is_shifted_name(std::string_view name) {
    return name.starts_with(kShiftedPrefix);
}

/// All names the registry resolves, in suite order.
inline std::vector<std::string> registry_names() {
    std::vector<std::string> names;
    for (const Objective& o : builtin_objectives()) {
        names.push_back(o.name);
        names.push_back(std::string(kShiftedPrefix) + o.name);
    }
    return names;
}

inline std::optional<Objective> find_objective(std::string_view name) {
    for (const Objective& o : builtin_objectives())
        if (o.name == name) return o;
    return std::nullopt;
}

/// A registry entry resolved for a concrete run. For shifted variants the
/// shift vector is drawn from `rng` (dim uniform draws) and recorded here so
/// the run is fully reproducible from its seed.
struct ResolvedObjective {
    Objective objective;
    std::vector<double> shift;  // empty for unshifted functions
};

inline ResolvedObjective resolve_objective(std::string_view name, std::size_t dim,
                                           RandomSource auto& rng) {
    if (is_shifted_name(name)) {
        const auto base = find_objective(name.substr(kShiftedPrefix.size()));
        if (!base)
            throw std::invalid_argument("unknown objective: " + std::string(name));
        const Bounds bounds{-100.0, 100.0};
        std::vector<double> shift = make_shift(bounds, dim, rng);
        return {shifted(*base, shift).as_objective(bounds), std::move(shift)};
    }
    const auto base = find_objective(name);
    if (!base) throw std::invalid_argument("unknown objective: " + std::string(name));
    return {*base, {}};
}

}  // namespace tso
