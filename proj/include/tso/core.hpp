#pragma once

#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tso/random.hpp"

namespace tso {

/// Thrown when an algorithm configuration is unusable (as opposed to a bad
/// call argument, which raises std::invalid_argument).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Box constraint [lower, upper] applied identically to every dimension.
struct Bounds {
    double lower = -100.0;
    double upper = 100.0;

    double width() const { return upper - lower; }
    bool contains(double v) const { return v >= lower && v <= upper; }
};

inline void ensure_valid(const Bounds& b) {
    if (!(b.lower < b.upper))
        throw std::invalid_argument("Bounds: lower must be < upper");
}

/// Sentinel fitness for a solution that has never been evaluated. Any finite
/// objective value wins the greedy comparison against it.
inline constexpr double kUnevaluated = std::numeric_limits<double>::infinity();

/// A position in the search space with its cached objective value.
struct Candidate {
    std::vector<double> position;
    double fitness = kUnevaluated;
};

/// Uniform sample of the box: component d is lb + u_d * (ub - lb), one
/// independent uniform draw per component in index order (dim draws total).
inline std::vector<double> uniform_init(const Bounds& bounds, std::size_t dim,
                                        RandomSource auto& rng) {
    ensure_valid(bounds);
    if (dim == 0) throw std::invalid_argument("uniform_init: dim must be >= 1");
    std::vector<double> x(dim);
    for (std::size_t d = 0; d < dim; ++d)
        x[d] = bounds.lower + rng.uniform() * bounds.width();
    return x;
}

/// Clamps a solution back into the box by resampling: each out-of-bounds
/// component is replaced with lb + u * (ub - lb) using one fresh uniform draw
/// per violating component, scanned in ascending index order. In-bounds
/// components (boundary included) are left untouched.
inline std::vector<double> repair(std::vector<double> x, const Bounds& bounds,
                                  RandomSource auto& rng) {
    for (double& v : x)
        if (!bounds.contains(v)) v = bounds.lower + rng.uniform() * bounds.width();
    return x;
}

/// Euclidean norm.
inline double norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

/// Euclidean distance between two equal-length vectors.
inline double distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace tso
