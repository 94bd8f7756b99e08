#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace tso {

/// Curve traced by a point rigidly attached to a disc of radius `radius`
/// rolling without sliding along a line. `ratio` is the distance from the
/// disc center to the traced point divided by the radius.
struct TrochoidSpec {
    double radius = 1.0;
    double ratio = 1.0;
};

enum class TrochoidKind { curtate, cycloid, prolate };

inline void ensure_valid(const TrochoidSpec& spec) {
    if (!(spec.radius > 0.0))
        throw std::invalid_argument("TrochoidSpec: radius must be > 0");
    if (!(spec.ratio >= 0.0))
        throw std::invalid_argument("TrochoidSpec: ratio must be >= 0");
}

/// ratio < 1: traced point inside the disc (curtate); ratio = 1: on the rim
/// (cycloid); ratio > 1: outside (prolate).
inline TrochoidKind classify(const TrochoidSpec& spec) {
    ensure_valid(spec);
    if (spec.ratio < 1.0) return TrochoidKind::curtate;
    if (spec.ratio > 1.0) return TrochoidKind::prolate;
    return TrochoidKind::cycloid;
}

struct CurvePoint {
    double theta;
    double x;
    double y;
};

inline double trochoid_x(const TrochoidSpec& spec, double theta) {
    return spec.radius * (theta + spec.ratio * std::sin(theta));
}

inline double trochoid_y(const TrochoidSpec& spec, double theta) {
    return spec.radius * (1.0 - spec.ratio * std::cos(theta));
}

/// Samples the curve at n equally spaced angles over [theta_min, theta_max],
/// both endpoints included:
///   x = radius * (theta + ratio * sin(theta))
///   y = radius * (1 - ratio * cos(theta))
inline std::vector<CurvePoint> trochoid_points(const TrochoidSpec& spec,
                                               double theta_min, double theta_max,
                                               std::size_t n) {
    ensure_valid(spec);
    if (n < 2) throw std::invalid_argument("trochoid_points: n must be >= 2");
    if (!(theta_min < theta_max))
        throw std::invalid_argument("trochoid_points: empty theta range");
    std::vector<CurvePoint> points;
    points.reserve(n);
    const double span = theta_max - theta_min;
    for (std::size_t i = 0; i < n; ++i) {
        const double theta =
            theta_min + span * static_cast<double>(i) / static_cast<double>(n - 1);
        points.push_back({theta, trochoid_x(spec, theta), trochoid_y(spec, theta)});
    }
    return points;
}

}  // namespace tso
