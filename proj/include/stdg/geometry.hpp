#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace stdg {

// Space-time point in d = 1: coordinates (t, x) with t playing the role of x0.
struct SpaceTimePoint {
    double t = 0.0;
    double x = 0.0;
};

inline double distance(const SpaceTimePoint& a, const SpaceTimePoint& b) {
    return std::hypot(a.t - b.t, a.x - b.x);
}

// Affine map F(xi, eta) = v0 + J * (xi, eta) from the reference triangle
// {xi >= 0, eta >= 0, xi + eta <= 1} onto a physical triangle.
struct AffineMap {
    SpaceTimePoint v0;
    // J columns are the edge vectors v1 - v0 and v2 - v0, in (t, x) order.
    double j00 = 1.0, j01 = 0.0;
    double j10 = 0.0, j11 = 1.0;
    double det = 1.0;

    SpaceTimePoint apply(double xi, double eta) const {
        return {v0.t + j00 * xi + j01 * eta, v0.x + j10 * xi + j11 * eta};
    }

    // Inverse map: physical point -> reference coordinates.
    std::array<double, 2> invert(const SpaceTimePoint& p) const {
        const double rt = p.t - v0.t;
        const double rx = p.x - v0.x;
        const double xi = (j11 * rt - j01 * rx) / det;
        const double eta = (-j10 * rt + j00 * rx) / det;
        return {xi, eta};
    }

    // Apply J^{-T} to a reference gradient (d/dxi, d/deta).
    std::array<double, 2> grad_to_physical(double dxi, double deta) const {
        return {(j11 * dxi - j10 * deta) / det, (-j01 * dxi + j00 * deta) / det};
    }
};

inline AffineMap make_affine_map(const SpaceTimePoint& p0, const SpaceTimePoint& p1,
                                 const SpaceTimePoint& p2) {
    AffineMap m;
    m.v0 = p0;
    m.j00 = p1.t - p0.t;
    m.j10 = p1.x - p0.x;
    m.j01 = p2.t - p0.t;
    m.j11 = p2.x - p0.x;
    m.det = m.j00 * m.j11 - m.j01 * m.j10;
    if (!(std::abs(m.det) > 0.0))
        throw std::invalid_argument("make_affine_map: degenerate triangle");
    return m;
}

}  // namespace stdg
