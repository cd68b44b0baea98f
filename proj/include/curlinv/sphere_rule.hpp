#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "curlinv/gauss_legendre.hpp"
#include "curlinv/lebedev.hpp"
#include "curlinv/vec.hpp"

namespace curlinv {

/// Nodes on the unit sphere with weights summing to 4*pi.
struct SphereRule {
    std::vector<Vec3> nodes;
    std::vector<double> weights;
    int n_polar = 0;    // 0 for non-product rules
    int n_azimuth = 0;

    int size() const { return static_cast<int>(nodes.size()); }
};

/// Gauss-Legendre in cos(theta) times uniform trapezoid in phi.
/// Node order: polar index outer, azimuth index inner, phi_j = 2*pi*j/n_azimuth.
inline SphereRule sphere_rule(int n_polar, int n_azimuth) {
    if (n_polar < 2 || n_azimuth < 4) throw std::invalid_argument("sphere_rule needs n_polar >= 2, n_azimuth >= 4");
    const auto& gl = gauss_legendre(n_polar);
    SphereRule r;
    r.n_polar = n_polar;
    r.n_azimuth = n_azimuth;
    r.nodes.reserve(static_cast<std::size_t>(n_polar) * n_azimuth);
    r.weights.reserve(r.nodes.capacity());
    const double dphi = 2.0 * std::numbers::pi / n_azimuth;
    for (int i = 0; i < n_polar; ++i) {
        const double mu = gl.nodes[i];
        const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
        for (int j = 0; j < n_azimuth; ++j) {
            const double phi = dphi * j;
            r.nodes.push_back({s * std::cos(phi), s * std::sin(phi), mu});
            r.weights.push_back(gl.weights[i] * dphi);
        }
    }
    return r;
}

inline SphereRule lebedev_rule(int n) {
    SphereRule r;
    lebedev_points(n, r.nodes, r.weights);
    return r;
}

/// Product dimensions with about n nodes, keeping n_azimuth / n_polar near 19/14 (266 -> 14 x 19).
inline std::pair<int, int> product_dims(int n) {
    if (n < 8) throw std::invalid_argument("sphere rule needs at least 8 nodes");
    const int np = std::max(2, static_cast<int>(std::lround(std::sqrt(n * 14.0 / 19.0))));
    const int na = std::max(4, static_cast<int>(std::lround(static_cast<double>(n) / np)));
    return {np, na};
}

inline SphereRule sphere_rule_with_count(int n) {
    const auto [np, na] = product_dims(n);
    return sphere_rule(np, na);
}

/// Orthonormal frame (e1, e2, a) with a the given unit axis.
inline void frame_about(const Vec3& a, Vec3& e1, Vec3& e2) {
    int k = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(a[i]) < std::abs(a[k])) k = i;
    e1 = cross(a, unit_axis(k));
    e1 /= norm(e1);
    e2 = cross(a, e1);
}

/// Product rule on the band {u : cos_lo <= u.axis <= cos_hi}: Gauss-Legendre in cos(theta)
/// times uniform trapezoid in phi, theta measured from `axis`.
inline SphereRule band_rule(const Vec3& axis, double cos_lo, double cos_hi, int n_polar, int n_azimuth) {
    if (n_polar < 2 || n_azimuth < 4) throw std::invalid_argument("band_rule needs n_polar >= 2, n_azimuth >= 4");
    if (!(cos_lo >= -1.0 && cos_lo < cos_hi && cos_hi <= 1.0))
        throw std::invalid_argument("band_rule needs -1 <= cos_lo < cos_hi <= 1");
    Vec3 e1, e2;
    frame_about(axis, e1, e2);
    const auto& gl = gauss_legendre(n_polar);
    const double c = 0.5 * (cos_hi + cos_lo), h = 0.5 * (cos_hi - cos_lo);
    const double dphi = 2.0 * std::numbers::pi / n_azimuth;
    SphereRule r;
    r.n_polar = n_polar;
    r.n_azimuth = n_azimuth;
    for (int i = 0; i < n_polar; ++i) {
        const double mu = c + h * gl.nodes[i];
        const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
        for (int j = 0; j < n_azimuth; ++j) {
            const double phi = dphi * j;
            r.nodes.push_back(mu * axis + (s * std::cos(phi)) * e1 + (s * std::sin(phi)) * e2);
            r.weights.push_back(h * gl.weights[i] * dphi);
        }
    }
    return r;
}

/// Cap {u : u.axis >= cos_min}; cos_min = -1 gives a rotated full-sphere rule.
inline SphereRule cap_rule(const Vec3& axis, double cos_min, int n_polar, int n_azimuth) {
    if (!(cos_min >= -1.0 && cos_min < 1.0)) throw std::invalid_argument("cap_rule needs cos_min in [-1, 1)");
    return band_rule(axis, cos_min, 1.0, n_polar, n_azimuth);
}

/// Concatenation of two rules (node sets over disjoint regions).
inline SphereRule join_rules(SphereRule a, const SphereRule& b) {
    a.nodes.insert(a.nodes.end(), b.nodes.begin(), b.nodes.end());
    a.weights.insert(a.weights.end(), b.weights.begin(), b.weights.end());
    a.n_polar += b.n_polar;
    return a;
}

/// Rule used for surfaces: Lebedev when tabulated, product rule otherwise.
inline SphereRule surface_rule_with_count(int n) {
    return lebedev_available(n) ? lebedev_rule(n) : sphere_rule_with_count(n);
}

}  // namespace curlinv
