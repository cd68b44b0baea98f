#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "curlinv/gauss_legendre.hpp"
#include "curlinv/geometry.hpp"
#include "curlinv/sphere_rule.hpp"
#include "curlinv/vec.hpp"

namespace curlinv {

struct QuadratureConfig {
    int n_alpha = 64;
    int n_rho = 32;
    int sphere_nodes = 266;
    int n_surface = 590;
    double R_factor = 1.05;
    bool cap_adaptive = true;     // orient the sphere rule per point and restrict it to the kernel's cone
    bool surface_on_rays = true;  // dB_R term through the rays from x instead of the n_surface rule

    void validate() const {
        if (n_alpha < 2 || n_rho < 2 || sphere_nodes < 8 || n_surface < 8)
            throw std::invalid_argument("quadrature counts must be >= 2 (sphere rules >= 8)");
        if (!(R_factor > 1.0)) throw std::invalid_argument("quad.R_factor must exceed 1");
    }

    friend bool operator==(const QuadratureConfig&, const QuadratureConfig&) = default;
};

/// Immutable node sets built from a QuadratureConfig.
struct QuadratureRules {
    QuadratureConfig cfg;
    const GaussLegendreRule* alpha = nullptr;
    const GaussLegendreRule* rho = nullptr;
    SphereRule sphere;
    SphereRule surface;
    std::pair<int, int> dims;

    explicit QuadratureRules(const QuadratureConfig& c)
        : cfg((c.validate(), c)),
          alpha(&gauss_legendre(c.n_alpha)),
          rho(&gauss_legendre(c.n_rho)),
          sphere(sphere_rule_with_count(c.sphere_nodes)),
          surface(surface_rule_with_count(c.n_surface)),
          dims(product_dims(c.sphere_nodes)) {}

    static constexpr double split_fraction = 2.0 / 3.0;
    static constexpr double soft_fraction = 0.985;

    /// Angular rule for integrals about x whose integrand vanishes unless the ray x - s u (s > 0) meets B(0, r_support).
    SphereRule directions_for(const Vec3& x, double r_support) const {
        if (!cfg.cap_adaptive) return sphere;
        const double nx = norm(x);
        if (!(nx > split_fraction * r_support)) return sphere;
        const Vec3 axis = x / nx;
        if (nx > r_support * (1.0 + 1e-9)) {
            const double q = r_support / nx;
            return cap_rule(axis, std::sqrt(1.0 - q * q), dims.first, dims.second);
        }
        // rays missing B(0, soft_fraction * r_support) carry psi < 1e-14 * max psi
        if (nx > soft_fraction * r_support) {
            const double q = soft_fraction * r_support / nx;
            return cap_rule(axis, std::sqrt(1.0 - q * q), dims.first, dims.second);
        }
        return join_rules(band_rule(axis, -1.0, 0.0, (dims.first + 1) / 2, dims.second),
                          band_rule(axis, 0.0, 1.0, dims.first, dims.second));
    }
};

/// Which radial sub-segments of a ray contribute.
enum class Support { ball, omega };

/// Exit distance of the ray x + rho u from B(0, R).
inline double ball_exit(const Vec3& x, const Vec3& u, double R) {
    const double b = dot(x, u);
    return -b + std::sqrt(std::max(0.0, b * b + R * R - norm2(x)));
}

/// Breakpoints of [0, rho_max] along a ray: Omega crossings plus extra radii; each piece flagged inside/outside Omega.
struct RayPiece {
    double a, b;
    bool inside;
};

/// No additional breakpoints.
struct NoBreaks {
    void operator()(const Vec3&, std::vector<double>&) const {}
};

/// Fixed radii, e.g. the cutoff shells of the regularized operator.
struct FixedBreaks {
    std::vector<double> radii;
    void operator()(const Vec3&, std::vector<double>& cuts) const { cuts.insert(cuts.end(), radii.begin(), radii.end()); }
};

/// Crossings of the coordinate planes x_k = 0 (kinks of piecewise-smooth fields).
struct PlaneBreaks {
    Vec3 x;
    std::vector<int> axes;
    void operator()(const Vec3& u, std::vector<double>& cuts) const {
        for (int k : axes)
            if (u[k] != 0.0) cuts.push_back(-x[k] / u[k]);
    }
};

template <class Breaks = NoBreaks>
void ray_pieces(const StarDomain* dom, const Vec3& x, const Vec3& u, double rho_max, const Breaks& extra,
                std::vector<RayPiece>& out) {
    out.clear();
    std::vector<double> cuts{0.0, rho_max};
    std::vector<double> added;
    extra(u, added);
    std::vector<std::pair<double, double>> segs;
    if (dom) {
        segs = dom->ray_segments(x, u, rho_max).segments;
        for (const auto& [a, b] : segs) {
            cuts.push_back(a);
            cuts.push_back(b);
        }
    }
    for (double e : added)
        if (e > 0.0 && e < rho_max) cuts.push_back(e);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double a = cuts[k], b = cuts[k + 1];
        if (!(b - a > 1e-14 * std::max(1.0, rho_max))) continue;
        bool in = true;
        if (dom) {
            const double mid = 0.5 * (a + b);
            in = std::any_of(segs.begin(), segs.end(), [&](const auto& s) { return s.first <= mid && mid <= s.second; });
        }
        out.push_back({a, b, in});
    }
}

/// Core polar integrator about x over B(0, R):
///   sum_q w_q sum_pieces GL_{n_rho} h_q(rho),
/// where make_ray(u) returns std::optional of a radial integrand h(rho, y, inside) (Jacobian included by the caller);
/// std::nullopt skips the ray.  Fixed node-index summation order.
template <class T, class Breaks, class MakeRay>
T integrate_ball_polar(const Vec3& x, double R, const SphereRule& sphere, const GaussLegendreRule& radial,
                       const StarDomain* dom, Support support, const Breaks& extra, MakeRay&& make_ray) {
    if (!(norm(x) < R)) throw std::domain_error("integration point must lie strictly inside B_R");
    T total{};
    std::vector<RayPiece> pieces;
    for (int q = 0; q < sphere.size(); ++q) {
        const Vec3& u = sphere.nodes[q];
        auto h = make_ray(u);
        if (!h) continue;
        const double rho_max = ball_exit(x, u, R);
        ray_pieces(dom, x, u, rho_max, extra, pieces);
        T ray{};
        for (const auto& p : pieces) {
            if (support == Support::omega && !p.inside) continue;
            const double c = 0.5 * (p.a + p.b), hw = 0.5 * (p.b - p.a);
            for (int k = 0; k < radial.size(); ++k) {
                const double rho = c + hw * radial.nodes[k];
                ray += (*h)(rho, x + rho * u, p.inside) * (hw * radial.weights[k]);
            }
        }
        total += ray * sphere.weights[q];
    }
    return total;
}

/// int_{B_R} f(y) dy in polar coordinates about x; rays split at Omega crossings when a domain is given.
template <class F>
auto integrate_ball_singular(F&& f, const Vec3& x, double R, const QuadratureConfig& cfg, const StarDomain* dom = nullptr) {
    using T = std::decay_t<decltype(f(x))>;
    const SphereRule sphere = sphere_rule_with_count(cfg.sphere_nodes);
    const auto& radial = gauss_legendre(cfg.n_rho);
    return integrate_ball_polar<T>(x, R, sphere, radial, dom, Support::ball, NoBreaks{}, [&](const Vec3&) {
        return std::optional([&](double rho, const Vec3& y, bool) { return f(y) * (rho * rho); });
    });
}

/// int_{dB_R} f(y, nu) dsigma with nu = y / R.
template <class F>
auto integrate_sphere_surface(F&& f, double R, const SphereRule& rule) {
    if (!(R > 0)) throw std::invalid_argument("sphere radius must be positive");
    using T = std::decay_t<decltype(f(Vec3{}, Vec3{}))>;
    T sum{};
    for (int q = 0; q < rule.size(); ++q) {
        const Vec3& u = rule.nodes[q];
        sum += f(R * u, u) * (rule.weights[q] * R * R);
    }
    return sum;
}

template <class F>
auto integrate_sphere_surface(F&& f, double R, int n_surface) {
    return integrate_sphere_surface(std::forward<F>(f), R, surface_rule_with_count(n_surface));
}

}  // namespace curlinv
