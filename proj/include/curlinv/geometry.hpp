#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "curlinv/sphere_rule.hpp"
#include "curlinv/vec.hpp"

namespace curlinv {

struct Ball {
    double R0 = 2.0;
};

struct Ellipsoid {
    double a = 2.0, b = 2.0, c = 2.0;
};

struct Box {
    Vec3 h{1.5, 1.5, 1.5};
};

/// Boundary radius r(u) tabulated on a product sphere grid, bilinear in (cos theta, phi).
struct RadialShape {
    std::vector<double> mu;              // ascending cos(theta) ring positions
    int n_azimuth = 0;                   // phi_j = 2*pi*j/n_azimuth
    std::vector<double> r;               // r[i * n_azimuth + j]
    double south = 0.0, north = 0.0;     // pole values (ring means)
    std::string source;                  // file path, if loaded from disk

    double operator()(const Vec3& u) const {
        const double m = std::clamp(u.z, -1.0, 1.0);
        double phi = std::atan2(u.y, u.x);
        if (phi < 0) phi += 2.0 * std::numbers::pi;
        const double fj = phi * n_azimuth / (2.0 * std::numbers::pi);
        int j0 = static_cast<int>(std::floor(fj));
        const double tj = fj - j0;
        j0 = ((j0 % n_azimuth) + n_azimuth) % n_azimuth;
        const int j1 = (j0 + 1) % n_azimuth;
        auto ring = [&](std::size_t i) {
            return (1.0 - tj) * r[i * n_azimuth + j0] + tj * r[i * n_azimuth + j1];
        };
        const std::size_t n = mu.size();
        if (m <= mu.front()) {
            const double t = (m + 1.0) / (mu.front() + 1.0);
            return (1.0 - t) * south + t * ring(0);
        }
        if (m >= mu.back()) {
            const double t = (m - mu.back()) / (1.0 - mu.back());
            return (1.0 - t) * ring(n - 1) + t * north;
        }
        const auto it = std::upper_bound(mu.begin(), mu.end(), m);
        const std::size_t i1 = static_cast<std::size_t>(it - mu.begin());
        const std::size_t i0 = i1 - 1;
        const double t = (m - mu[i0]) / (mu[i1] - mu[i0]);
        return (1.0 - t) * ring(i0) + t * ring(i1);
    }

    double max_value() const { return std::max({*std::max_element(r.begin(), r.end()), south, north}); }
    double min_value() const { return std::min({*std::min_element(r.begin(), r.end()), south, north}); }

    void finalize() {
        if (mu.size() < 2 || n_azimuth < 4 || r.size() != mu.size() * n_azimuth)
            throw std::invalid_argument("radial table has inconsistent dimensions");
        for (double v : r)
            if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("radial table values must be positive");
        south = north = 0.0;
        const std::size_t last = mu.size() - 1;
        for (int j = 0; j < n_azimuth; ++j) {
            south += r[j];
            north += r[last * n_azimuth + j];
        }
        south /= n_azimuth;
        north /= n_azimuth;
    }

    static RadialShape from_function(const std::function<double(const Vec3&)>& f, int n_polar, int n_azimuth) {
        const SphereRule rule = sphere_rule(n_polar, n_azimuth);
        RadialShape s;
        s.n_azimuth = n_azimuth;
        for (int i = 0; i < n_polar; ++i) s.mu.push_back(rule.nodes[static_cast<std::size_t>(i) * n_azimuth].z);
        for (const auto& u : rule.nodes) s.r.push_back(f(u));
        s.finalize();
        return s;
    }
};

/// CSV rows "ux,uy,uz,r" over a product sphere grid (rings of constant uz, uniform phi from 0).
inline RadialShape load_radial_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open radial table '" + path + "'");
    std::vector<std::array<double, 4>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::array<double, 4> v{};
        std::stringstream ss(line);
        std::string cell;
        int k = 0;
        bool numeric = true;
        while (std::getline(ss, cell, ',') && k < 4) {
            try {
                v[k++] = std::stod(cell);
            } catch (...) {
                numeric = false;
                break;
            }
        }
        if (!numeric) continue;  // header
        if (k != 4) throw std::invalid_argument("radial table row needs 4 columns: " + line);
        rows.push_back(v);
    }
    if (rows.empty()) throw std::invalid_argument("radial table '" + path + "' is empty");
    RadialShape s;
    s.source = path;
    for (const auto& row : rows)
        if (s.mu.empty() || std::abs(row[2] - s.mu.back()) > 1e-9) s.mu.push_back(row[2]);
    if (rows.size() % s.mu.size() != 0) throw std::invalid_argument("radial table rings have unequal sizes");
    s.n_azimuth = static_cast<int>(rows.size() / s.mu.size());
    if (!std::is_sorted(s.mu.begin(), s.mu.end())) throw std::invalid_argument("radial table rings must ascend in uz");
    for (const auto& row : rows) s.r.push_back(row[3]);
    s.finalize();
    return s;
}

inline void write_radial_csv(const RadialShape& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write radial table '" + path + "'");
    out.precision(17);
    out << "ux,uy,uz,r\n";
    for (std::size_t i = 0; i < s.mu.size(); ++i) {
        const double st = std::sqrt(std::max(0.0, 1.0 - s.mu[i] * s.mu[i]));
        for (int j = 0; j < s.n_azimuth; ++j) {
            const double phi = 2.0 * std::numbers::pi * j / s.n_azimuth;
            out << st * std::cos(phi) << ',' << st * std::sin(phi) << ',' << s.mu[i] << ','
                << s.r[i * s.n_azimuth + j] << '\n';
        }
    }
}

/// Ordered, disjoint occupancy intervals of a ray.
struct RaySegments {
    Vec3 origin;
    Vec3 direction;
    std::vector<std::pair<double, double>> segments;
};

/// Bounded domain given by a shape centred at `center`.
class StarDomain {
public:
    using Shape = std::variant<Ball, Ellipsoid, Box, RadialShape>;

    StarDomain(Shape s, Vec3 center = {}) : shape_(std::move(s)), center_(center) {
        if (const auto* b = std::get_if<Ball>(&shape_)) {
            if (!(b->R0 > 0)) throw std::invalid_argument("ball radius must be positive");
        } else if (const auto* e = std::get_if<Ellipsoid>(&shape_)) {
            if (!(e->a > 0 && e->b > 0 && e->c > 0)) throw std::invalid_argument("ellipsoid semi-axes must be positive");
        } else if (const auto* x = std::get_if<Box>(&shape_)) {
            if (!(x->h.x > 0 && x->h.y > 0 && x->h.z > 0)) throw std::invalid_argument("box half-extents must be positive");
        }
        compute_extent();
    }

    static StarDomain ball(double R0) { return StarDomain(Ball{R0}); }
    static StarDomain ellipsoid(double a, double b, double c) { return StarDomain(Ellipsoid{a, b, c}); }
    static StarDomain box(Vec3 h) { return StarDomain(Box{h}); }
    static StarDomain radial(RadialShape s) { return StarDomain(std::move(s)); }

    const Shape& shape() const { return shape_; }
    const Vec3& center() const { return center_; }
    double circumradius() const { return circumradius_; }
    double diameter() const { return diameter_; }

    /// Distance from the centre to the boundary along unit direction u.
    double boundary_radius(const Vec3& u) const {
        return std::visit(
            [&](const auto& s) -> double {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, Ball>) {
                    return s.R0;
                } else if constexpr (std::is_same_v<T, Ellipsoid>) {
                    return 1.0 / std::sqrt(u.x * u.x / (s.a * s.a) + u.y * u.y / (s.b * s.b) + u.z * u.z / (s.c * s.c));
                } else if constexpr (std::is_same_v<T, Box>) {
                    double t = std::numeric_limits<double>::infinity();
                    for (int i = 0; i < 3; ++i)
                        if (u[i] != 0.0) t = std::min(t, s.h[i] / std::abs(u[i]));
                    return t;
                } else {
                    return s(u);
                }
            },
            shape_);
    }

    /// Strict interior membership.
    bool contains(const Vec3& x) const {
        const Vec3 p = x - center_;
        return std::visit(
            [&](const auto& s) -> bool {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, Ball>) {
                    return norm2(p) < s.R0 * s.R0;
                } else if constexpr (std::is_same_v<T, Ellipsoid>) {
                    return p.x * p.x / (s.a * s.a) + p.y * p.y / (s.b * s.b) + p.z * p.z / (s.c * s.c) < 1.0;
                } else if constexpr (std::is_same_v<T, Box>) {
                    return std::abs(p.x) < s.h.x && std::abs(p.y) < s.h.y && std::abs(p.z) < s.h.z;
                } else {
                    const double n = norm(p);
                    if (n == 0.0) return true;
                    return n < s(p / n);
                }
            },
            shape_);
    }

    /// Occupancy intervals of {x + rho*u : 0 <= rho <= rho_max}.
    RaySegments ray_segments(const Vec3& x, const Vec3& u, double rho_max) const {
        if (std::abs(norm(u) - 1.0) > 1e-12) throw std::invalid_argument("ray direction must be a unit vector");
        if (!(rho_max > 0)) throw std::invalid_argument("rho_max must be positive");
        RaySegments out{x, u, {}};
        const Vec3 p = x - center_;
        auto clip = [&](double lo, double hi) {
            lo = std::max(lo, 0.0);
            hi = std::min(hi, rho_max);
            if (hi > lo) out.segments.emplace_back(lo, hi);
        };
        auto quadratic = [&](const Vec3& pp, const Vec3& uu) {
            // |pp + rho*uu|^2 < 1
            const double A = norm2(uu), B = dot(pp, uu), C = norm2(pp) - 1.0;
            const double disc = B * B - A * C;
            if (disc <= 0) return;
            const double sq = std::sqrt(disc);
            // numerically stable roots
            const double q = -(B + std::copysign(sq, B));
            double r1 = q / A, r2 = (q != 0.0) ? C / q : -r1;
            if (r1 > r2) std::swap(r1, r2);
            clip(r1, r2);
        };
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, Ball>) {
                    quadratic(p / s.R0, u / s.R0);
                } else if constexpr (std::is_same_v<T, Ellipsoid>) {
                    const Vec3 k{1.0 / s.a, 1.0 / s.b, 1.0 / s.c};
                    quadratic({p.x * k.x, p.y * k.y, p.z * k.z}, {u.x * k.x, u.y * k.y, u.z * k.z});
                } else if constexpr (std::is_same_v<T, Box>) {
                    double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
                    for (int i = 0; i < 3; ++i) {
                        if (u[i] == 0.0) {
                            if (std::abs(p[i]) >= s.h[i]) return;
                            continue;
                        }
                        double t0 = (-s.h[i] - p[i]) / u[i], t1 = (s.h[i] - p[i]) / u[i];
                        if (t0 > t1) std::swap(t0, t1);
                        lo = std::max(lo, t0);
                        hi = std::min(hi, t1);
                    }
                    clip(lo, hi);
                } else {
                    radial_segments(s, p, u, rho_max, out.segments);
                }
            },
            shape_);
        return out;
    }

    /// Outward unit normal at a boundary point y.
    Vec3 outward_normal(const Vec3& y) const {
        const Vec3 p = y - center_;
        return std::visit(
            [&](const auto& s) -> Vec3 {
                using T = std::decay_t<decltype(s)>;
                Vec3 n;
                if constexpr (std::is_same_v<T, Ball>) {
                    n = p;
                } else if constexpr (std::is_same_v<T, Ellipsoid>) {
                    n = {p.x / (s.a * s.a), p.y / (s.b * s.b), p.z / (s.c * s.c)};
                } else if constexpr (std::is_same_v<T, Box>) {
                    int k = 0;
                    double best = -1.0;
                    for (int i = 0; i < 3; ++i) {
                        const double v = std::abs(p[i]) / s.h[i];
                        if (v > best) best = v, k = i;
                    }
                    n[k] = p[k] >= 0 ? 1.0 : -1.0;
                } else {
                    const double h = 1e-6 * circumradius_;
                    auto F = [&](const Vec3& q) { return norm(q) - s(q / norm(q)); };
                    for (int i = 0; i < 3; ++i) n[i] = (F(p + h * unit_axis(i)) - F(p - h * unit_axis(i))) / (2 * h);
                }
                return n / norm(n);
            },
            shape_);
    }

    /// Distance from x to the boundary: exact for ball and box, the minimum exit
    /// distance over 590 ray directions otherwise; 0 when x is not inside.
    double distance_to_boundary(const Vec3& x) const {
        if (!contains(x)) return 0.0;
        const Vec3 p = x - center_;
        if (const auto* b = std::get_if<Ball>(&shape_)) return b->R0 - norm(p);
        if (const auto* bx = std::get_if<Box>(&shape_))
            return std::min({bx->h.x - std::abs(p.x), bx->h.y - std::abs(p.y), bx->h.z - std::abs(p.z)});
        static const SphereRule dirs = lebedev_rule(590);
        double d = std::numeric_limits<double>::infinity();
        for (const auto& u : dirs.nodes) {
            const auto seg = ray_segments(x, u, 2.0 * diameter_);
            if (!seg.segments.empty()) d = std::min(d, seg.segments.front().second);
        }
        return d;
    }

    /// Axis-aligned scale about the centre (used by normalization).
    StarDomain scaled(double k, Vec3 new_center) const {
        Shape s = std::visit(
            [&](const auto& sh) -> Shape {
                using T = std::decay_t<decltype(sh)>;
                T c = sh;
                if constexpr (std::is_same_v<T, Ball>) {
                    c.R0 *= k;
                } else if constexpr (std::is_same_v<T, Ellipsoid>) {
                    c.a *= k, c.b *= k, c.c *= k;
                } else if constexpr (std::is_same_v<T, Box>) {
                    c.h *= k;
                } else {
                    for (double& v : c.r) v *= k;
                    c.finalize();
                }
                return c;
            },
            shape_);
        return StarDomain(std::move(s), new_center);
    }

    /// Domain volume: closed form for built-ins, quadrature of r^3/3 for radial tables.
    double volume() const {
        return std::visit(
            [&](const auto& s) -> double {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, Ball>) {
                    return 4.0 * std::numbers::pi * s.R0 * s.R0 * s.R0 / 3.0;
                } else if constexpr (std::is_same_v<T, Ellipsoid>) {
                    return 4.0 * std::numbers::pi * s.a * s.b * s.c / 3.0;
                } else if constexpr (std::is_same_v<T, Box>) {
                    return 8.0 * s.h.x * s.h.y * s.h.z;
                } else {
                    const SphereRule rule = sphere_rule(64, 128);
                    double v = 0.0;
                    for (int q = 0; q < rule.size(); ++q) v += rule.weights[q] * std::pow(s(rule.nodes[q]), 3) / 3.0;
                    return v;
                }
            },
            shape_);
    }

private:
    static void radial_segments(const RadialShape& s, const Vec3& p, const Vec3& u, double rho_max,
                                std::vector<std::pair<double, double>>& segs) {
        auto inside = [&](double rho) {
            const Vec3 q = p + rho * u;
            const double n = norm(q);
            return n == 0.0 || n < s(q / n);
        };
        auto refine = [&](double a, double b) {
            // inside(a) != inside(b)
            const bool ia = inside(a);
            while (b - a > 1e-10) {
                const double m = 0.5 * (a + b);
                (inside(m) == ia ? a : b) = m;
            }
            return 0.5 * (a + b);
        };
        const double rmin = s.min_value();
        const int steps = std::max(64, static_cast<int>(std::ceil(rho_max / (0.01 * rmin))));
        const double dr = rho_max / steps;
        bool prev = inside(0.0);
        double start = 0.0;
        for (int k = 1; k <= steps; ++k) {
            const double rho = k * dr;
            const bool cur = inside(rho);
            if (cur != prev) {
                const double c = refine(rho - dr, rho);
                if (cur) start = c;
                else segs.emplace_back(start, c);
                prev = cur;
            }
        }
        if (prev) segs.emplace_back(start, rho_max);
    }

    void compute_extent() {
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, Ball>) {
                    circumradius_ = s.R0;
                    diameter_ = 2.0 * s.R0;
                } else if constexpr (std::is_same_v<T, Ellipsoid>) {
                    circumradius_ = std::max({s.a, s.b, s.c});
                    diameter_ = 2.0 * circumradius_;
                } else if constexpr (std::is_same_v<T, Box>) {
                    circumradius_ = norm(s.h);
                    diameter_ = 2.0 * circumradius_;
                } else {
                    circumradius_ = s.max_value();
                    // farthest pair of tabulated boundary points
                    std::vector<Vec3> pts;
                    for (std::size_t i = 0; i < s.mu.size(); ++i) {
                        const double st = std::sqrt(std::max(0.0, 1.0 - s.mu[i] * s.mu[i]));
                        for (int j = 0; j < s.n_azimuth; ++j) {
                            const double phi = 2.0 * std::numbers::pi * j / s.n_azimuth;
                            pts.push_back(s.r[i * s.n_azimuth + j] * Vec3{st * std::cos(phi), st * std::sin(phi), s.mu[i]});
                        }
                    }
                    pts.push_back({0, 0, -s.south});
                    pts.push_back({0, 0, s.north});
                    double d = 0.0;
                    for (std::size_t i = 0; i < pts.size(); ++i)
                        for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, norm2(pts[i] - pts[j]));
                    diameter_ = std::sqrt(d);
                }
            },
            shape_);
        circumradius_ += norm(center_);
    }

    Shape shape_;
    Vec3 center_;
    double circumradius_ = 0.0;
    double diameter_ = 0.0;
};

/// Uniform sample in the open domain by rejection in the circumscribed ball.
template <class Rng>
Vec3 sample_in_domain(const StarDomain& dom, Rng& rng, int max_attempts = 1000000) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const double R = dom.circumradius();
    for (int k = 0; k < max_attempts; ++k) {
        const Vec3 p{U(rng), U(rng), U(rng)};
        if (norm2(p) >= 1.0) continue;
        const Vec3 x = R * p;
        if (dom.contains(x)) return x;
    }
    throw std::runtime_error("rejection sampling could not place a point in the domain");
}

template <class Rng>
Vec3 sample_unit_ball(Rng& rng) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (;;) {
        const Vec3 p{U(rng), U(rng), U(rng)};
        if (norm2(p) <= 1.0) return p;
    }
}

template <class Rng>
Vec3 sample_unit_vector(Rng& rng) {
    std::normal_distribution<double> G(0.0, 1.0);
    for (;;) {
        const Vec3 v{G(rng), G(rng), G(rng)};
        const double n = norm(v);
        if (n > 1e-12) return v / n;
    }
}

struct StarShapeReport {
    int samples = 0;
    int violations = 0;
    std::vector<std::pair<Vec3, Vec3>> witnesses;  // (b, z) pairs whose segment leaves the domain
};

/// Sampling check that segments from points of the closed unit ball to points of the domain stay inside.
inline StarShapeReport validate_star_shape(const StarDomain& dom, int n_samples, std::uint64_t seed) {
    if (n_samples < 1) throw std::invalid_argument("validate_star_shape needs n_samples >= 1");
    std::mt19937_64 rng(seed);
    StarShapeReport rep;
    rep.samples = n_samples;
    for (int k = 0; k < n_samples; ++k) {
        const Vec3 b = sample_unit_ball(rng);
        const Vec3 z = sample_in_domain(dom, rng);
        bool ok = true;
        for (int j = 1; j <= 16 && ok; ++j) {
            const double t = j / 17.0;
            ok = dom.contains(b + t * (z - b));
        }
        if (!ok) {
            ++rep.violations;
            if (rep.witnesses.size() < 16) rep.witnesses.emplace_back(b, z);
        }
    }
    return rep;
}

/// x -> (x - c) / r and its inverse, with the matching field rule g~(x~) = r g(c + r x~).
struct AffineNormalization {
    Vec3 c;
    double r = 1.0;

    Vec3 forward(const Vec3& x) const { return (x - c) / r; }
    Vec3 inverse(const Vec3& xt) const { return c + r * xt; }

    template <class G>
    auto transform_field(G g) const {
        return [g = std::move(g), c = c, r = r](const Vec3& xt) { return r * g(c + r * xt); };
    }
};

struct NormalizedDomain {
    AffineNormalization map;
    StarDomain image;
};

/// Carries a domain star-shaped w.r.t. the closed ball B(c, r) to one star-shaped w.r.t. B(0, 1).
inline NormalizedDomain normalize_domain(const Vec3& c, double r, const StarDomain& dom,
                                         int check_samples = 1000, std::uint64_t seed = 1) {
    if (!(r > 0)) throw std::invalid_argument("normalization radius must be positive");
    AffineNormalization m{c, r};
    StarDomain image = dom.scaled(1.0 / r, (dom.center() - c) / r);
    if (check_samples > 0) {
        const auto rep = validate_star_shape(image, check_samples, seed);
        if (rep.violations > 0) throw std::invalid_argument("normalized domain is not star-shaped w.r.t. the unit ball");
    }
    return {m, std::move(image)};
}

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t k = s.find(sep, start);
        out.emplace_back(s.substr(start, k == std::string_view::npos ? std::string_view::npos : k - start));
        if (k == std::string_view::npos) break;
        start = k + 1;
    }
    return out;
}

inline std::string trim(std::string_view s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string_view::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(a, b - a + 1));
}

inline double parse_double(std::string_view s) {
    const std::string t = trim(s);
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw std::invalid_argument("not a number: '" + t + "'");
    return v;
}

}  // namespace detail

/// Parses `ball:R0=2`, `ellipsoid:a=2,b=2.5,c=3`, `box:h=1.5,1.5,1.5`, `radial:file=<path>`.
inline StarDomain parse_domain(std::string_view spec) {
    const auto colon = spec.find(':');
    const std::string kind = detail::trim(spec.substr(0, colon));
    const std::string args = colon == std::string_view::npos ? std::string() : std::string(spec.substr(colon + 1));
    if (kind == "ball") {
        if (args.rfind("R0=", 0) != 0) throw std::invalid_argument("ball spec must be ball:R0=<radius>");
        return StarDomain::ball(detail::parse_double(args.substr(3)));
    }
    if (kind == "ellipsoid") {
        double v[3] = {0, 0, 0};
        bool seen[3] = {false, false, false};
        for (const auto& kv : detail::split(args, ',')) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw std::invalid_argument("ellipsoid spec needs a=,b=,c=");
            const std::string key = detail::trim(kv.substr(0, eq));
            const int i = key == "a" ? 0 : key == "b" ? 1 : key == "c" ? 2 : -1;
            if (i < 0) throw std::invalid_argument("unknown ellipsoid key '" + key + "'");
            v[i] = detail::parse_double(kv.substr(eq + 1));
            seen[i] = true;
        }
        if (!(seen[0] && seen[1] && seen[2])) throw std::invalid_argument("ellipsoid spec needs a=,b=,c=");
        return StarDomain::ellipsoid(v[0], v[1], v[2]);
    }
    if (kind == "box") {
        if (args.rfind("h=", 0) != 0) throw std::invalid_argument("box spec must be box:h=<h1>,<h2>,<h3>");
        const auto parts = detail::split(args.substr(2), ',');
        if (parts.size() != 3) throw std::invalid_argument("box spec needs three half-extents");
        return StarDomain::box({detail::parse_double(parts[0]), detail::parse_double(parts[1]), detail::parse_double(parts[2])});
    }
    if (kind == "radial") {
        if (args.rfind("file=", 0) != 0) throw std::invalid_argument("radial spec must be radial:file=<path>");
        return StarDomain::radial(load_radial_csv(args.substr(5)));
    }
    throw std::invalid_argument("unknown domain kind '" + kind + "'");
}

/// Shortest text that parses back to the same double.
inline std::string format_number(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string domain_spec(const StarDomain& dom) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Ball>) {
                return "ball:R0=" + format_number(s.R0);
            } else if constexpr (std::is_same_v<T, Ellipsoid>) {
                return "ellipsoid:a=" + format_number(s.a) + ",b=" + format_number(s.b) + ",c=" + format_number(s.c);
            } else if constexpr (std::is_same_v<T, Box>) {
                return "box:h=" + format_number(s.h.x) + "," + format_number(s.h.y) + "," + format_number(s.h.z);
            } else {
                return "radial:file=" + s.source;
            }
        },
        dom.shape());
}

}  // namespace curlinv
