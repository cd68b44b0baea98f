#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "curlinv/geometry.hpp"
#include "curlinv/quadrature.hpp"
#include "curlinv/vec.hpp"

namespace curlinv {

enum class Smoothness { smooth, hoelder, dini, non_dini };

inline std::string_view to_string(Smoothness s) {
    switch (s) {
        case Smoothness::smooth: return "smooth";
        case Smoothness::hoelder: return "hoelder";
        case Smoothness::dini: return "dini";
        case Smoothness::non_dini: return "non-dini";
    }
    return "?";
}

struct VectorField {
    std::string name;
    std::function<Vec3(const Vec3&)> eval;
    std::function<double(const Vec3&)> div;   // empty when no analytic divergence is known
    std::function<Vec3(const Vec3&)> curl;    // empty when no analytic curl is known
    Smoothness smoothness = Smoothness::smooth;
    double hoelder_exponent = 1.0;
    std::vector<int> kink_axes;               // coordinate planes x_k = 0 where the field is not smooth

    Vec3 operator()(const Vec3& x) const { return eval(x); }
    bool has_div() const { return static_cast<bool>(div); }
};

struct ScalarField {
    std::string name;
    std::function<double(const Vec3&)> eval;
    std::vector<int> kink_axes;

    double operator()(const Vec3& x) const { return eval(x); }
};

inline double hoelder_profile(double t) { return std::sqrt(std::abs(t)); }

/// 1 / (1 - log|t|) on |t| <= 1 (0 at t = 0), continued by 1 for |t| > 1.
inline double non_dini_profile(double t) {
    const double a = std::abs(t);
    if (a == 0.0) return 0.0;
    if (a >= 1.0) return 1.0;
    return 1.0 / (1.0 - std::log(a));
}

inline VectorField constant_field(const Vec3& c) {
    VectorField f;
    f.name = "constant:" + format_number(c.x) + "," + format_number(c.y) + "," + format_number(c.z);
    f.eval = [c](const Vec3&) { return c; };
    f.div = [](const Vec3&) { return 0.0; };
    f.curl = [](const Vec3&) { return Vec3{}; };
    return f;
}

inline VectorField zero_field() {
    VectorField f = constant_field({});
    f.name = "zero";
    return f;
}

/// Built-in test fields: constant[:c1,c2,c3], rigid, abc, trig, hoelder, nonsol, nondini, zero.
inline VectorField registry_get(std::string_view spec) {
    const auto colon = spec.find(':');
    const std::string name = detail::trim(spec.substr(0, colon));
    const std::string args = colon == std::string_view::npos ? std::string() : std::string(spec.substr(colon + 1));
    if (name != "constant" && !args.empty()) throw std::invalid_argument("field '" + name + "' takes no parameters");
    VectorField f;
    f.name = name;
    if (name == "constant") {
        Vec3 c{1.0, 0.0, 0.0};
        if (!args.empty()) {
            const auto parts = detail::split(args, ',');
            if (parts.size() != 3) throw std::invalid_argument("constant field needs three components");
            c = {detail::parse_double(parts[0]), detail::parse_double(parts[1]), detail::parse_double(parts[2])};
        }
        return constant_field(c);
    }
    if (name == "zero") return zero_field();
    if (name == "rigid") {
        f.eval = [](const Vec3& x) { return Vec3{-x.y, x.x, 0.0}; };
        f.div = [](const Vec3&) { return 0.0; };
        f.curl = [](const Vec3&) { return Vec3{0.0, 0.0, 2.0}; };
    } else if (name == "abc") {
        f.eval = [](const Vec3& x) {
            return Vec3{std::sin(x.z) + std::cos(x.y), std::sin(x.x) + std::cos(x.z), std::sin(x.y) + std::cos(x.x)};
        };
        f.div = [](const Vec3&) { return 0.0; };
        f.curl = f.eval;
    } else if (name == "trig") {
        f.eval = [](const Vec3& x) { return Vec3{std::sin(x.z), std::sin(x.x), std::sin(x.y)}; };
        f.div = [](const Vec3&) { return 0.0; };
        f.curl = [](const Vec3& x) { return Vec3{std::cos(x.y), std::cos(x.z), std::cos(x.x)}; };
    } else if (name == "hoelder") {
        f.eval = [](const Vec3& x) { return Vec3{hoelder_profile(x.y), hoelder_profile(x.z), hoelder_profile(x.x)}; };
        f.div = [](const Vec3&) { return 0.0; };
        f.smoothness = Smoothness::hoelder;
        f.hoelder_exponent = 0.5;
        f.kink_axes = {0, 1, 2};
    } else if (name == "nonsol") {
        f.eval = [](const Vec3& x) { return Vec3{std::sin(x.x), 0.0, 0.0}; };
        f.div = [](const Vec3& x) { return std::cos(x.x); };
        f.curl = [](const Vec3&) { return Vec3{}; };
    } else if (name == "nondini") {
        f.eval = [](const Vec3& x) { return Vec3{non_dini_profile(x.y), non_dini_profile(x.z), non_dini_profile(x.x)}; };
        f.div = [](const Vec3&) { return 0.0; };
        f.smoothness = Smoothness::non_dini;
        f.hoelder_exponent = 0.0;
        f.kink_axes = {0, 1, 2};
    } else {
        throw std::invalid_argument("unknown field '" + name + "'");
    }
    return f;
}

inline const std::vector<std::string>& registry_names() {
    static const std::vector<std::string> names{"constant", "rigid", "abc", "trig", "hoelder", "nonsol", "nondini"};
    return names;
}

/// a g1 + b g2 (analytic divergence/curl kept when both have them).
inline VectorField linear_combination(double a, const VectorField& g1, double b, const VectorField& g2) {
    VectorField f;
    f.name = g1.name + "+" + g2.name;
    f.eval = [=](const Vec3& x) { return a * g1(x) + b * g2(x); };
    if (g1.div && g2.div) f.div = [=](const Vec3& x) { return a * g1.div(x) + b * g2.div(x); };
    if (g1.curl && g2.curl) f.curl = [=](const Vec3& x) { return a * g1.curl(x) + b * g2.curl(x); };
    f.smoothness = std::max(g1.smoothness, g2.smoothness);
    f.kink_axes = g1.kink_axes;
    f.kink_axes.insert(f.kink_axes.end(), g2.kink_axes.begin(), g2.kink_axes.end());
    return f;
}

inline ScalarField divergence_of(const VectorField& g) {
    if (!g.div) throw std::invalid_argument("field '" + g.name + "' has no analytic divergence");
    return {"div:" + g.name, g.div, g.kink_axes};
}

/// int_Omega F dy, polar about the centre of the domain.
inline double domain_integral(const StarDomain& dom, const std::function<double(const Vec3&)>& F,
                              const QuadratureConfig& cfg = {}) {
    const SphereRule sphere = sphere_rule_with_count(cfg.sphere_nodes);
    const auto& radial = gauss_legendre(cfg.n_rho);
    const Vec3 c = dom.center();
    const double R = cfg.R_factor * dom.circumradius();
    return integrate_ball_polar<double>(c, R, sphere, radial, &dom, Support::omega, NoBreaks{}, [&](const Vec3&) {
        return std::optional([&](double rho, const Vec3& y, bool) { return F(y) * rho * rho; });
    });
}

/// Scalar data for the divergence problem: `y1`, `cos1` (cos y1 minus its domain mean), `div:<field>`.
inline ScalarField scalar_get(std::string_view spec, const StarDomain& dom, const QuadratureConfig& cfg = {}) {
    if (spec == "y1") return {"y1", [](const Vec3& y) { return y.x; }, {}};
    if (spec == "cos1") {
        const double mean = domain_integral(dom, [](const Vec3& y) { return std::cos(y.x); }, cfg) /
                           domain_integral(dom, [](const Vec3&) { return 1.0; }, cfg);
        return {"cos1", [mean](const Vec3& y) { return std::cos(y.x) - mean; }, {}};
    }
    if (spec.rfind("div:", 0) == 0) return divergence_of(registry_get(spec.substr(4)));
    throw std::invalid_argument("unknown scalar field '" + std::string(spec) + "'");
}

struct ModulusTable {
    std::vector<double> radii;   // ascending
    std::vector<double> omega;   // running-max corrected
    std::vector<double> raw;     // per-bin sampled maxima
    double dini_integral = 0.0;
    bool diverging = false;
};

inline std::vector<double> log_bins(double rho_min, double rho_max, int per_decade) {
    if (!(rho_min > 0 && rho_max > rho_min) || per_decade < 1) throw std::invalid_argument("bad bin range");
    const int n = static_cast<int>(std::ceil(std::log10(rho_max / rho_min) * per_decade - 1e-9));
    std::vector<double> r;
    for (int k = 0; k <= n; ++k) r.push_back(rho_min * std::pow(rho_max / rho_min, static_cast<double>(k) / n));
    return r;
}

/// Sampled modulus of continuity.  Bins are processed from the largest radius down; half of each bin's
/// pairs are uniform in the domain, half are placed near the worst pair of the previous (larger) bin.
inline ModulusTable modulus_of_continuity(const std::function<Vec3(const Vec3&)>& f, const StarDomain& dom, int n_pairs,
                                          std::vector<double> bins, std::uint64_t seed) {
    if (n_pairs < 1000) throw std::invalid_argument("modulus_of_continuity needs n_pairs >= 1000");
    if (bins.empty()) throw std::invalid_argument("modulus_of_continuity needs at least one bin");
    std::sort(bins.begin(), bins.end());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    ModulusTable t;
    t.radii = bins;
    t.raw.assign(bins.size(), 0.0);
    Vec3 focus[2];
    bool have_focus = false;
    double focus_scale = 0.0;
    for (std::size_t b = bins.size(); b-- > 0;) {
        const double rho = bins[b];
        double best = 0.0;
        Vec3 bx, by;
        bool found = false;
        for (int k = 0; k < n_pairs; ++k) {
            Vec3 x;
            if (have_focus && (k & 1)) {
                x = focus[(k >> 1) & 1] + focus_scale * std::cbrt(U(rng)) * sample_unit_vector(rng);
                if (!dom.contains(x)) continue;
            } else {
                x = sample_in_domain(dom, rng);
            }
            const double dist = rho * (1.0 / std::sqrt(2.0) + (1.0 - 1.0 / std::sqrt(2.0)) * U(rng));
            const Vec3 y = x + dist * sample_unit_vector(rng);
            if (!dom.contains(y)) continue;
            const double v = norm(f(x) - f(y));
            if (!found || v > best) {
                best = v;
                bx = x;
                by = y;
                found = true;
            }
        }
        t.raw[b] = best;
        if (found) {
            focus[0] = bx;
            focus[1] = by;
            focus_scale = rho;
            have_focus = true;
        }
    }
    t.omega = t.raw;
    for (std::size_t b = 1; b < t.omega.size(); ++b) t.omega[b] = std::max(t.omega[b], t.omega[b - 1]);
    return t;
}

inline ModulusTable modulus_of_continuity(const std::function<double(const Vec3&)>& f, const StarDomain& dom, int n_pairs,
                                          std::vector<double> bins, std::uint64_t seed) {
    return modulus_of_continuity([&f](const Vec3& x) { return Vec3{f(x), 0.0, 0.0}; }, dom, n_pairs, std::move(bins), seed);
}

/// Least-squares slope of log(omega) against log(rho) over bins with positive omega.
inline double modulus_slope(const ModulusTable& t) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t b = 0; b < t.radii.size(); ++b) {
        if (!(t.omega[b] > 0)) continue;
        const double lx = std::log(t.radii[b]), ly = std::log(t.omega[b]);
        sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
        ++n;
    }
    if (n < 2) return 0.0;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// omega(rho) from the table, linear in log(rho), clamped outside the tabulated range.
inline double modulus_at(const ModulusTable& t, double rho) {
    if (rho <= t.radii.front()) return t.omega.front();
    if (rho >= t.radii.back()) return t.omega.back();
    const auto it = std::upper_bound(t.radii.begin(), t.radii.end(), rho);
    const std::size_t j = static_cast<std::size_t>(it - t.radii.begin());
    const double a = std::log(t.radii[j - 1]), b = std::log(t.radii[j]);
    const double s = (std::log(rho) - a) / (b - a);
    return (1.0 - s) * t.omega[j - 1] + s * t.omega[j];
}

struct DiniResult {
    std::vector<double> rho_min;
    std::vector<double> values;       // int_{rho_min}^{diam} omega / rho
    std::vector<double> increments;   // values[k] - values[k-1]
    double value = 0.0;
    bool diverging = false;
};

/// Midpoint rule in log(rho) (20 cells per decade) over [rho_min, diam] for each rho_min.
inline DiniResult dini_integral(const ModulusTable& t, double diam,
                                std::vector<double> rho_min_sequence = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    if (t.radii.empty()) throw std::invalid_argument("empty modulus table");
    DiniResult r;
    r.rho_min = rho_min_sequence;
    for (double rm : rho_min_sequence) {
        const double a = std::log(rm), b = std::log(diam);
        const int cells = std::max(1, static_cast<int>(std::ceil((b - a) / std::log(10.0) * 20)));
        const double h = (b - a) / cells;
        double sum = 0.0;
        for (int k = 0; k < cells; ++k) sum += modulus_at(t, std::exp(a + (k + 0.5) * h));
        r.values.push_back(sum * h);
    }
    for (std::size_t k = 1; k < r.values.size(); ++k) r.increments.push_back(r.values[k] - r.values[k - 1]);
    r.value = r.values.empty() ? 0.0 : r.values.back();
    r.diverging = r.increments.size() >= 2;
    for (std::size_t k = 1; k < r.increments.size(); ++k)
        if (!(r.increments[k - 1] > 0.0 && r.increments[k] > 0.5 * r.increments[k - 1])) r.diverging = false;
    return r;
}

inline ModulusTable& attach_dini(ModulusTable& t, double diam) {
    const DiniResult d = dini_integral(t, diam);
    t.dini_integral = d.value;
    t.diverging = d.diverging;
    return t;
}

}  // namespace curlinv
