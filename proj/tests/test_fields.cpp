#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "curlinv/fields.hpp"
#include "curlinv/verify.hpp"

using namespace curlinv;

namespace {

double fd_div(const VectorField& f, const Vec3& x, double h) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) s += (f(x + h * unit_axis(i))[i] - f(x - h * unit_axis(i))[i]) / (2 * h);
    return s;
}

Vec3 fd_curl(const VectorField& f, const Vec3& x, double h) {
    Mat3 J;
    for (int m = 0; m < 3; ++m) {
        const Vec3 d = (f(x + h * unit_axis(m)) - f(x - h * unit_axis(m))) / (2 * h);
        for (int i = 0; i < 3; ++i) J(i, m) = d[i];
    }
    return {J(2, 1) - J(1, 2), J(0, 2) - J(2, 0), J(1, 0) - J(0, 1)};
}

}  // namespace

TEST(Registry, NamesAndMetadata) {
    for (const auto& name : registry_names()) {
        const VectorField f = registry_get(name);
        EXPECT_TRUE(static_cast<bool>(f.eval)) << name;
        EXPECT_TRUE(f.has_div()) << name;
    }
    EXPECT_EQ(registry_get("hoelder").smoothness, Smoothness::hoelder);
    EXPECT_DOUBLE_EQ(registry_get("hoelder").hoelder_exponent, 0.5);
    EXPECT_EQ(registry_get("nondini").smoothness, Smoothness::non_dini);
    EXPECT_EQ(registry_get("rigid").smoothness, Smoothness::smooth);
    EXPECT_EQ(registry_get("hoelder").kink_axes.size(), 3u);
    EXPECT_EQ(to_string(Smoothness::non_dini), "non-dini");
    EXPECT_THROW(registry_get("vortex"), std::invalid_argument);
    EXPECT_THROW(registry_get("rigid:1"), std::invalid_argument);
    EXPECT_THROW(registry_get("constant:1,2"), std::invalid_argument);
}

TEST(Registry, PointValues) {
    EXPECT_EQ(registry_get("constant")({3, 4, 5}), (Vec3{1, 0, 0}));
    EXPECT_EQ(registry_get("constant:0,2,-1")({3, 4, 5}), (Vec3{0, 2, -1}));
    EXPECT_EQ(registry_get("rigid")({1, 2, 3}), (Vec3{-2, 1, 0}));
    EXPECT_EQ(registry_get("zero")({1, 2, 3}), (Vec3{}));
    const Vec3 t = registry_get("trig")({0.1, 0.2, 0.3});
    EXPECT_DOUBLE_EQ(t.x, std::sin(0.3));
    EXPECT_DOUBLE_EQ(t.y, std::sin(0.1));
    EXPECT_DOUBLE_EQ(t.z, std::sin(0.2));
    const Vec3 h = registry_get("hoelder")({0.25, -0.04, 0.0});
    EXPECT_DOUBLE_EQ(h.x, 0.2);
    EXPECT_DOUBLE_EQ(h.y, 0.0);
    EXPECT_DOUBLE_EQ(h.z, 0.5);
    EXPECT_DOUBLE_EQ(non_dini_profile(std::exp(-1.0)), 0.5);
    EXPECT_EQ(non_dini_profile(0.0), 0.0);
    EXPECT_EQ(non_dini_profile(-3.0), 1.0);
}

TEST(Registry, AnalyticDivergenceAndCurlMatchFiniteDifferences) {
    std::mt19937_64 rng(3);
    for (const auto& name : registry_names()) {
        const VectorField f = registry_get(name);
        for (int k = 0; k < 50; ++k) {
            Vec3 x = 2.0 * sample_unit_ball(rng);
            bool near_kink = false;
            for (int a : f.kink_axes) near_kink = near_kink || std::abs(x[a]) < 1e-2;
            if (near_kink) continue;
            EXPECT_NEAR(f.div(x), fd_div(f, x, 1e-5), 1e-6) << name << ' ' << x;
            if (f.curl) {
                const Vec3 c = fd_curl(f, x, 1e-5);
                EXPECT_LE(norm(f.curl(x) - c), 1e-6) << name << ' ' << x;
            }
        }
    }
}

TEST(Registry, LinearCombination) {
    const VectorField a = registry_get("rigid"), b = registry_get("trig");
    const VectorField c = linear_combination(2.0, a, -0.5, b);
    const Vec3 x{0.3, -0.7, 1.1};
    EXPECT_LE(norm(c(x) - (2.0 * a(x) - 0.5 * b(x))), 1e-15);
    EXPECT_LE(norm(c.curl(x) - (2.0 * a.curl(x) - 0.5 * b.curl(x))), 1e-15);
    const VectorField d = linear_combination(1.0, a, 1.0, registry_get("hoelder"));
    EXPECT_EQ(d.smoothness, Smoothness::hoelder);
    EXPECT_FALSE(static_cast<bool>(d.curl));
}

TEST(Modulus, ConstantFieldIsZero) {
    const StarDomain ball = StarDomain::ball(1.0);
    const auto t = modulus_of_continuity([](const Vec3&) { return Vec3{1, 2, 3}; }, ball, 1000, log_bins(1e-3, 1.0, 2), 1);
    for (double w : t.omega) EXPECT_EQ(w, 0.0);
    EXPECT_EQ(modulus_slope(t), 0.0);
    EXPECT_FALSE(dini_integral(t, 2.0).diverging);
}

TEST(Modulus, SquareRootProfile) {
    const StarDomain ball = StarDomain::ball(1.0);
    const auto t = modulus_of_continuity([](const Vec3& x) { return std::sqrt(std::abs(x.x)); }, ball, 4000,
                                         log_bins(1e-4, 1.0, 2), 7);
    for (std::size_t b = 0; b < t.radii.size(); ++b) {
        const double r = std::sqrt(t.radii[b]);
        EXPECT_GE(t.omega[b], 0.7 * r) << t.radii[b];
        EXPECT_LE(t.omega[b], 1.3 * r) << t.radii[b];
    }
    EXPECT_NEAR(modulus_slope(t), 0.5, 0.1);
}

TEST(Modulus, LinearFunction) {
    const StarDomain ball = StarDomain::ball(1.0);
    const auto t = modulus_of_continuity([](const Vec3& x) { return Vec3{x.x, x.y, x.z}; }, ball, 2000,
                                         log_bins(1e-3, 1.0, 2), 11);
    for (std::size_t b = 0; b < t.radii.size(); ++b) {
        EXPECT_GE(t.omega[b], 0.9 * t.radii[b]);
        EXPECT_LE(t.omega[b], 1.0 * t.radii[b] * (1 + 1e-12));
    }
    EXPECT_NEAR(modulus_slope(t), 1.0, 0.05);
}

TEST(Modulus, RunningMaxAndDeterminism) {
    const StarDomain ball = StarDomain::ball(2.0);
    const VectorField f = registry_get("trig");
    const auto a = modulus_of_continuity(f.eval, ball, 1000, log_bins(1e-3, 4.0, 3), 5);
    const auto b = modulus_of_continuity(f.eval, ball, 1000, log_bins(1e-3, 4.0, 3), 5);
    EXPECT_EQ(a.omega, b.omega);
    for (std::size_t k = 1; k < a.omega.size(); ++k) EXPECT_GE(a.omega[k], a.omega[k - 1]);
    for (std::size_t k = 0; k < a.omega.size(); ++k) EXPECT_GE(a.omega[k], a.raw[k]);
    EXPECT_THROW(modulus_of_continuity(f.eval, ball, 999, log_bins(1e-3, 4.0, 3), 5), std::invalid_argument);
    EXPECT_THROW(log_bins(1.0, 0.5, 2), std::invalid_argument);
}

TEST(Modulus, LogBins) {
    const auto r = log_bins(1e-4, 1.0, 4);
    ASSERT_EQ(r.size(), 17u);
    EXPECT_DOUBLE_EQ(r.front(), 1e-4);
    EXPECT_NEAR(r.back(), 1.0, 1e-15);
    for (std::size_t k = 1; k < r.size(); ++k) EXPECT_NEAR(r[k] / r[k - 1], std::pow(10.0, 0.25), 1e-12);
}

TEST(Dini, ExactTablesFromClosedForms) {
    // omega = rho^(1/2): int_{rm}^{1} rho^(-1/2) = 2 (1 - sqrt(rm)); table on a fine grid
    ModulusTable t;
    t.radii = log_bins(1e-7, 1.0, 40);
    for (double r : t.radii) t.omega.push_back(std::sqrt(r));
    t.raw = t.omega;
    const DiniResult d = dini_integral(t, 1.0);
    for (std::size_t k = 0; k < d.values.size(); ++k)
        EXPECT_NEAR(d.values[k], 2.0 * (1.0 - std::sqrt(d.rho_min[k])), 2e-3);
    EXPECT_FALSE(d.diverging);

    // omega = 1 / (1 - log rho): integral is log(1 - log rm), increments shrink slowly
    ModulusTable u;
    u.radii = t.radii;
    for (double r : u.radii) u.omega.push_back(non_dini_profile(r));
    u.raw = u.omega;
    const DiniResult e = dini_integral(u, 1.0);
    for (std::size_t k = 0; k < e.values.size(); ++k)
        EXPECT_NEAR(e.values[k], std::log(1.0 - std::log(e.rho_min[k])), 2e-3);
    EXPECT_TRUE(e.diverging);
}

TEST(Dini, RegistryVerdicts) {
    const StarDomain ball = StarDomain::ball(2.0);
    for (const char* name : {"hoelder", "nondini", "rigid"}) {
        const VectorField f = registry_get(name);
        ModulusTable t = modulus_of_continuity(f.eval, ball, 2000, log_bins(1e-4, ball.diameter(), 4), 1);
        attach_dini(t, ball.diameter());
        EXPECT_EQ(t.diverging, f.smoothness == Smoothness::non_dini) << name;
        EXPECT_TRUE(std::isfinite(t.dini_integral));
    }
}

TEST(Dini, ScalingOfTheField) {
    const StarDomain ball = StarDomain::ball(1.0);
    const auto f = [](const Vec3& x) { return std::sqrt(std::abs(x.y)); };
    const auto a = modulus_of_continuity(f, ball, 1000, log_bins(1e-3, 1.0, 2), 4);
    const auto b = modulus_of_continuity([&](const Vec3& x) { return 3.0 * f(x); }, ball, 1000, log_bins(1e-3, 1.0, 2), 4);
    for (std::size_t k = 0; k < a.omega.size(); ++k) EXPECT_NEAR(b.omega[k], 3.0 * a.omega[k], 1e-14);
    EXPECT_NEAR(dini_integral(b, 2.0).value, 3.0 * dini_integral(a, 2.0).value, 1e-12);
}

TEST(Scalars, LookupAndMean) {
    const StarDomain ball = StarDomain::ball(2.0);
    EXPECT_DOUBLE_EQ(scalar_get("y1", ball)({0.4, 1, 1}), 0.4);
    const ScalarField c = scalar_get("cos1", ball);
    // int over the ball of cos y1 = pi int_{-2}^{2} (4 - t^2) cos t dt = pi (4 sin 2 - 8 cos 2)
    const double I = M_PI * (4.0 * std::sin(2.0) - 8.0 * std::cos(2.0));
    const double vol = 4.0 / 3.0 * M_PI * 8.0;
    EXPECT_NEAR(c({0.7, 0, 0}), std::cos(0.7) - I / vol, 1e-10);
    EXPECT_NEAR(domain_integral(ball, c.eval), 0.0, 1e-9);
    const ScalarField d = scalar_get("div:nonsol", ball);
    EXPECT_DOUBLE_EQ(d({0.3, 0, 0}), std::cos(0.3));
    EXPECT_THROW(scalar_get("y2", ball), std::invalid_argument);
    EXPECT_THROW(divergence_of(VectorField{"bare", [](const Vec3& x) { return x; }, {}, {}, Smoothness::smooth, 1.0, {}}), std::invalid_argument);
}

TEST(Scalars, DomainIntegralOracles) {
    const StarDomain ball = StarDomain::ball(2.0);
    EXPECT_NEAR(domain_integral(ball, [](const Vec3&) { return 1.0; }), 32.0 * M_PI / 3.0, 1e-10);
    EXPECT_NEAR(domain_integral(ball, [](const Vec3& y) { return norm2(y); }), 4.0 * M_PI * 32.0 / 5.0, 1e-9);
    // the radial function of a cube has kinks on the sphere; the angular rule converges slowly
    const StarDomain cube = StarDomain::box({1.5, 1.5, 1.5});
    EXPECT_NEAR(domain_integral(cube, [](const Vec3&) { return 1.0; }), 27.0, 5e-3 * 27.0);
    EXPECT_NEAR(domain_integral(cube, [](const Vec3& y) { return y.x * y.x; }), 27.0 * 0.75, 1e-2 * 27.0 * 0.75);
}
