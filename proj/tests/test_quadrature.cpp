#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "curlinv/geometry.hpp"
#include "curlinv/kernels.hpp"
#include "curlinv/quadrature.hpp"

using namespace curlinv;

namespace {

constexpr double pi = std::numbers::pi;

template <class F>
double sphere_sum(const SphereRule& r, F f) {
    double s = 0.0;
    for (int q = 0; q < r.size(); ++q) s += r.weights[q] * f(r.nodes[q]);
    return s;
}

// closed-form monomial moments over the unit sphere: int u^a v^b w^c for even exponents
double monomial_moment(int a, int b, int c) {
    if (a % 2 || b % 2 || c % 2) return 0.0;
    auto dfact = [](int n) {
        double r = 1.0;
        for (int k = n; k > 1; k -= 2) r *= k;
        return r;
    };
    return 4.0 * pi * dfact(a - 1) * dfact(b - 1) * dfact(c - 1) / dfact(a + b + c + 1);
}

void expect_moments_up_to_6(const SphereRule& r, double tol) {
    for (int a = 0; a <= 6; ++a)
        for (int b = 0; a + b <= 6; ++b)
            for (int c = 0; a + b + c <= 6; ++c) {
                const double v = sphere_sum(r, [&](const Vec3& u) {
                    return std::pow(u.x, a) * std::pow(u.y, b) * std::pow(u.z, c);
                });
                EXPECT_NEAR(v, monomial_moment(a, b, c), tol) << a << b << c;
            }
}

}  // namespace

TEST(GaussLegendre, NodesSymmetricWeightsSumToTwo) {
    for (int n : {1, 2, 5, 16, 64}) {
        const auto& r = gauss_legendre(n);
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            s += r.weights[i];
            EXPECT_NEAR(r.nodes[i], -r.nodes[n - 1 - i], 1e-15);
            EXPECT_GT(r.weights[i], 0.0);
        }
        EXPECT_NEAR(s, 2.0, 1e-14);
    }
}

TEST(GaussLegendre, ExactForDegree2nMinus1) {
    const int n = 7;
    for (int p = 0; p <= 2 * n - 1; ++p) {
        const double v = integrate_interval([p](double x) { return std::pow(x, p); }, 0.0, 1.0, n);
        EXPECT_NEAR(v, 1.0 / (p + 1), 1e-15);
    }
}

TEST(IntegrateInterval, Examples) {
    EXPECT_DOUBLE_EQ(integrate_interval([](double x) { return x * x; }, 0.0, 1.0, 2), 1.0 / 3.0);
    EXPECT_NEAR(integrate_interval([](double x) { return std::sin(x); }, 0.0, pi, 16), 2.0, 1e-12);
    EXPECT_NEAR(integrate_interval([](double x) { return std::exp(x); }, 0.0, 1.0, 16), std::exp(1.0) - 1.0, 1e-14);
    EXPECT_THROW(integrate_interval([](double x) { return x; }, 1.0, 1.0, 4), std::invalid_argument);
}

TEST(SphereRule, ProductRuleExamples) {
    const SphereRule r = sphere_rule(14, 19);
    EXPECT_EQ(r.size(), 266);
    EXPECT_NEAR(sphere_sum(r, [](const Vec3&) { return 1.0; }), 4.0 * pi, 1e-12);
    EXPECT_NEAR(sphere_sum(r, [](const Vec3& u) { return u.z; }), 0.0, 1e-12);
    EXPECT_NEAR(sphere_sum(r, [](const Vec3& u) { return u.z * u.z; }), 4.0 * pi / 3.0, 1e-10);
    for (const auto& u : r.nodes) EXPECT_NEAR(norm(u), 1.0, 1e-14);
    for (double w : r.weights) EXPECT_GT(w, 0.0);
}

TEST(SphereRule, MomentsUpToDegree6) {
    expect_moments_up_to_6(sphere_rule(14, 19), 1e-10);
    expect_moments_up_to_6(lebedev_rule(590), 1e-12);
    expect_moments_up_to_6(lebedev_rule(302), 1e-12);
    expect_moments_up_to_6(lebedev_rule(266), 1e-12);
}

TEST(SphereRule, RejectsTooFewNodes) {
    EXPECT_THROW(sphere_rule(1, 8), std::invalid_argument);
    EXPECT_THROW(sphere_rule(4, 3), std::invalid_argument);
}

TEST(SphereRule, CountMapping) {
    const auto [np, na] = product_dims(266);
    EXPECT_EQ(np, 14);
    EXPECT_EQ(na, 19);
    EXPECT_EQ(sphere_rule_with_count(266).size(), 266);
    EXPECT_EQ(surface_rule_with_count(590).size(), 590);
    EXPECT_EQ(surface_rule_with_count(100).size(), sphere_rule_with_count(100).size());
}

TEST(CapRule, AreaAndRotatedMoments) {
    const Vec3 axis = Vec3{1.0, -2.0, 0.5} / norm(Vec3{1.0, -2.0, 0.5});
    for (double cmin : {-1.0, 0.0, 0.6}) {
        const SphereRule r = cap_rule(axis, cmin, 14, 19);
        EXPECT_NEAR(sphere_sum(r, [](const Vec3&) { return 1.0; }), 2.0 * pi * (1.0 - cmin), 1e-12);
        for (const auto& u : r.nodes) {
            EXPECT_NEAR(norm(u), 1.0, 1e-14);
            EXPECT_GE(dot(u, axis), cmin - 1e-14);
        }
        // int over cap of (u.axis)^2 = 2 pi (1 - cmin^3) / 3
        EXPECT_NEAR(sphere_sum(r, [&](const Vec3& u) { return dot(u, axis) * dot(u, axis); }),
                    2.0 * pi * (1.0 - cmin * cmin * cmin) / 3.0, 1e-12);
    }
    expect_moments_up_to_6(cap_rule(axis, -1.0, 14, 19), 1e-10);
}

TEST(BandRule, AreaAndJoin) {
    const Vec3 axis{0.0, 0.6, 0.8};
    const SphereRule lo = band_rule(axis, -1.0, 0.2, 7, 19), hi = band_rule(axis, 0.2, 1.0, 14, 19);
    EXPECT_NEAR(sphere_sum(lo, [](const Vec3&) { return 1.0; }), 2.0 * pi * 1.2, 1e-12);
    EXPECT_NEAR(sphere_sum(hi, [](const Vec3&) { return 1.0; }), 2.0 * pi * 0.8, 1e-12);
    const SphereRule both = join_rules(lo, hi);
    EXPECT_EQ(both.size(), lo.size() + hi.size());
    expect_moments_up_to_6(both, 1e-10);
    EXPECT_THROW(band_rule(axis, 0.3, 0.3, 4, 4), std::invalid_argument);
}

TEST(QuadratureRules, DirectionsNearTheSupportRadius) {
    const QuadratureRules rules{QuadratureConfig{}};
    // split rule: full sphere, both halves about x
    const SphereRule split = rules.directions_for(Vec3{0.0, 0.7, 0.0}, 0.9);
    EXPECT_EQ(split.size(), 7 * 19 + 14 * 19);
    expect_moments_up_to_6(split, 1e-10);
    // soft cap: rays through x that miss B(0, 0.985 * 0.9) are dropped
    const Vec3 x{0.0, 0.0, 0.895};
    const SphereRule cap = rules.directions_for(x, 0.9);
    const double rc = 0.985 * 0.9;
    EXPECT_EQ(cap.size(), 266);
    for (const auto& u : cap.nodes) EXPECT_LE(norm(x - dot(x, u) * u), rc + 1e-12);
    EXPECT_NEAR(sphere_sum(cap, [](const Vec3&) { return 1.0; }),
                2.0 * pi * (1.0 - std::sqrt(1.0 - rc * rc / (0.895 * 0.895))), 1e-12);
}

TEST(BallExit, LiesOnSphere) {
    const Vec3 x{0.3, -0.4, 0.5};
    for (const auto& u : sphere_rule(6, 8).nodes) {
        const double r = ball_exit(x, u, 2.0);
        EXPECT_GT(r, 0.0);
        EXPECT_NEAR(norm(x + r * u), 2.0, 1e-13);
    }
}

TEST(IntegrateBallSingular, BallVolume) {
    QuadratureConfig cfg;
    const double v = integrate_ball_singular([](const Vec3&) { return 1.0; }, Vec3{}, 2.0, cfg);
    EXPECT_NEAR(v, 4.0 * pi * 8.0 / 3.0, 1e-8);
}

TEST(IntegrateBallSingular, InverseSquareMatchesClosedForm) {
    // int_{B_R} |y - x|^-2 dy = int_{S^2} rho_max(u) du = 2 pi (R + (c^2 / a) asinh(a / c)), c^2 = R^2 - a^2
    const double a = 0.3, R = 2.0, c = std::sqrt(R * R - a * a);
    const double ref = 2.0 * pi * (R + c * c / a * std::asinh(a / c));
    QuadratureConfig cfg;
    const Vec3 x{a, 0.0, 0.0};
    const double v = integrate_ball_singular([&](const Vec3& y) { return 1.0 / norm2(y - x); }, x, R, cfg);
    EXPECT_NEAR(v, ref, 1e-8 * ref);
    QuadratureConfig fine = cfg;
    fine.n_rho = 128;
    fine.sphere_nodes = 1064;
    const double vf = integrate_ball_singular([&](const Vec3& y) { return 1.0 / norm2(y - x); }, x, R, fine);
    EXPECT_NEAR(v, vf, 1e-8 * ref);
}

TEST(IntegrateBallSingular, SegmentSplittingIntegratesIndicatorExactly) {
    QuadratureConfig cfg;
    const StarDomain inner = StarDomain::ball(1.5);
    const double v = integrate_ball_singular([&](const Vec3& y) { return inner.contains(y) ? 1.0 : 0.0; }, Vec3{}, 2.1,
                                             cfg, &inner);
    EXPECT_NEAR(v, 4.0 * pi * 1.5 * 1.5 * 1.5 / 3.0, 1e-8);
    const Vec3 off{0.4, -0.3, 0.2};
    const double w = integrate_ball_singular([&](const Vec3& y) { return inner.contains(y) ? 1.0 : 0.0; }, off, 2.1,
                                             cfg, &inner);
    EXPECT_NEAR(w, 4.0 * pi * 1.5 * 1.5 * 1.5 / 3.0, 1e-6);
}

TEST(IntegrateBallSingular, RejectsPointOutsideBall) {
    QuadratureConfig cfg;
    EXPECT_THROW(integrate_ball_singular([](const Vec3&) { return 1.0; }, Vec3{3, 0, 0}, 2.0, cfg), std::domain_error);
}

TEST(IntegrateBallSingular, Deterministic) {
    QuadratureConfig cfg;
    const Vec3 x{0.1, 0.2, -0.3};
    auto f = [](const Vec3& y) { return std::sin(y.x) * std::exp(y.z); };
    EXPECT_EQ(integrate_ball_singular(f, x, 2.0, cfg), integrate_ball_singular(f, x, 2.0, cfg));
}

TEST(RayPieces, SplitsAtCrossingsAndFlagsInside) {
    const StarDomain d = StarDomain::ball(1.0);
    std::vector<RayPiece> pieces;
    ray_pieces(&d, Vec3{-2, 0, 0}, Vec3{1, 0, 0}, 4.0, NoBreaks{}, pieces);
    ASSERT_EQ(pieces.size(), 3u);
    EXPECT_FALSE(pieces[0].inside);
    EXPECT_TRUE(pieces[1].inside);
    EXPECT_FALSE(pieces[2].inside);
    EXPECT_NEAR(pieces[1].a, 1.0, 1e-14);
    EXPECT_NEAR(pieces[1].b, 3.0, 1e-14);
    ray_pieces(&d, Vec3{-0.5, 0, 0}, Vec3{1, 0, 0}, 1.0, PlaneBreaks{Vec3{-0.5, 0, 0}, {0}}, pieces);
    ASSERT_EQ(pieces.size(), 2u);
    EXPECT_NEAR(pieces[0].b, 0.5, 1e-15);
}

TEST(IntegrateSphereSurface, Examples) {
    const double R = 2.1;
    EXPECT_NEAR(integrate_sphere_surface([](const Vec3&, const Vec3&) { return 1.0; }, R, 590), 4.0 * pi * R * R, 1e-10);
    EXPECT_NEAR(integrate_sphere_surface([](const Vec3&, const Vec3& nu) { return nu.x; }, R, 590), 0.0, 1e-10);
    EXPECT_THROW(integrate_sphere_surface([](const Vec3&, const Vec3&) { return 1.0; }, -1.0, 590), std::invalid_argument);
}

TEST(IntegrateSphereSurface, KernelTermRefinementStable) {
    const Mollifier m(0.9);
    const Vec3 x{0.2, -0.1, 0.3};
    const double R = 2.1;
    auto f = [&](const Vec3& y, const Vec3& nu) { return kernel_N(x, y, m, 64)[0] * nu[1]; };
    const double coarse = integrate_sphere_surface(f, R, 590);
    const double fine = integrate_sphere_surface(f, R, sphere_rule(96, 128));
    EXPECT_TRUE(std::isfinite(coarse));
    EXPECT_NEAR(coarse, fine, 1e-7);
}

TEST(QuadratureConfig, Validation) {
    QuadratureConfig c;
    EXPECT_NO_THROW(c.validate());
    c.R_factor = 1.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.n_alpha = 1;
    EXPECT_THROW(QuadratureRules{c}, std::invalid_argument);
}

TEST(QuadratureRules, DirectionsRestrictToKernelCone) {
    QuadratureConfig c;
    const QuadratureRules rules(c);
    const Vec3 x{1.5, 0.0, 0.0};
    const SphereRule dirs = rules.directions_for(x, 0.9);
    EXPECT_EQ(dirs.size(), 266);
    for (const auto& u : dirs.nodes) EXPECT_GE(dot(u, unit_axis(0)), std::sqrt(1.0 - 0.36) - 1e-14);
    EXPECT_EQ(rules.directions_for(Vec3{0.5, 0, 0}, 0.9).nodes, rules.sphere.nodes);
    c.cap_adaptive = false;
    EXPECT_EQ(QuadratureRules(c).directions_for(x, 0.9).nodes, rules.sphere.nodes);
}
