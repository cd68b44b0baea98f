#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "curlinv/operators.hpp"

using namespace curlinv;

namespace {

const StarDomain ball2 = StarDomain::ball(2.0);

CurlInverseOp quiet_op(QuadratureConfig cfg = {}) {
    CurlInverseOp op(ball2, Mollifier(0.9), cfg);
    op.set_warning_sink([](const std::string&) {});
    return op;
}

// Rg by per-node kernel evaluation over B(0, 2) = Omega, on the fixed (non-adaptive) sphere rule
Vec3 per_node_curl_inverse(const VectorField& g, const Vec3& x, int sphere_nodes) {
    QuadratureConfig c;
    c.sphere_nodes = sphere_nodes;
    c.n_rho = 48;
    const Mollifier m(0.9);
    return integrate_ball_singular([&](const Vec3& y) { return norm2(y - x) > 0 ? cross(g(y), kernel_N(x, y, m, 64)) : Vec3{}; },
                                   x, 2.0, c);
}

Mat3 fd_jacobian_of_R(const CurlInverseOp& op, const VectorField& g, const Vec3& x, double h) {
    Mat3 J;
    for (int m = 0; m < 3; ++m) {
        const Vec3 d = (op.curl_inverse(g, x + h * unit_axis(m)) - op.curl_inverse(g, x - h * unit_axis(m))) / (2 * h);
        for (int k = 0; k < 3; ++k) J(k, m) = d[k];
    }
    return J;
}

}  // namespace

TEST(CurlInverse, RequiresUnitBallInside) {
    EXPECT_THROW(CurlInverseOp(StarDomain::ball(0.95)), std::invalid_argument);
    EXPECT_THROW(CurlInverseOp(StarDomain(Ball{2.0}, Vec3{1.5, 0, 0})), std::invalid_argument);
    EXPECT_NO_THROW(CurlInverseOp(StarDomain::ball(1.0)));
}

TEST(CurlInverse, ZeroOutsideAndForZeroField) {
    const CurlInverseOp op = quiet_op();
    const VectorField g = registry_get("trig");
    for (const Vec3& x : {Vec3{2.0, 0, 0}, Vec3{0, 2.5, 0}, Vec3{1.5, 1.5, 0}, Vec3{0, 0, -2.0000001}})
        EXPECT_EQ(op.curl_inverse(g, x), (Vec3{}));
    EXPECT_EQ(op.curl_inverse(zero_field(), {0.3, 0.1, -0.2}), (Vec3{}));
    EXPECT_EQ(op.curl_inverse_eps(g, {3, 0, 0}, 0.1), (Vec3{}));
    EXPECT_EQ(op.bogovskii(ScalarField{"y1", [](const Vec3& y) { return y.x; }, {}}, {3, 0, 0}), (Vec3{}));
}

TEST(CurlInverse, ConstantFieldMatchesPerNodeOracle) {
    const CurlInverseOp op = quiet_op();
    const VectorField g = registry_get("constant");
    const Vec3 x{0.2, -0.1, 0.3};
    const Vec3 v = op.curl_inverse(g, x);
    const Vec3 ref = per_node_curl_inverse(g, x, 1202);
    EXPECT_LE(norm(v - ref), 1e-8 * norm(ref)) << v << ' ' << ref;
    EXPECT_EQ(v.x, 0.0);  // (1,0,0) x N has no first component
    EXPECT_GT(norm(v), 1e-3);
}

TEST(CurlInverse, SmoothFieldMatchesPerNodeOracle) {
    const CurlInverseOp coarse = quiet_op();
    QuadratureConfig cfg;
    cfg.sphere_nodes = 1202;
    const CurlInverseOp fine = quiet_op(cfg);
    const VectorField g = registry_get("abc");
    for (const Vec3& x : {Vec3{0.2, -0.1, 0.3}, Vec3{-0.6, 0.4, 0.5}, Vec3{1.2, 0.3, -0.4}}) {
        // off the support ball the per-node integrand has a cone edge in u, so the oracle needs many directions
        const Vec3 ref = per_node_curl_inverse(g, x, 16000);
        EXPECT_LE(norm(fine.curl_inverse(g, x) - ref), 1e-7 * (1.0 + norm(ref))) << x;
        EXPECT_LE(norm(coarse.curl_inverse(g, x) - ref), 1e-5 * (1.0 + norm(ref))) << x;
    }
}

TEST(CurlInverse, RefinementStability) {
    const CurlInverseOp base = quiet_op();
    QuadratureConfig cfg;
    cfg.n_rho = 64;
    cfg.sphere_nodes = 532;
    const CurlInverseOp doubled = quiet_op(cfg);
    const VectorField g = registry_get("abc");
    std::mt19937_64 rng(1);
    std::vector<Vec3> xs{{0.0, 0.895, 0.0}, {0.0, 0.85, 0.0}, {0.5, 0.0, 0.7}, {0.0, 0.0, 0.9}};
    for (int k = 0; k < 20; ++k) xs.push_back(1.9 * sample_unit_ball(rng));
    for (const Vec3& x : xs) {
        const Vec3 a = base.curl_inverse(g, x), b = doubled.curl_inverse(g, x);
        EXPECT_LE(norm(a - b), 1e-6 * norm(b)) << x;
    }
}

TEST(CurlInverse, LinearInTheField) {
    const CurlInverseOp op = quiet_op();
    const VectorField a = registry_get("rigid"), b = registry_get("trig");
    const Vec3 x{0.4, -0.3, 0.2};
    const Vec3 lhs = op.curl_inverse(linear_combination(2.5, a, -1.5, b), x);
    const Vec3 rhs = 2.5 * op.curl_inverse(a, x) - 1.5 * op.curl_inverse(b, x);
    EXPECT_LE(norm(lhs - rhs), 1e-12 * (1.0 + norm(rhs)));
}

TEST(CurlInverse, FormsAgree) {
    const CurlInverseOp op = quiet_op();
    const VectorField g = registry_get("rigid");
    const Vec3 x{0.3, 0.5, -0.2};
    const Vec3 a = op.curl_inverse_form(g, x, KernelForm::alpha);
    EXPECT_LE(norm(a - op.curl_inverse(g, x)), 1e-10 * norm(a));
    EXPECT_LE(norm(op.curl_inverse_form(g, x, KernelForm::xi) - a), 1e-6 * norm(a));
    EXPECT_LE(norm(op.curl_inverse_form(g, x, KernelForm::r) - a), 1e-6 * norm(a));
}

TEST(Regularized, ConvergesAsEpsShrinks) {
    const CurlInverseOp op = quiet_op();
    const VectorField g = registry_get("rigid");
    const Vec3 x{0.3, 0, 0};
    const Vec3 ref = op.curl_inverse(g, x);
    double prev = 1e300;
    for (double eps : {0.4, 0.2, 0.1, 0.05, 0.025}) {
        const double e = norm(op.curl_inverse_eps(g, x, eps) - ref);
        EXPECT_LT(e, prev) << eps;
        prev = e;
    }
    EXPECT_LT(prev, 0.1 * norm(op.curl_inverse_eps(g, x, 0.4) - ref));
    // cutoff beyond the diameter of Omega removes everything
    EXPECT_EQ(op.curl_inverse_eps(g, x, 10.0), (Vec3{}));
    EXPECT_THROW(op.curl_inverse_eps(g, x, 0.0), std::invalid_argument);
}

TEST(Bogovskii, DivergenceReproducesMeanZeroData) {
    const CurlInverseOp op = quiet_op();
    const ScalarField F{"y1", [](const Vec3& y) { return y.x; }, {}};
    const double h = 1e-3;
    for (const Vec3& x : {Vec3{0.2, 0.1, 0.0}, Vec3{-0.5, 0.7, 0.3}}) {
        double div = 0.0;
        for (int i = 0; i < 3; ++i)
            div += (op.bogovskii(F, x + h * unit_axis(i), false)[i] - op.bogovskii(F, x - h * unit_axis(i), false)[i]) / (2 * h);
        EXPECT_NEAR(div, F(x), 1e-4) << x;
    }
}

TEST(Bogovskii, MeanDefectWarning) {
    CurlInverseOp op(ball2);
    std::vector<std::string> msgs;
    op.set_warning_sink([&](const std::string& m) { msgs.push_back(m); });
    const ScalarField y1{"y1", [](const Vec3& y) { return y.x; }, {}};
    const ScalarField one{"one", [](const Vec3&) { return 1.0; }, {}};
    EXPECT_FALSE(op.warn_if_not_mean_zero(y1));
    EXPECT_TRUE(op.warn_if_not_mean_zero(one));
    ASSERT_EQ(msgs.size(), 1u);
    EXPECT_NE(msgs[0].find("one"), std::string::npos);
    const auto [defect, threshold] = op.mean_defect(one);
    EXPECT_NEAR(defect, 32.0 * M_PI / 3.0, 1e-9);
    EXPECT_NEAR(threshold, 1e-6 * 32.0 * M_PI / 3.0, 1e-14);
    op.bogovskii(one, {0.1, 0, 0});
    EXPECT_EQ(msgs.size(), 2u);
    op.bogovskii(one, {0.1, 0, 0}, false);
    EXPECT_EQ(msgs.size(), 2u);
}

TEST(Gradient, MatchesFiniteDifferences) {
    const CurlInverseOp op = quiet_op();
    for (const char* name : {"rigid", "trig", "constant"}) {
        const VectorField g = registry_get(name);
        for (const Vec3& x : {Vec3{0.3, -0.2, 0.1}, Vec3{1.1, 0.6, -0.5}}) {
            const Mat3 G = op.grad_curl_inverse(g, x);
            const Mat3 fd = fd_jacobian_of_R(op, g, x, 1e-3);
            EXPECT_LE(max_abs(G - fd), 1e-5 * (1.0 + max_abs(fd))) << name << ' ' << x;
        }
    }
}

TEST(Gradient, TermsAndDomainChecks) {
    const CurlInverseOp op = quiet_op();
    const VectorField g = registry_get("rigid");
    const Vec3 x{0.3, -0.2, 0.1};
    const GradientTerms t = op.gradient_terms(g, x);
    const Mat3 sum = t.difference + t.auxiliary + t.surface;
    EXPECT_EQ(max_abs(sum - t.total()), 0.0);
    // the surface part is nonzero only through the kernel mass reaching dB_R
    EXPECT_TRUE(std::isfinite(max_abs(t.surface)));
    EXPECT_THROW(op.grad_curl_inverse(g, {2.5, 0, 0}), std::domain_error);
    EXPECT_THROW(op.grad_curl_inverse(g, {2.0 - 1e-8, 0, 0}), std::domain_error);
    // the curl read off the gradient matrix
    const Mat3 G = op.grad_curl_inverse(g, x);
    const Vec3 c = CurlInverseOp::curl_from_jacobian(G);
    EXPECT_EQ(c, op.curl_of_curl_inverse(g, x));
    Mat3 J;
    J(0, 1) = 1.0;  // v = (x2, 0, 0): curl = (0, 0, -1)
    EXPECT_EQ(CurlInverseOp::curl_from_jacobian(J), (Vec3{0, 0, -1}));
}

TEST(Curl, RigidRotationIsReproduced) {
    const CurlInverseOp op = quiet_op();
    const VectorField g = registry_get("rigid");
    for (const Vec3& x : {Vec3{0.2, 0.3, -0.1}, Vec3{-0.8, 0.9, 0.6}, Vec3{1.5, -0.4, 0.2}})
        EXPECT_LE(norm(op.curl_of_curl_inverse(g, x) - g(x)), 1e-5) << x;
}

TEST(Curl, BoundaryFluxAccountsForNonTangentialFields) {
    // constant field: div g = 0 but g.n != 0 on the sphere, so curl Rg = g + int (g.n) Ntilde
    const CurlInverseOp op = quiet_op();
    const VectorField g = registry_get("constant");
    const Vec3 x{0.3, 0, 0};
    const ResidualReport r = op.residual_identity(g, x);
    EXPECT_GT(norm(r.residual()), 1e-2);
    EXPECT_LE(norm(r.corrected_residual()), 1e-5);
    EXPECT_EQ(r.bogovskii_div, (Vec3{}));
    EXPECT_LE(norm(r.curl - g(x) - r.boundary_flux), 1e-5);
    // tangential field: no flux
    EXPECT_LE(norm(op.boundary_flux(registry_get("rigid"), x)), 1e-14);
}

TEST(Curl, NonSolenoidalResidual) {
    const CurlInverseOp op = quiet_op();
    const VectorField g = registry_get("nonsol");
    for (const Vec3& x : {Vec3{0.3, 0.2, -0.1}, Vec3{-0.7, 0.1, 0.4}}) {
        const ResidualReport r = op.residual_identity(g, x);
        EXPECT_LE(norm(r.corrected_residual()), 1e-4) << x;
        EXPECT_NEAR(r.div_mean, M_PI * (4.0 * std::sin(2.0) - 8.0 * std::cos(2.0)), 1e-8);
    }
    const VectorField bare{"bare", [](const Vec3& y) { return y; }, {}, {}, Smoothness::smooth, 1.0, {}};
    EXPECT_THROW(op.residual_identity(bare, {0, 0, 0}), std::invalid_argument);
}

TEST(Grid, SerialAndParallelAreBitIdentical) {
    const CurlInverseOp op = quiet_op();
    const VectorField g = registry_get("abc");
    GridSpec spec;
    spec.origin = {-2.1, -2.1, -0.3};
    spec.spacing = {0.7, 0.7, 0.3};
    spec.counts = {7, 7, 3};
    const FieldSampleGrid a = op.eval_grid(g, spec, 1);
    const FieldSampleGrid b = op.eval_grid(g, spec, 3);
    ASSERT_EQ(a.values.size(), spec.size());
    EXPECT_EQ(a.inside, b.inside);
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        EXPECT_EQ(a.values[i], b.values[i]) << i;
        EXPECT_EQ(a.inside[i], ball2.contains(spec.point(i)));
        if (!a.inside[i]) { EXPECT_EQ(a.values[i], (Vec3{})); }
    }
    EXPECT_LE(norm(spec.point(1) - Vec3{-1.4, -2.1, -0.3}), 1e-15);
    EXPECT_LE(norm(spec.point(7) - Vec3{-2.1, -1.4, -0.3}), 1e-15);
}
