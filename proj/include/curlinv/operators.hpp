#pragma once

#include <cmath>
#include <functional>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "curlinv/fields.hpp"
#include "curlinv/geometry.hpp"
#include "curlinv/kernels.hpp"
#include "curlinv/parallel.hpp"
#include "curlinv/quadrature.hpp"
#include "curlinv/smoothing.hpp"
#include "curlinv/vec.hpp"

namespace curlinv {

/// Axis-aligned lattice origin + (i, j, k) * spacing, i fastest.
struct GridSpec {
    Vec3 origin{-2.0, -2.0, -2.0};
    Vec3 spacing{0.5, 0.5, 0.5};
    std::array<int, 3> counts{9, 9, 9};

    std::size_t size() const { return static_cast<std::size_t>(counts[0]) * counts[1] * counts[2]; }
    Vec3 point(std::size_t idx) const {
        const std::size_t i = idx % counts[0], j = (idx / counts[0]) % counts[1], k = idx / (static_cast<std::size_t>(counts[0]) * counts[1]);
        return {origin.x + i * spacing.x, origin.y + j * spacing.y, origin.z + k * spacing.z};
    }
    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct FieldSampleGrid {
    GridSpec spec;
    std::vector<Vec3> values;
    std::vector<bool> inside;
};

/// The three parts of the analytic gradient: entry (k, m) of each is its contribution to d_m (Rg)^k.
struct GradientTerms {
    Mat3 difference;   // -eps_ijk int (g^j(y) - g^j(x)) d_m N_i
    Mat3 auxiliary;    // -eps_ijk g^j(x) int aux
    Mat3 surface;      // +eps_ijk g^j(x) int_{dB_R} N_i nu_m
    Mat3 total() const { return difference + auxiliary + surface; }
};

struct ResidualReport {
    Vec3 curl;              // curl Rg from the analytic gradient
    Vec3 g;                 // g(x)
    Vec3 bogovskii_div;     // B[div g], divergence taken inside Omega
    Vec3 boundary_flux;     // int_{dOmega} (g.n)(y) Ntilde(x, y) dsigma_y
    double div_mean = 0.0;  // int_Omega div g

    /// curl Rg - g - B[div g]
    Vec3 residual() const { return curl - g - bogovskii_div; }
    /// curl Rg - g + B[div(g 1_Omega)]: the boundary flux is the surface part of the divergence of the zero extension.
    Vec3 corrected_residual() const { return curl - g + bogovskii_div - boundary_flux; }
};

/// Curl inverse, its regularization, the Bogovskii operator and the analytic gradient on one domain.
class CurlInverseOp {
public:
    using WarningSink = std::function<void(const std::string&)>;

    CurlInverseOp(StarDomain domain, Mollifier mollifier = Mollifier(0.9), QuadratureConfig cfg = {})
        : domain_(std::move(domain)), mollifier_(mollifier), rules_(cfg), R_(cfg.R_factor * domain_.circumradius()) {
        warn_ = [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };
        if (!domain_.contains({}) || domain_.distance_to_boundary({}) < 1.0 - 1e-12)
            throw std::invalid_argument("domain must contain the closed unit ball about the origin");
    }

    const StarDomain& domain() const { return domain_; }
    const Mollifier& mollifier() const { return mollifier_; }
    const QuadratureConfig& config() const { return rules_.cfg; }
    double R() const { return R_; }
    void set_warning_sink(WarningSink w) { warn_ = std::move(w); }

    /// (Rg)(x) = int_Omega g(y) x N(x, y) dy; zero outside Omega.
    Vec3 curl_inverse(const VectorField& g, const Vec3& x) const {
        if (!domain_.contains(x)) return {};
        return integrate<Vec3>(x, Support::omega, PlaneBreaks{x, g.kink_axes}, [&](const Vec3& u) {
            const RayMoments mo = ray_moments(x, u, mollifier_, *rules_.alpha, false);
            return optional_if(!mo.empty, [&g, mo, u](double rho, const Vec3& y, bool) {
                return cross(g(y), mo.rho2_N(u, rho));
            });
        });
    }

    /// Rg evaluated with per-node kernels in one of the three equivalent parameterizations.
    Vec3 curl_inverse_form(const VectorField& g, const Vec3& x, KernelForm form) const {
        if (!domain_.contains(x)) return {};
        return integrate<Vec3>(x, Support::omega, PlaneBreaks{x, g.kink_axes}, [&](const Vec3& u) {
            const RayMoments mo = ray_moments(x, u, mollifier_, *rules_.alpha, false);
            return optional_if(!mo.empty, [&, x](double rho, const Vec3& y, bool) {
                return cross(g(y), kernel_N_form(x, y, mollifier_, form, *rules_.alpha)) * (rho * rho);
            });
        });
    }

    /// R^eps g: integrand multiplied by eta(|x - y| / eps).
    Vec3 curl_inverse_eps(const VectorField& g, const Vec3& x, double eps) const {
        if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
        if (!domain_.contains(x)) return {};
        auto breaks = [&](const Vec3& u, std::vector<double>& cuts) {
            PlaneBreaks{x, g.kink_axes}(u, cuts);
            cuts.push_back(eps);
            cuts.push_back(2.0 * eps);
        };
        return integrate<Vec3>(x, Support::omega, breaks, [&](const Vec3& u) {
            const RayMoments mo = ray_moments(x, u, mollifier_, *rules_.alpha, false);
            return optional_if(!mo.empty, [&g, mo, u, eps](double rho, const Vec3& y, bool) {
                const double c = eta(rho / eps);
                return c == 0.0 ? Vec3{} : cross(g(y), mo.rho2_N(u, rho)) * c;
            });
        });
    }

    /// (BF)(x) = int_Omega F(y) Ntilde(x, y) dy; zero outside Omega.
    Vec3 bogovskii(const ScalarField& F, const Vec3& x, bool check_mean = true) const {
        if (check_mean) warn_if_not_mean_zero(F);
        if (!domain_.contains(x)) return {};
        return integrate<Vec3>(x, Support::omega, PlaneBreaks{x, F.kink_axes}, [&](const Vec3& u) {
            const RayMoments mo = ray_moments(x, u, mollifier_, *rules_.alpha, false);
            return optional_if(!mo.empty, [&F, mo, u](double rho, const Vec3& y, bool) {
                return mo.rho2_N_tilde(u, rho) * F(y);
            });
        });
    }

    /// |int_Omega F| and the threshold 1e-6 ||F||_inf |Omega| it is compared against.
    std::pair<double, double> mean_defect(const ScalarField& F) const {
        double sup = 0.0;
        const double integral = domain_integral(domain_, [&](const Vec3& y) {
            const double v = F(y);
            sup = std::max(sup, std::abs(v));
            return v;
        }, rules_.cfg);
        const double vol = domain_integral(domain_, [](const Vec3&) { return 1.0; }, rules_.cfg);
        return {std::abs(integral), 1e-6 * sup * vol};
    }

    bool warn_if_not_mean_zero(const ScalarField& F) const {
        const auto [defect, threshold] = mean_defect(F);
        if (defect > threshold) {
            if (warn_) warn_("scalar field '" + F.name + "' is not mean-zero over the domain (|integral| = " +
                             format_number(defect) + ")");
            return true;
        }
        return false;
    }

    GradientTerms gradient_terms(const VectorField& g, const Vec3& x) const {
        if (!domain_.contains(x)) throw std::domain_error("gradient requires a point inside the domain");
        if (domain_.distance_to_boundary(x) < 1e-6) throw std::domain_error("gradient point is within 1e-6 of the boundary");
        const Vec3 gx = g(x);
        GradientTerms t;
        // difference term: rho^2 (g(y) - g(x)) gradN = (g(y) - g(x)) / rho * rho^3 gradN
        t.difference = integrate<Mat3>(x, Support::ball, PlaneBreaks{x, g.kink_axes}, [&](const Vec3& u) {
            const RayMoments mo = ray_moments(x, u, mollifier_, *rules_.alpha, true);
            return optional_if(!mo.empty, [&g, mo, u, gx](double rho, const Vec3& y, bool inside) {
                const Vec3 diff = (inside ? g(y) : Vec3{}) - gx;
                const double a = rho * mo.S1 + mo.S2;
                const Vec3 b = rho * rho * mo.D1 + 2.0 * rho * mo.D2 + mo.D3;
                Mat3 G;  // rho^3 gradN, (i, m)
                for (int i = 0; i < 3; ++i)
                    for (int m = 0; m < 3; ++m) G(i, m) = (i == m ? a : 0.0) - u[i] * b[m];
                return contract(diff / rho, G);
            });
        });
        // auxiliary term: rho^2 aux(i, m) = -u_i (rho D1_m + D2_m), polynomial in rho
        const Mat3 A = integrate<Mat3>(x, Support::ball, NoBreaks{}, [&](const Vec3& u) {
            const RayMoments mo = ray_moments(x, u, mollifier_, *rules_.alpha, true);
            return optional_if(!mo.empty, [mo, u](double rho, const Vec3&, bool) {
                Mat3 K;
                const Vec3 b = rho * mo.D1 + mo.D2;
                for (int i = 0; i < 3; ++i)
                    for (int m = 0; m < 3; ++m) K(i, m) = -u[i] * b[m];
                return K;
            });
        });
        t.auxiliary = contract(gx, A);
        t.surface = contract(gx, surface_term(x)) * -1.0;
        return t;
    }

    /// int_{dB_R} N_i(x, y) nu_m(y) dsigma, entry (i, m).
    Mat3 surface_term(const Vec3& x) const {
        if (rules_.cfg.surface_on_rays) {
            // dsigma = rho_max^2 du / (u.nu) on the ray exits y = x + rho_max u
            const SphereRule dirs = directions(x);
            Mat3 S;
            for (int q = 0; q < dirs.size(); ++q) {
                const Vec3& u = dirs.nodes[q];
                const RayMoments mo = ray_moments(x, u, mollifier_, *rules_.alpha, false);
                if (mo.empty) continue;
                const double rho_max = ball_exit(x, u, R_);
                const Vec3 nu = (x + rho_max * u) / R_;
                const Vec3 N = mo.rho2_N(u, rho_max) * (dirs.weights[q] / dot(u, nu));
                for (int i = 0; i < 3; ++i)
                    for (int m = 0; m < 3; ++m) S(i, m) += N[i] * nu[m];
            }
            return S;
        }
        return integrate_sphere_surface([&](const Vec3& y, const Vec3& nu) {
            const Vec3 N = kernel_N(x, y, mollifier_, *rules_.alpha);
            Mat3 S;
            for (int i = 0; i < 3; ++i)
                for (int m = 0; m < 3; ++m) S(i, m) = N[i] * nu[m];
            return S;
        }, R_, rules_.surface);
    }

    /// Entry (k, m) = d_m (Rg)^k.
    Mat3 grad_curl_inverse(const VectorField& g, const Vec3& x) const { return gradient_terms(g, x).total(); }

    /// (curl Rg)^i = eps_ilm d_l (Rg)^m.
    Vec3 curl_of_curl_inverse(const VectorField& g, const Vec3& x) const {
        return curl_from_jacobian(grad_curl_inverse(g, x));
    }

    static Vec3 curl_from_jacobian(const Mat3& J) {
        return {J(2, 1) - J(1, 2), J(0, 2) - J(2, 0), J(1, 0) - J(0, 1)};
    }

    /// int_{dOmega} (g.n)(y) Ntilde(x, y) dsigma_y, over the boundary crossings of rays from x.
    Vec3 boundary_flux(const VectorField& g, const Vec3& x) const {
        if (!domain_.contains(x)) return {};
        Vec3 total;
        const SphereRule dirs = directions(x);
        for (int q = 0; q < dirs.size(); ++q) {
            const Vec3& u = dirs.nodes[q];
            const RayMoments mo = ray_moments(x, u, mollifier_, *rules_.alpha, false);
            if (mo.empty) continue;
            const double rho_max = ball_exit(x, u, R_);
            const auto segs = domain_.ray_segments(x, u, rho_max).segments;
            Vec3 ray;
            for (const auto& [a, b] : segs)
                for (double rho : {a, b}) {
                    if (rho <= 0.0 || rho >= rho_max) continue;
                    const Vec3 y = x + rho * u;
                    const Vec3 n = domain_.outward_normal(y);
                    const double un = std::abs(dot(u, n));
                    if (un < 1e-12) continue;
                    ray += mo.rho2_N_tilde(u, rho) * (dot(g(y), n) / un);
                }
            total += ray * dirs.weights[q];
        }
        return total;
    }

    /// curl Rg against g and B[div g]; see ResidualReport for the two variants.
    ResidualReport residual_identity(const VectorField& g, const Vec3& x) const {
        if (!g.has_div()) throw std::invalid_argument("residual_identity needs a field with analytic divergence");
        const ScalarField F = divergence_of(g);
        ResidualReport r;
        r.curl = curl_of_curl_inverse(g, x);
        r.g = g(x);
        r.bogovskii_div = bogovskii(F, x, false);
        r.boundary_flux = boundary_flux(g, x);
        r.div_mean = domain_integral(domain_, F.eval, rules_.cfg);
        return r;
    }

    FieldSampleGrid eval_grid(const VectorField& g, const GridSpec& spec, unsigned threads = 1) const {
        FieldSampleGrid out;
        out.spec = spec;
        const std::size_t n = spec.size();
        out.values.assign(n, Vec3{});
        std::vector<char> inside(n, 0);
        parallel_for(n, threads, [&](std::size_t i) {
            const Vec3 x = spec.point(i);
            inside[i] = domain_.contains(x) ? 1 : 0;
            if (inside[i]) out.values[i] = curl_inverse(g, x);
        });
        out.inside.assign(inside.begin(), inside.end());
        return out;
    }

private:
    template <class F>
    static auto optional_if(bool keep, F f) -> std::optional<F> {
        if (!keep) return std::nullopt;
        return std::optional<F>(std::move(f));
    }

    /// V(k, m) = -eps_ijk a_j M(i, m)
    static Mat3 contract(const Vec3& a, const Mat3& M) {
        Mat3 V;
        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    const int e = levi_civita(i, j, k);
                    if (e == 0 || a[j] == 0.0) continue;
                    for (int m = 0; m < 3; ++m) V(k, m) -= e * a[j] * M(i, m);
                }
        return V;
    }

    SphereRule directions(const Vec3& x) const { return rules_.directions_for(x, mollifier_.support_radius()); }

    template <class T, class Breaks, class MakeRay>
    T integrate(const Vec3& x, Support support, const Breaks& breaks, MakeRay&& make_ray) const {
        return integrate_ball_polar<T>(x, R_, directions(x), *rules_.rho, &domain_, support, breaks,
                                       std::forward<MakeRay>(make_ray));
    }

    StarDomain domain_;
    Mollifier mollifier_;
    QuadratureRules rules_;
    double R_;
    WarningSink warn_;
};

}  // namespace curlinv
