#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

#include "curlinv/gauss_legendre.hpp"
#include "curlinv/geometry.hpp"
#include "curlinv/smoothing.hpp"
#include "curlinv/vec.hpp"

namespace curlinv {

/// Parameter interval on which the segment {y + alpha (x - y) : alpha >= 1} lies inside B(0, r_psi).
struct AlphaInterval {
    double lo = 0.0, hi = 0.0;
    bool empty = true;
};

namespace detail {

/// {t >= t_min : |p + t v|^2 < r^2} for v != 0, as [lo, hi] or empty.
inline AlphaInterval ball_chord(const Vec3& p, const Vec3& v, double r, double t_min) {
    AlphaInterval out;
    const double vv = norm2(v);
    const double tc = -dot(p, v) / vv;         // foot of the perpendicular from the origin
    const Vec3 foot = p + tc * v;
    const double gap = r * r - norm2(foot);
    if (gap <= 0.0) return out;
    const double half = std::sqrt(gap / vv);
    const double hi = tc + half;
    if (hi <= t_min) return out;
    out.lo = std::max(t_min, tc - half);
    out.hi = hi;
    out.empty = !(out.hi > out.lo);
    return out;
}

}  // namespace detail

inline AlphaInterval alpha_support(const Vec3& x, const Vec3& y, double r_psi) {
    const Vec3 d = x - y;
    if (norm(d) < 1e-14) throw std::domain_error("kernel evaluated at the singular point x = y");
    return detail::ball_chord(y, d, r_psi, 1.0);
}

/// Kernel values at one pair (x, y); entry (i, m) of gradN is d/dx_m N_i and of aux is the m-th aux kernel, component i.
struct KernelEvaluation {
    Vec3 N;
    Vec3 N_tilde;
    Mat3 gradN;
    Mat3 aux;
};

/// Alpha moments of psi and grad psi on the alpha interval.
struct AlphaMoments {
    double psi_a1 = 0.0;   // int psi alpha(alpha-1)
    double psi_a2 = 0.0;   // int psi alpha^2
    Vec3 dpsi_a21;         // int grad psi alpha^2(alpha-1)
    Vec3 dpsi_a1;          // int grad psi alpha(alpha-1)
};

inline AlphaMoments alpha_moments(const Vec3& x, const Vec3& y, const Mollifier& m, const GaussLegendreRule& rule,
                                  bool with_gradient) {
    AlphaMoments mo;
    const AlphaInterval I = alpha_support(x, y, m.support_radius());
    if (I.empty) return mo;
    const Vec3 d = x - y;
    const double c = 0.5 * (I.lo + I.hi), h = 0.5 * (I.hi - I.lo);
    for (int q = 0; q < rule.size(); ++q) {
        const double a = c + h * rule.nodes[q];
        const double w = h * rule.weights[q];
        const Vec3 z = y + a * d;
        if (with_gradient) {
            Vec3 g;
            const double p = m.value_and_gradient(z, g);
            mo.psi_a1 += w * p * a * (a - 1.0);
            mo.psi_a2 += w * p * a * a;
            mo.dpsi_a21 += g * (w * a * a * (a - 1.0));
            mo.dpsi_a1 += g * (w * a * (a - 1.0));
        } else {
            const double p = m(z);
            mo.psi_a1 += w * p * a * (a - 1.0);
            mo.psi_a2 += w * p * a * a;
        }
    }
    return mo;
}

inline KernelEvaluation evaluate_kernels(const Vec3& x, const Vec3& y, const Mollifier& m, const GaussLegendreRule& rule) {
    const AlphaMoments mo = alpha_moments(x, y, m, rule, true);
    const Vec3 d = x - y;
    KernelEvaluation k;
    k.N = d * mo.psi_a1;
    k.N_tilde = d * mo.psi_a2;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            k.gradN(i, j) = (i == j ? mo.psi_a1 : 0.0) + d[i] * mo.dpsi_a21[j];
            k.aux(i, j) = d[i] * mo.dpsi_a1[j];
        }
    return k;
}

/// N_i(x, y) = (x - y)_i int_1^inf psi(y + alpha (x - y)) alpha (alpha - 1) d alpha.
inline Vec3 kernel_N(const Vec3& x, const Vec3& y, const Mollifier& m, const GaussLegendreRule& rule) {
    return (x - y) * alpha_moments(x, y, m, rule, false).psi_a1;
}
inline Vec3 kernel_N(const Vec3& x, const Vec3& y, const Mollifier& m, int n_alpha) {
    return kernel_N(x, y, m, gauss_legendre(n_alpha));
}

/// Bogovskii kernel: weight alpha^2.
inline Vec3 kernel_N_tilde(const Vec3& x, const Vec3& y, const Mollifier& m, const GaussLegendreRule& rule) {
    return (x - y) * alpha_moments(x, y, m, rule, false).psi_a2;
}
inline Vec3 kernel_N_tilde(const Vec3& x, const Vec3& y, const Mollifier& m, int n_alpha) {
    return kernel_N_tilde(x, y, m, gauss_legendre(n_alpha));
}

/// Entry (i, m) = d/dx_m N_i(x, y), by differentiation under the integral sign.
inline Mat3 grad_kernel_N(const Vec3& x, const Vec3& y, const Mollifier& m, const GaussLegendreRule& rule) {
    return evaluate_kernels(x, y, m, rule).gradN;
}
inline Mat3 grad_kernel_N(const Vec3& x, const Vec3& y, const Mollifier& m, int n_alpha) {
    return grad_kernel_N(x, y, m, gauss_legendre(n_alpha));
}

/// (x - y)_i int psi_m(y + alpha (x - y)) alpha (alpha - 1) d alpha for axis m.
inline Vec3 kernel_aux(const Vec3& x, const Vec3& y, const Mollifier& mol, int axis, const GaussLegendreRule& rule) {
    if (axis < 0 || axis > 2) throw std::invalid_argument("axis must be 0, 1 or 2");
    const AlphaMoments mo = alpha_moments(x, y, mol, rule, true);
    return (x - y) * mo.dpsi_a1[axis];
}
inline Vec3 kernel_aux(const Vec3& x, const Vec3& y, const Mollifier& mol, int axis, int n_alpha) {
    return kernel_aux(x, y, mol, axis, gauss_legendre(n_alpha));
}

enum class KernelForm { alpha, xi, r };

inline std::string_view to_string(KernelForm f) {
    switch (f) {
        case KernelForm::alpha: return "alpha";
        case KernelForm::xi: return "xi";
        case KernelForm::r: return "r";
    }
    return "?";
}

inline KernelForm parse_kernel_form(std::string_view s) {
    if (s == "alpha") return KernelForm::alpha;
    if (s == "xi") return KernelForm::xi;
    if (s == "r") return KernelForm::r;
    throw std::invalid_argument("unknown kernel form '" + std::string(s) + "'");
}

/// N(x, y) through one of three parameterizations of the same line integral,
/// each on its own exact support interval.
inline Vec3 kernel_N_form(const Vec3& x, const Vec3& y, const Mollifier& m, KernelForm form, const GaussLegendreRule& rule) {
    if (form == KernelForm::alpha) return kernel_N(x, y, m, rule);
    const Vec3 d = x - y;
    const double L = norm(d);
    if (L < 1e-14) throw std::domain_error("kernel evaluated at the singular point x = y");
    const Vec3 e = d / L;
    const double rad = m.support_radius();
    double sum = 0.0;
    if (form == KernelForm::xi) {
        // xi = alpha |x - y|, points y + xi e, xi >= |x - y|
        const AlphaInterval I = detail::ball_chord(y, e, rad, L);
        if (I.empty) return {};
        const double c = 0.5 * (I.lo + I.hi), h = 0.5 * (I.hi - I.lo);
        for (int q = 0; q < rule.size(); ++q) {
            const double t = c + h * rule.nodes[q];
            sum += h * rule.weights[q] * m(y + t * e) * t * (t - L);
        }
    } else {
        // r = xi - |x - y|, points x + r e, r >= 0
        const AlphaInterval I = detail::ball_chord(x, e, rad, 0.0);
        if (I.empty) return {};
        const double c = 0.5 * (I.lo + I.hi), h = 0.5 * (I.hi - I.lo);
        for (int q = 0; q < rule.size(); ++q) {
            const double t = c + h * rule.nodes[q];
            sum += h * rule.weights[q] * m(x + t * e) * t * (t + L);
        }
    }
    return d * (sum / (L * L * L));
}
inline Vec3 kernel_N_form(const Vec3& x, const Vec3& y, const Mollifier& m, KernelForm form, int n) {
    return kernel_N_form(x, y, m, form, gauss_legendre(n));
}

/// Moments of psi along the ray {x - s u : s >= 0}.  With y = x + rho u these give
///   rho^2 N       = -u (S2 + rho S1)
///   rho^2 Ntilde  = -u (rho^2 S0 + 2 rho S1 + S2)
///   rho^3 gradN   = delta (rho S1 + S2) - u (x) (rho^2 D1 + 2 rho D2 + D3)
///   rho^2 aux     = -u (x) (rho D1 + D2)
/// where S_k = int psi(x - s u) s^k ds and D_k = int grad psi(x - s u) s^k ds.
struct RayMoments {
    bool empty = true;
    double S0 = 0.0, S1 = 0.0, S2 = 0.0;
    Vec3 D1, D2, D3;

    Vec3 rho2_N(const Vec3& u, double rho) const { return u * -(S2 + rho * S1); }
    Vec3 rho2_N_tilde(const Vec3& u, double rho) const { return u * -(rho * rho * S0 + 2.0 * rho * S1 + S2); }
};

inline RayMoments ray_moments(const Vec3& x, const Vec3& u, const Mollifier& m, const GaussLegendreRule& rule,
                              bool with_gradient) {
    RayMoments mo;
    const AlphaInterval I = detail::ball_chord(x, -u, m.support_radius(), 0.0);
    if (I.empty) return mo;
    mo.empty = false;
    const double c = 0.5 * (I.lo + I.hi), h = 0.5 * (I.hi - I.lo);
    for (int q = 0; q < rule.size(); ++q) {
        const double s = c + h * rule.nodes[q];
        const double w = h * rule.weights[q];
        const Vec3 z = x - s * u;
        if (with_gradient) {
            Vec3 g;
            const double p = m.value_and_gradient(z, g);
            mo.S0 += w * p;
            mo.S1 += w * p * s;
            mo.S2 += w * p * s * s;
            mo.D1 += g * (w * s);
            mo.D2 += g * (w * s * s);
            mo.D3 += g * (w * s * s * s);
        } else {
            const double p = m(z);
            mo.S0 += w * p;
            mo.S1 += w * p * s;
            mo.S2 += w * p * s * s;
        }
    }
    return mo;
}

struct KernelBoundReport {
    double C_emp = 0.0;       // max |N| |x-y|^2
    double M_emp = 0.0;       // max |gradN| |x-y|^3 over pairs with |x-y| in [1e-3, 1e-1]
    Vec3 worst_x, worst_y;
    int pairs = 0;
    int empty_pairs = 0;
};

/// Empirical constants of the kernel bounds |N| <= C |x-y|^-2 and |gradN| <= M |x-y|^-3.
/// Pairs: x uniform in the domain, y = x + t v with v uniform on the sphere and t log-uniform in [1e-4, diam].
inline KernelBoundReport kernel_bound_check(const StarDomain& dom, const Mollifier& m, int n_pairs, std::uint64_t seed,
                                            int n_alpha = 64) {
    if (n_pairs < 1) throw std::invalid_argument("kernel_bound_check needs n_pairs >= 1");
    const auto& rule = gauss_legendre(n_alpha);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double lmin = std::log(1e-4), lmax = std::log(dom.diameter());
    const double gmin = std::log(1e-3), gmax = std::log(1e-1);
    KernelBoundReport rep;
    rep.pairs = n_pairs;
    for (int k = 0; k < n_pairs; ++k) {
        const Vec3 x = sample_in_domain(dom, rng);
        const Vec3 v = sample_unit_vector(rng);
        const double t = std::exp(lmin + (lmax - lmin) * U(rng));
        const Vec3 y = x + t * v;
        const double tg = std::exp(gmin + (gmax - gmin) * U(rng));
        const Vec3 yg = x + tg * v;
        const AlphaInterval I = alpha_support(x, y, m.support_radius());
        if (I.empty) ++rep.empty_pairs;
        const double c = norm(kernel_N(x, y, m, rule)) * t * t;
        if (!std::isfinite(c)) throw std::runtime_error("non-finite kernel value");
        if (c > rep.C_emp) {
            rep.C_emp = c;
            rep.worst_x = x;
            rep.worst_y = y;
        }
        const Mat3 G = grad_kernel_N(x, yg, m, rule);
        double fro = 0.0;
        for (double e : G.a) fro += e * e;
        rep.M_emp = std::max(rep.M_emp, std::sqrt(fro) * tg * tg * tg);
    }
    return rep;
}

}  // namespace curlinv
