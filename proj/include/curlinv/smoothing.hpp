#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "curlinv/gauss_legendre.hpp"
#include "curlinv/vec.hpp"

namespace curlinv {

/// Radial bump c * exp(-1 / (1 - |x/r|^2)) supported in B(0, r), normalized to unit mass.
class Mollifier {
public:
    explicit Mollifier(double support_radius = 0.9) : r_(support_radius) {
        if (!(r_ > 0.0 && r_ < 1.0)) throw std::invalid_argument("mollifier support radius must lie in (0, 1)");
        c_ = 1.0 / unit_mass(r_);
    }

    /// Same bump with an explicit normalization constant.
    Mollifier(double support_radius, double c_psi) : Mollifier(support_radius) { c_ = c_psi; }

    double support_radius() const { return r_; }
    double c_psi() const { return c_; }

    double operator()(const Vec3& x) const {
        const double q = norm2(x) / (r_ * r_);
        if (q >= 1.0) return 0.0;
        return c_ * std::exp(-1.0 / (1.0 - q));
    }

    Vec3 gradient(const Vec3& x) const {
        const double q = norm2(x) / (r_ * r_);
        if (q >= 1.0) return {};
        const double s = 1.0 / (1.0 - q);
        const double v = c_ * std::exp(-s);
        return x * (-2.0 * v * s * s / (r_ * r_));
    }

    /// psi and its gradient in one pass.
    double value_and_gradient(const Vec3& x, Vec3& g) const {
        const double q = norm2(x) / (r_ * r_);
        if (q >= 1.0) {
            g = {};
            return 0.0;
        }
        const double s = 1.0 / (1.0 - q);
        const double v = c_ * std::exp(-s);
        g = x * (-2.0 * v * s * s / (r_ * r_));
        return v;
    }

private:
    // mass of the unnormalized bump: 4*pi * int_0^r exp(-1/(1-(s/r)^2)) s^2 ds
    static double unit_mass(double r) {
        constexpr int panels = 4;
        double m = 0.0;
        for (int p = 0; p < panels; ++p) {
            const double a = r * p / panels, b = r * (p + 1) / panels;
            m += integrate_interval(
                [r](double s) {
                    const double q = (s * s) / (r * r);
                    return q >= 1.0 ? 0.0 : std::exp(-1.0 / (1.0 - q)) * s * s;
                },
                a, b, 64);
        }
        return 4.0 * std::numbers::pi * m;
    }

    double r_;
    double c_ = 1.0;
};

inline double psi(const Mollifier& m, const Vec3& x) { return m(x); }
inline Vec3 grad_psi(const Mollifier& m, const Vec3& x) { return m.gradient(x); }

/// Cubic smoothstep cutoff: 0 on [0,1], 1 on [2,inf).
inline double eta(double s) {
    if (s < 0.0) throw std::domain_error("eta is defined for s >= 0");
    if (s <= 1.0) return 0.0;
    if (s >= 2.0) return 1.0;
    const double t = s - 1.0;
    return t * t * (3.0 - 2.0 * t);
}

inline double eta_prime(double s) {
    if (s < 0.0) throw std::domain_error("eta is defined for s >= 0");
    if (s <= 1.0 || s >= 2.0) return 0.0;
    const double t = s - 1.0;
    return 6.0 * t * (1.0 - t);
}

}  // namespace curlinv
