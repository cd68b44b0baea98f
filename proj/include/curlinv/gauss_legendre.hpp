#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace curlinv {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    int size() const { return static_cast<int>(nodes.size()); }
};

inline GaussLegendreRule make_gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("Gauss-Legendre order must be >= 1");
    GaussLegendreRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) * z * p2 - j * p3) / (j + 1);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15) break;
        }
        // final derivative at the converged root
        double p1 = 1.0, p2 = 0.0;
        for (int j = 0; j < n; ++j) {
            const double p3 = p2;
            p2 = p1;
            p1 = ((2 * j + 1) * z * p2 - j * p3) / (j + 1);
        }
        pp = n * (z * p1 - p2) / (z * z - 1.0);
        r.nodes[i] = -z;
        r.nodes[n - 1 - i] = z;
        r.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        r.weights[n - 1 - i] = r.weights[i];
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

/// Shared, immutable rule for order n (built once per process).
inline const GaussLegendreRule& gauss_legendre(int n) {
    static std::mutex mtx;
    static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussLegendreRule>(make_gauss_legendre(n));
    return *slot;
}

/// n-node Gauss-Legendre approximation of the integral of f over [a, b].
template <class F>
auto integrate_interval(F&& f, double a, double b, int n) {
    if (!(a < b)) throw std::invalid_argument("integrate_interval requires a < b");
    const auto& r = gauss_legendre(n);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    auto sum = f(c + h * r.nodes[0]) * r.weights[0];
    for (int q = 1; q < r.size(); ++q) sum += f(c + h * r.nodes[q]) * r.weights[q];
    return sum * h;
}

}  // namespace curlinv
