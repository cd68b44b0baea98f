#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "curlinv/fields.hpp"
#include "curlinv/geometry.hpp"
#include "curlinv/operators.hpp"
#include "curlinv/parallel.hpp"
#include "curlinv/vec.hpp"

namespace curlinv {

struct CheckRow {
    std::string test;
    int point = 0;
    int component = 0;
    double value = 0.0;
    double reference = 0.0;
    double abs_err = 0.0;
    double rel_err = 0.0;
    bool pass = true;
};

/// Which error the tolerance is compared against.
enum class Metric { abs, rel };

struct CheckReport {
    std::string name;
    int points = 0;
    double max_abs_err = 0.0;
    double max_rel_err = 0.0;
    double tolerance = 0.0;
    Metric metric = Metric::abs;
    bool pass = true;
    CheckRow worst;
    std::vector<CheckRow> rows;
    std::map<std::string, double> stats;

    double max_error() const { return metric == Metric::abs ? max_abs_err : max_rel_err; }

    /// Appends a row; its pass flag is set from the report tolerance.
    void add(CheckRow r) {
        const double e = metric == Metric::abs ? r.abs_err : r.rel_err;
        r.pass = e <= tolerance;
        if (rows.empty() || e > max_error() || std::isnan(e)) worst = r;
        max_abs_err = std::max(max_abs_err, r.abs_err);
        max_rel_err = std::max(max_rel_err, r.rel_err);
        if (std::isnan(r.abs_err) || std::isnan(r.rel_err)) max_abs_err = max_rel_err = NAN;
        rows.push_back(std::move(r));
    }

    void finish() { pass = !std::isnan(max_error()) && max_error() <= tolerance; }
};

// ---------------------------------------------------------------- finite differences

template <class V>
Mat3 fd_jacobian(V&& v, const Vec3& x, double h) {
    if (!(h > 0)) throw std::invalid_argument("fd step must be positive");
    Mat3 J;
    for (int m = 0; m < 3; ++m) {
        const Vec3 e = h * unit_axis(m);
        const Vec3 d = (v(x + e) - v(x - e)) / (2.0 * h);
        for (int k = 0; k < 3; ++k) J(k, m) = d[k];
    }
    return J;
}

template <class V>
Vec3 fd_curl(V&& v, const Vec3& x, double h) {
    return CurlInverseOp::curl_from_jacobian(fd_jacobian(std::forward<V>(v), x, h));
}

template <class V>
double fd_div(V&& v, const Vec3& x, double h) {
    const Mat3 J = fd_jacobian(std::forward<V>(v), x, h);
    return J(0, 0) + J(1, 1) + J(2, 2);
}

// ---------------------------------------------------------------- sampling

/// n points uniform in Omega with distance_to_boundary >= margin and |x_k| >= plane_gap for every k.
inline std::vector<Vec3> sample_interior_points(const StarDomain& dom, int n, double margin, std::uint64_t seed,
                                                double plane_gap = 0.0) {
    std::mt19937_64 rng(seed);
    std::vector<Vec3> pts;
    for (int tries = 0; static_cast<int>(pts.size()) < n; ++tries) {
        if (tries > 1000000) throw std::runtime_error("could not place interior sample points");
        const Vec3 x = sample_in_domain(dom, rng);
        if (dom.distance_to_boundary(x) < margin) continue;
        if (plane_gap > 0.0 && std::min({std::abs(x.x), std::abs(x.y), std::abs(x.z)}) < plane_gap) continue;
        pts.push_back(x);
    }
    return pts;
}

/// max |g| over random domain points (an estimate of the sup norm from below).
inline double sup_norm(const std::function<Vec3(const Vec3&)>& g, const StarDomain& dom, int n = 4096,
                       std::uint64_t seed = 1) {
    std::mt19937_64 rng(seed);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s = std::max(s, norm(g(sample_in_domain(dom, rng))));
    return s;
}

inline double sup_norm(const std::function<double(const Vec3&)>& F, const StarDomain& dom, int n = 4096,
                       std::uint64_t seed = 1) {
    return sup_norm([&](const Vec3& x) { return Vec3{F(x), 0.0, 0.0}; }, dom, n, seed);
}

inline double default_fd_step(const StarDomain& dom) { return 1e-3 * dom.diameter(); }

namespace detail {

inline CheckRow row(std::string test, int point, int comp, double value, double ref, double scale) {
    const double a = std::abs(value - ref);
    return {std::move(test), point, comp, value, ref, a, scale > 0.0 ? a / scale : a, true};
}

/// Runs body(i, rows_i) for each point, possibly concurrently, and appends rows in point order.
template <class Body>
void collect(CheckReport& rep, std::size_t n, unsigned threads, Body&& body) {
    std::vector<std::vector<CheckRow>> per(n);
    parallel_for(n, threads, [&](std::size_t i) { body(static_cast<int>(i), per[i]); });
    for (auto& v : per)
        for (auto& r : v) rep.add(std::move(r));
    rep.points = static_cast<int>(n);
}

}  // namespace detail

// ---------------------------------------------------------------- checks

/// curl Rg against g through FD of Rg ("curl_fd") and through the analytic gradient ("curl_analytic").
/// Absolute tolerance tol * (1 + ||g||_inf).
inline CheckReport curl_check(const CurlInverseOp& op, const VectorField& g, const std::vector<Vec3>& pts, double h,
                              double tol, unsigned threads = 1) {
    const double gsup = sup_norm(g.eval, op.domain());
    CheckReport rep;
    rep.name = "curl-check";
    rep.tolerance = tol * (1.0 + gsup);
    std::vector<double> gap(pts.size(), 0.0), corr(pts.size(), 0.0);
    detail::collect(rep, pts.size(), threads, [&](int i, std::vector<CheckRow>& out) {
        const Vec3& x = pts[i];
        const Vec3 gx = g(x);
        const Vec3 cf = fd_curl([&](const Vec3& y) { return op.curl_inverse(g, y); }, x, h);
        const Vec3 ca = op.curl_of_curl_inverse(g, x);
        for (int k = 0; k < 3; ++k) out.push_back(detail::row("curl_fd", i, k, cf[k], gx[k], 1.0 + gsup));
        for (int k = 0; k < 3; ++k) out.push_back(detail::row("curl_analytic", i, k, ca[k], gx[k], 1.0 + gsup));
        gap[i] = max_abs(cf - ca);
        corr[i] = max_abs(ca - gx - op.boundary_flux(g, x));
    });
    rep.stats["g_sup"] = gsup;
    rep.stats["route_gap"] = *std::max_element(gap.begin(), gap.end());
    rep.stats["flux_corrected_err"] = *std::max_element(corr.begin(), corr.end());
    rep.finish();
    return rep;
}

/// grad_curl_inverse against the FD Jacobian of curl_inverse, entrywise absolute.
inline CheckReport grad_check(const CurlInverseOp& op, const VectorField& g, const std::vector<Vec3>& pts, double h,
                              double tol, unsigned threads = 1) {
    CheckReport rep;
    rep.name = "grad-check";
    rep.tolerance = tol;
    detail::collect(rep, pts.size(), threads, [&](int i, std::vector<CheckRow>& out) {
        const Mat3 F = fd_jacobian([&](const Vec3& y) { return op.curl_inverse(g, y); }, pts[i], h);
        const Mat3 J = op.grad_curl_inverse(g, pts[i]);
        for (int e = 0; e < 9; ++e) out.push_back(detail::row("grad", i, e, J.a[e], F.a[e], 1.0));
    });
    rep.finish();
    return rep;
}

/// FD divergence of BF against F, relative to ||F||_inf.
inline CheckReport div_check(const CurlInverseOp& op, const ScalarField& F, const std::vector<Vec3>& pts, double h,
                             double tol, unsigned threads = 1) {
    const double fsup = sup_norm(F.eval, op.domain());
    CheckReport rep;
    rep.name = "div-solve";
    rep.tolerance = tol;
    rep.metric = Metric::rel;
    op.warn_if_not_mean_zero(F);
    detail::collect(rep, pts.size(), threads, [&](int i, std::vector<CheckRow>& out) {
        const double d = fd_div([&](const Vec3& y) { return op.bogovskii(F, y, false); }, pts[i], h);
        out.push_back(detail::row("div_BF", i, 0, d, F(pts[i]), fsup));
    });
    rep.stats["F_sup"] = fsup;
    rep.finish();
    return rep;
}

/// curl Rg - g - B[div g] per component; the flux-corrected variant is recorded in stats.
inline CheckReport residual_check(const CurlInverseOp& op, const VectorField& g, const std::vector<Vec3>& pts,
                                  double tol, unsigned threads = 1) {
    CheckReport rep;
    rep.name = "residual";
    rep.tolerance = tol;
    std::vector<double> corr(pts.size(), 0.0), mean(pts.size(), 0.0);
    detail::collect(rep, pts.size(), threads, [&](int i, std::vector<CheckRow>& out) {
        const ResidualReport r = op.residual_identity(g, pts[i]);
        const Vec3 res = r.residual();
        for (int k = 0; k < 3; ++k) out.push_back(detail::row("residual", i, k, res[k], 0.0, 1.0));
        corr[i] = max_abs(r.corrected_residual());
        mean[i] = r.div_mean;
    });
    rep.stats["corrected_residual"] = corr.empty() ? 0.0 : *std::max_element(corr.begin(), corr.end());
    rep.stats["div_mean"] = mean.empty() ? 0.0 : mean.front();
    rep.finish();
    return rep;
}

/// Rg at exterior points (must be exactly zero) and at inward offsets 1e-2 and 1e-3 diam along rays from the centre.
/// Passes when every exterior value is zero and |Rg| decreases toward the boundary for >= min_fraction of samples.
inline CheckReport boundary_check(const CurlInverseOp& op, const VectorField& g, int n_points, int n_exterior,
                                  std::uint64_t seed, double min_fraction = 0.95, unsigned threads = 1) {
    const StarDomain& dom = op.domain();
    const Vec3 c = dom.center();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<Vec3> ext, dirs;
    for (int i = 0; i < n_exterior; ++i) {
        const Vec3 u = sample_unit_vector(rng);
        ext.push_back(c + (dom.boundary_radius(u) * (1.0 + 1e-6 + U(rng))) * u);
    }
    for (int i = 0; i < n_points; ++i) dirs.push_back(sample_unit_vector(rng));
    const double d1 = 1e-2 * dom.diameter(), d2 = 1e-3 * dom.diameter();

    CheckReport rep;
    rep.name = "boundary-check";
    rep.tolerance = 0.0;
    detail::collect(rep, ext.size(), threads, [&](int i, std::vector<CheckRow>& out) {
        const Vec3 v = op.curl_inverse(g, ext[i]);
        for (int k = 0; k < 3; ++k) out.push_back(detail::row("exterior", i, k, v[k], 0.0, 1.0));
    });
    const bool exterior_zero = rep.max_abs_err == 0.0;
    std::vector<double> far(dirs.size()), near(dirs.size());
    parallel_for(dirs.size(), threads, [&](std::size_t i) {
        const double r = dom.boundary_radius(dirs[i]);
        far[i] = norm(op.curl_inverse(g, c + (r - d1) * dirs[i]));
        near[i] = norm(op.curl_inverse(g, c + (r - d2) * dirs[i]));
    });
    int decreased = 0;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        const bool ok = near[i] < far[i] || (near[i] == 0.0 && far[i] == 0.0);
        decreased += ok;
        rep.rows.push_back({"offset", static_cast<int>(i), 0, near[i], far[i], std::abs(near[i] - far[i]),
                            far[i] > 0.0 ? near[i] / far[i] : 0.0, ok});
    }
    const double fraction = dirs.empty() ? 1.0 : static_cast<double>(decreased) / dirs.size();
    rep.points = static_cast<int>(ext.size() + dirs.size());
    rep.stats["exterior_max"] = rep.max_abs_err;
    rep.stats["decrease_fraction"] = fraction;
    rep.stats["offset_far_max"] = far.empty() ? 0.0 : *std::max_element(far.begin(), far.end());
    rep.stats["offset_near_max"] = near.empty() ? 0.0 : *std::max_element(near.begin(), near.end());
    rep.pass = exterior_zero && fraction >= min_fraction;
    return rep;
}

struct EpsStudy {
    std::vector<double> eps;
    std::vector<double> error;  // |R^eps g - Rg|
    bool strictly_decreasing = true;
    bool final_quarter = true;  // error.back() <= error.front() / 4
    bool pass() const { return strictly_decreasing && final_quarter; }
};

inline EpsStudy eps_study(const CurlInverseOp& op, const VectorField& g, const Vec3& x, const std::vector<double>& eps) {
    if (eps.empty()) throw std::invalid_argument("eps list is empty");
    for (std::size_t k = 1; k < eps.size(); ++k)
        if (!(eps[k] < eps[k - 1])) throw std::invalid_argument("eps list must be decreasing");
    if (op.domain().contains(x) && !(eps.front() < op.domain().distance_to_boundary(x)))
        throw std::invalid_argument("eps must be smaller than the distance to the boundary");
    EpsStudy s;
    s.eps = eps;
    const Vec3 ref = op.curl_inverse(g, x);
    for (double e : eps) s.error.push_back(norm(op.curl_inverse_eps(g, x, e) - ref));
    for (std::size_t k = 1; k < s.error.size(); ++k)
        if (!(s.error[k] < s.error[k - 1])) s.strictly_decreasing = false;
    s.final_quarter = s.error.back() <= s.error.front() / 4.0;
    return s;
}

inline CheckReport eps_report(const EpsStudy& s) {
    CheckReport rep;
    rep.name = "eps-study";
    for (std::size_t k = 0; k < s.eps.size(); ++k)
        rep.add({"eps=" + format_number(s.eps[k]), static_cast<int>(k), 0, s.error[k], 0.0, s.error[k],
                 s.error.front() > 0 ? s.error[k] / s.error.front() : 0.0, true});
    for (auto& r : rep.rows) r.pass = true;
    rep.points = static_cast<int>(s.eps.size());
    rep.stats["strictly_decreasing"] = s.strictly_decreasing;
    rep.stats["final_over_first"] = s.error.front() > 0 ? s.error.back() / s.error.front() : 0.0;
    rep.pass = s.pass();
    return rep;
}

/// Pairwise agreement of the alpha, xi and r kernel forms, relative to the largest of the three values.
inline CheckReport forms_check(const CurlInverseOp& op, const VectorField& g, const std::vector<Vec3>& pts, double tol,
                               unsigned threads = 1) {
    CheckReport rep;
    rep.name = "equiv-check";
    rep.tolerance = tol;
    rep.metric = Metric::rel;
    detail::collect(rep, pts.size(), threads, [&](int i, std::vector<CheckRow>& out) {
        const Vec3 a = op.curl_inverse_form(g, pts[i], KernelForm::alpha);
        const Vec3 b = op.curl_inverse_form(g, pts[i], KernelForm::xi);
        const Vec3 c = op.curl_inverse_form(g, pts[i], KernelForm::r);
        const double scale = std::max({norm(a), norm(b), norm(c)});
        for (int k = 0; k < 3; ++k) {
            out.push_back(detail::row("xi_vs_alpha", i, k, b[k], a[k], scale));
            out.push_back(detail::row("r_vs_alpha", i, k, c[k], a[k], scale));
            out.push_back(detail::row("r_vs_xi", i, k, c[k], b[k], scale));
        }
    });
    rep.finish();
    return rep;
}

// ---------------------------------------------------------------- output

inline void write_csv_header(std::ostream& os) { os << "test,point,component,value,reference,abs_err,rel_err,pass\n"; }

inline void write_csv_rows(std::ostream& os, const CheckReport& rep) {
    const auto prec = os.precision(17);
    for (const auto& r : rep.rows)
        os << rep.name << ':' << r.test << ',' << r.point << ',' << r.component << ',' << r.value << ','
           << r.reference << ',' << r.abs_err << ',' << r.rel_err << ',' << (r.pass ? 1 : 0) << '\n';
    os.precision(prec);
}

inline std::string summary_line(const CheckReport& rep) {
    std::ostringstream os;
    os << rep.name << ": " << (rep.pass ? "PASS" : "FAIL") << " points=" << rep.points
       << " max_abs_err=" << format_number(rep.max_abs_err) << " max_rel_err=" << format_number(rep.max_rel_err)
       << " tol=" << format_number(rep.tolerance);
    for (const auto& [k, v] : rep.stats) os << ' ' << k << '=' << format_number(v);
    return os.str();
}

}  // namespace curlinv
