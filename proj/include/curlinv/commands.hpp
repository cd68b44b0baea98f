#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "curlinv/config.hpp"
#include "curlinv/fields.hpp"
#include "curlinv/io.hpp"
#include "curlinv/operators.hpp"
#include "curlinv/verify.hpp"

namespace curlinv {

enum ExitCode { exit_pass = 0, exit_fail = 1, exit_config = 2, exit_io = 3 };

struct CommandResult {
    int exit_code = exit_pass;
    std::string summary;
    std::vector<std::filesystem::path> files;
};

namespace detail {

inline VectorField field_from(const RunConfig& c) {
    try {
        return registry_get(c.field);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

inline double fd_step(const RunConfig& c, const StarDomain& dom) {
    return c.check_h > 0.0 ? c.check_h : default_fd_step(dom);
}

inline double tol_or(const RunConfig& c, double fallback) { return c.check_tol > 0.0 ? c.check_tol : fallback; }

inline std::vector<Vec3> check_points(const RunConfig& c, const StarDomain& dom, double h) {
    return sample_interior_points(dom, c.check_points, std::max({c.check_margin, h, 1e-3}), c.seed, c.check_plane_gap);
}

inline CommandResult report_result(const RunConfig& c, const std::string& name, const std::vector<CheckReport>& reps) {
    CommandResult r;
    const auto path = std::filesystem::path(c.out_dir) / (name + ".csv");
    write_file(path, [&](std::ostream& os) {
        write_csv_header(os);
        for (const auto& rep : reps) write_csv_rows(os, rep);
    });
    r.files.push_back(path);
    bool pass = true;
    for (const auto& rep : reps) {
        if (!r.summary.empty()) r.summary += '\n';
        r.summary += summary_line(rep);
        pass = pass && rep.pass;
    }
    r.exit_code = pass ? exit_pass : exit_fail;
    return r;
}

}  // namespace detail

/// Rg on the configured grid, written as <out_dir>/solve.csv and <out_dir>/solve.vtk.
inline CommandResult cmd_solve(const RunConfig& c) {
    const CurlInverseOp op = make_operator(c);
    const VectorField g = detail::field_from(c);
    const FieldSampleGrid grid = op.eval_grid(g, c.grid, c.threads);
    const auto dir = std::filesystem::path(c.out_dir);
    CommandResult r;
    write_file(dir / "solve.csv", [&](std::ostream& os) { write_grid_csv(os, grid); });
    write_file(dir / "solve.vtk", [&](std::ostream& os) { write_grid_vtk(os, grid); });
    r.files = {dir / "solve.csv", dir / "solve.vtk"};
    std::size_t inside = 0;
    double vmax = 0.0;
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
        inside += grid.inside[i];
        vmax = std::max(vmax, norm(grid.values[i]));
    }
    r.summary = "solve: nodes=" + std::to_string(grid.values.size()) + " inside=" + std::to_string(inside) +
                " max_norm=" + format_number(vmax);
    return r;
}

inline CommandResult cmd_curl_check(const RunConfig& c) {
    const CurlInverseOp op = make_operator(c);
    const VectorField g = detail::field_from(c);
    const double h = detail::fd_step(c, op.domain());
    const auto pts = detail::check_points(c, op.domain(), h);
    return detail::report_result(c, "curl-check", {curl_check(op, g, pts, h, detail::tol_or(c, 1e-3), c.threads)});
}

inline CommandResult cmd_grad_check(const RunConfig& c) {
    const CurlInverseOp op = make_operator(c);
    const VectorField g = detail::field_from(c);
    const double h = detail::fd_step(c, op.domain());
    const auto pts = detail::check_points(c, op.domain(), h);
    return detail::report_result(c, "grad-check", {grad_check(op, g, pts, h, detail::tol_or(c, 1e-3), c.threads)});
}

inline CommandResult cmd_eps_study(const RunConfig& c) {
    const CurlInverseOp op = make_operator(c);
    const VectorField g = detail::field_from(c);
    EpsStudy s;
    try {
        s = eps_study(op, g, c.eps_x, c.eps_list);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return detail::report_result(c, "eps-study", {eps_report(s)});
}

inline CommandResult cmd_equiv_check(const RunConfig& c) {
    const CurlInverseOp op = make_operator(c);
    const VectorField g = detail::field_from(c);
    const auto pts = detail::check_points(c, op.domain(), 0.0);
    return detail::report_result(c, "equiv-check", {forms_check(op, g, pts, detail::tol_or(c, 1e-6), c.threads)});
}

inline CommandResult cmd_boundary_check(const RunConfig& c) {
    const CurlInverseOp op = make_operator(c);
    const VectorField g = detail::field_from(c);
    return detail::report_result(
        c, "boundary-check", {boundary_check(op, g, c.boundary_points, c.boundary_exterior, c.seed, 0.95, c.threads)});
}

/// FD divergence of B[F] against F for the configured scalar field.
inline CommandResult cmd_div_solve(const RunConfig& c) {
    const CurlInverseOp op = make_operator(c);
    ScalarField F;
    try {
        F = scalar_get(c.scalar, op.domain(), c.quad);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const double h = detail::fd_step(c, op.domain());
    const auto pts = detail::check_points(c, op.domain(), h);
    return detail::report_result(c, "div-solve", {div_check(op, F, pts, h, detail::tol_or(c, 1e-3), c.threads)});
}

/// Sampled modulus of continuity and Dini integral; passes when the verdict matches the declared smoothness.
inline CommandResult cmd_dini(const RunConfig& c) {
    StarDomain dom = StarDomain::ball(1.0);
    try {
        dom = parse_domain(c.domain);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const VectorField g = detail::field_from(c);
    if (!(c.dini_rho_min > 0.0 && c.dini_rho_min < dom.diameter())) throw ConfigError("dini.rho_min out of range");
    ModulusTable t = modulus_of_continuity(g.eval, dom, c.dini_pairs, log_bins(c.dini_rho_min, dom.diameter(), c.dini_per_decade),
                                           c.seed);
    const DiniResult d = dini_integral(t, dom.diameter());
    t.dini_integral = d.value;
    t.diverging = d.diverging;

    CheckReport rep;
    rep.name = "dini";
    for (std::size_t b = 0; b < t.radii.size(); ++b)
        rep.rows.push_back({"modulus", static_cast<int>(b), 0, t.omega[b], t.radii[b], 0.0, 0.0, true});
    for (std::size_t k = 0; k < d.values.size(); ++k)
        rep.rows.push_back({"dini_integral", static_cast<int>(k), 0, d.values[k], d.rho_min[k], 0.0, 0.0, true});
    rep.points = static_cast<int>(t.radii.size());
    rep.stats["slope"] = modulus_slope(t);
    rep.stats["dini_integral"] = d.value;
    rep.stats["diverging"] = d.diverging;
    rep.pass = d.diverging == (g.smoothness == Smoothness::non_dini);
    CommandResult r = detail::report_result(c, "dini", {rep});
    r.summary += std::string("\ndiverging: ") + (d.diverging ? "true" : "false");
    return r;
}

inline CommandResult cmd_validate_domain(const RunConfig& c) {
    StarDomain dom = StarDomain::ball(1.0);
    try {
        dom = parse_domain(c.domain);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const StarShapeReport s = validate_star_shape(dom, c.validate_samples, c.seed);
    CheckReport rep;
    rep.name = "validate-domain";
    rep.points = s.samples;
    for (std::size_t k = 0; k < s.witnesses.size(); ++k)
        for (int e = 0; e < 2; ++e) {
            const Vec3& p = e == 0 ? s.witnesses[k].first : s.witnesses[k].second;
            for (int i = 0; i < 3; ++i)
                rep.rows.push_back({e == 0 ? "witness_b" : "witness_z", static_cast<int>(k), i, p[i], 0.0, 0.0, 0.0, false});
        }
    rep.stats["violations"] = s.violations;
    rep.stats["circumradius"] = dom.circumradius();
    rep.stats["diameter"] = dom.diameter();
    rep.pass = s.violations == 0;
    return detail::report_result(c, "validate-domain", {rep});
}

inline const std::map<std::string, std::function<CommandResult(const RunConfig&)>>& command_table() {
    static const std::map<std::string, std::function<CommandResult(const RunConfig&)>> t{
        {"solve", cmd_solve},
        {"curl-check", cmd_curl_check},
        {"grad-check", cmd_grad_check},
        {"eps-study", cmd_eps_study},
        {"equiv-check", cmd_equiv_check},
        {"boundary-check", cmd_boundary_check},
        {"div-solve", cmd_div_solve},
        {"dini", cmd_dini},
        {"validate-domain", cmd_validate_domain},
    };
    return t;
}

/// Runs a command and maps exceptions to exit codes; messages go to `err`.
inline CommandResult run_command(const std::string& name, const RunConfig& c, std::ostream& err) {
    const auto& t = command_table();
    const auto it = t.find(name);
    if (it == t.end()) {
        err << "error: unknown command '" << name << "'\n";
        return {exit_config, {}, {}};
    }
    try {
        return it->second(c);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return {exit_config, {}, {}};
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return {exit_io, {}, {}};
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return {exit_config, {}, {}};
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return {exit_io, {}, {}};
    }
}

}  // namespace curlinv
