#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "curlinv/geometry.hpp"
#include "curlinv/operators.hpp"
#include "curlinv/quadrature.hpp"

namespace curlinv {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Everything a command needs; keys mirror the INI file (`section.key`).
struct RunConfig {
    std::string domain = "ball:R0=2";
    std::string field = "rigid";
    std::string scalar = "y1";
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string out_dir = "out";

    QuadratureConfig quad;
    double psi_support_radius = 0.9;
    GridSpec grid;

    int check_points = 20;
    double check_margin = 0.1;
    double check_h = 0.0;  // 0 selects 1e-3 * diam
    double check_tol = 0.0;  // 0 selects the command default
    double check_plane_gap = 0.0;

    std::vector<double> eps_list{0.4, 0.2, 0.1, 0.05};
    Vec3 eps_x{0.3, 0.0, 0.0};

    int boundary_points = 100;
    int boundary_exterior = 200;

    int dini_pairs = 2000;
    int dini_per_decade = 4;
    double dini_rho_min = 1e-4;

    int validate_samples = 1000;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

inline std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    for (const auto& p : split(s, ',')) out.push_back(parse_double(p));
    return out;
}

inline Vec3 parse_vec3(const std::string& s) {
    const auto v = parse_list(s);
    if (v.size() != 3) throw std::invalid_argument("expected three comma-separated numbers: '" + s + "'");
    return {v[0], v[1], v[2]};
}

inline long long parse_integer(const std::string& s) {
    const std::string t = trim(s);
    long long v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw std::invalid_argument("not an integer: '" + t + "'");
    return v;
}

inline bool parse_bool(const std::string& s) {
    const std::string t = trim(s);
    if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
    if (t == "0" || t == "false" || t == "no" || t == "off") return false;
    throw std::invalid_argument("not a boolean: '" + t + "'");
}

inline std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v[i]);
    return s;
}

inline std::string join(const Vec3& v) { return join(std::vector<double>{v.x, v.y, v.z}); }

struct KeyAccess {
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

template <class T>
KeyAccess int_key(T RunConfig::*p, long long lo) {
    return {[p, lo](RunConfig& c, const std::string& v) {
                const long long n = parse_integer(v);
                if (n < lo) throw std::invalid_argument("value must be >= " + std::to_string(lo));
                c.*p = static_cast<T>(n);
            },
            [p](const RunConfig& c) { return std::to_string(c.*p); }};
}

inline KeyAccess real_key(double RunConfig::*p) {
    return {[p](RunConfig& c, const std::string& v) { c.*p = parse_double(v); },
            [p](const RunConfig& c) { return format_number(c.*p); }};
}

inline KeyAccess string_key(std::string RunConfig::*p) {
    return {[p](RunConfig& c, const std::string& v) { c.*p = trim(v); }, [p](const RunConfig& c) { return c.*p; }};
}

inline const std::map<std::string, KeyAccess>& key_table() {
    static const std::map<std::string, KeyAccess> t = [] {
        std::map<std::string, KeyAccess> m;
        m["domain"] = string_key(&RunConfig::domain);
        m["field"] = string_key(&RunConfig::field);
        m["scalar"] = string_key(&RunConfig::scalar);
        m["seed"] = {[](RunConfig& c, const std::string& v) {
                         const long long n = parse_integer(v);
                         if (n < 0) throw std::invalid_argument("seed must be non-negative");
                         c.seed = static_cast<std::uint64_t>(n);
                     },
                     [](const RunConfig& c) { return std::to_string(c.seed); }};
        m["threads"] = int_key(&RunConfig::threads, 1);
        m["out_dir"] = string_key(&RunConfig::out_dir);
        m["quad.n_alpha"] = {[](RunConfig& c, const std::string& v) { c.quad.n_alpha = static_cast<int>(parse_integer(v)); },
                             [](const RunConfig& c) { return std::to_string(c.quad.n_alpha); }};
        m["quad.n_rho"] = {[](RunConfig& c, const std::string& v) { c.quad.n_rho = static_cast<int>(parse_integer(v)); },
                           [](const RunConfig& c) { return std::to_string(c.quad.n_rho); }};
        m["quad.sphere_nodes"] = {[](RunConfig& c, const std::string& v) { c.quad.sphere_nodes = static_cast<int>(parse_integer(v)); },
                                  [](const RunConfig& c) { return std::to_string(c.quad.sphere_nodes); }};
        m["quad.n_surface"] = {[](RunConfig& c, const std::string& v) { c.quad.n_surface = static_cast<int>(parse_integer(v)); },
                               [](const RunConfig& c) { return std::to_string(c.quad.n_surface); }};
        m["quad.R_factor"] = {[](RunConfig& c, const std::string& v) { c.quad.R_factor = parse_double(v); },
                              [](const RunConfig& c) { return format_number(c.quad.R_factor); }};
        m["quad.cap_adaptive"] = {[](RunConfig& c, const std::string& v) { c.quad.cap_adaptive = parse_bool(v); },
                                  [](const RunConfig& c) { return std::string(c.quad.cap_adaptive ? "true" : "false"); }};
        m["quad.surface_on_rays"] = {[](RunConfig& c, const std::string& v) { c.quad.surface_on_rays = parse_bool(v); },
                                     [](const RunConfig& c) { return std::string(c.quad.surface_on_rays ? "true" : "false"); }};
        m["psi.support_radius"] = real_key(&RunConfig::psi_support_radius);
        m["grid.origin"] = {[](RunConfig& c, const std::string& v) { c.grid.origin = parse_vec3(v); },
                            [](const RunConfig& c) { return join(c.grid.origin); }};
        m["grid.spacing"] = {[](RunConfig& c, const std::string& v) { c.grid.spacing = parse_vec3(v); },
                             [](const RunConfig& c) { return join(c.grid.spacing); }};
        m["grid.counts"] = {[](RunConfig& c, const std::string& v) {
                                const auto parts = split(v, ',');
                                if (parts.size() != 3) throw std::invalid_argument("grid.counts needs three integers");
                                for (int k = 0; k < 3; ++k) {
                                    const long long n = parse_integer(parts[k]);
                                    if (n < 1) throw std::invalid_argument("grid.counts must be >= 1");
                                    c.grid.counts[k] = static_cast<int>(n);
                                }
                            },
                            [](const RunConfig& c) {
                                return std::to_string(c.grid.counts[0]) + "," + std::to_string(c.grid.counts[1]) + "," +
                                       std::to_string(c.grid.counts[2]);
                            }};
        m["check.points"] = int_key(&RunConfig::check_points, 1);
        m["check.margin"] = real_key(&RunConfig::check_margin);
        m["check.h"] = real_key(&RunConfig::check_h);
        m["check.tol"] = real_key(&RunConfig::check_tol);
        m["check.plane_gap"] = real_key(&RunConfig::check_plane_gap);
        m["eps.list"] = {[](RunConfig& c, const std::string& v) { c.eps_list = parse_list(v); },
                         [](const RunConfig& c) { return join(c.eps_list); }};
        m["eps.x"] = {[](RunConfig& c, const std::string& v) { c.eps_x = parse_vec3(v); },
                      [](const RunConfig& c) { return join(c.eps_x); }};
        m["boundary.points"] = int_key(&RunConfig::boundary_points, 1);
        m["boundary.exterior"] = int_key(&RunConfig::boundary_exterior, 0);
        m["dini.pairs"] = int_key(&RunConfig::dini_pairs, 1000);
        m["dini.per_decade"] = int_key(&RunConfig::dini_per_decade, 1);
        m["dini.rho_min"] = real_key(&RunConfig::dini_rho_min);
        m["validate.samples"] = int_key(&RunConfig::validate_samples, 1);
        return m;
    }();
    return t;
}

}  // namespace detail

inline std::vector<std::string> config_keys() {
    std::vector<std::string> k;
    for (const auto& [name, _] : detail::key_table()) k.push_back(name);
    return k;
}

/// Sets one flattened key; throws ConfigError on unknown keys or bad values.
inline void set_config_value(RunConfig& c, const std::string& key, const std::string& value) {
    const auto& t = detail::key_table();
    const auto it = t.find(key);
    if (it == t.end()) throw ConfigError("unknown config key '" + key + "'");
    try {
        it->second.set(c, value);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

inline std::string get_config_value(const RunConfig& c, const std::string& key) {
    const auto& t = detail::key_table();
    const auto it = t.find(key);
    if (it == t.end()) throw ConfigError("unknown config key '" + key + "'");
    return it->second.get(c);
}

/// INI text: `key = value` lines, `[section]` headers prefix following keys with `section.`, `#`/`;` comments.
inline void apply_ini(RunConfig& c, std::istream& in) {
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            section = detail::trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(t.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        set_config_value(c, section.empty() ? key : section + "." + key, detail::trim(t.substr(eq + 1)));
    }
}

inline RunConfig parse_ini(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    apply_ini(c, in);
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    RunConfig c;
    apply_ini(c, in);
    return c;
}

/// Effective configuration as INI; parse_ini(dump_config(c)) == c.
inline std::string dump_config(const RunConfig& c) {
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections;
    for (const auto& [key, acc] : detail::key_table()) {
        const auto dot = key.find('.');
        if (dot == std::string::npos)
            sections[""].emplace_back(key, acc.get(c));
        else
            sections[key.substr(0, dot)].emplace_back(key.substr(dot + 1), acc.get(c));
    }
    std::ostringstream os;
    for (const auto& [name, kv] : sections) {
        if (!name.empty()) os << "\n[" << name << "]\n";
        for (const auto& [k, v] : kv) os << k << " = " << v << '\n';
    }
    return os.str();
}

/// Operator built from the domain, mollifier and quadrature settings; throws ConfigError on invalid values.
inline CurlInverseOp make_operator(const RunConfig& c) {
    try {
        return CurlInverseOp(parse_domain(c.domain), Mollifier(c.psi_support_radius), c.quad);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace curlinv
