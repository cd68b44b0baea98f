#pragma once

#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "curlinv/operators.hpp"

namespace curlinv {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Columns x,y,z,vx,vy,vz,inside; one row per node, i fastest.
inline void write_grid_csv(std::ostream& os, const FieldSampleGrid& g) {
    const auto prec = os.precision(17);
    os << "x,y,z,vx,vy,vz,inside\n";
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        const Vec3 p = g.spec.point(i);
        const Vec3& v = g.values[i];
        os << p.x << ',' << p.y << ',' << p.z << ',' << v.x << ',' << v.y << ',' << v.z << ',' << (g.inside[i] ? 1 : 0)
           << '\n';
    }
    os.precision(prec);
}

/// Legacy ASCII structured-points volume with one VECTORS attribute.
inline void write_grid_vtk(std::ostream& os, const FieldSampleGrid& g, const std::string& name = "Rg") {
    const auto prec = os.precision(17);
    const auto& s = g.spec;
    os << "# vtk DataFile Version 3.0\n"
       << "vector potential " << name << '\n'
       << "ASCII\n"
       << "DATASET STRUCTURED_POINTS\n"
       << "DIMENSIONS " << s.counts[0] << ' ' << s.counts[1] << ' ' << s.counts[2] << '\n'
       << "ORIGIN " << s.origin.x << ' ' << s.origin.y << ' ' << s.origin.z << '\n'
       << "SPACING " << s.spacing.x << ' ' << s.spacing.y << ' ' << s.spacing.z << '\n'
       << "POINT_DATA " << s.size() << '\n'
       << "VECTORS " << name << " double\n";
    for (const Vec3& v : g.values) os << v.x << ' ' << v.y << ' ' << v.z << '\n';
    os.precision(prec);
}

inline std::ofstream open_output(const std::filesystem::path& path) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
    return os;
}

template <class Writer>
void write_file(const std::filesystem::path& path, Writer&& w) {
    std::ofstream os = open_output(path);
    w(os);
    os.flush();
    if (!os) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace curlinv
