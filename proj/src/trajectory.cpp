#include "chaosbench/trajectory.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include "chaosbench/errors.hpp"

namespace chaos {

Trajectory Trajectory::slice(Eigen::Index first, Eigen::Index count) const {
    if (first < 0 || count < 0 || first + count > n_steps())
        throw InvalidInputError("trajectory slice out of range");
    Trajectory out;
    out.t0 = time(first);
    out.dt = dt;
    out.data = data.middleRows(first, count);
    return out;
}

std::string format_double(double value) {
    // 17 significant digits round-trip any IEEE double.
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void write_csv(const Trajectory& traj, std::ostream& out) {
    const Eigen::Index d = traj.dim();
    out << 't';
    if (d == 3) {
        out << ",x,y,z";
    } else {
        for (Eigen::Index j = 0; j < d; ++j) out << ",x" << j;
    }
    out << '\n';
    for (Eigen::Index i = 0; i < traj.n_steps(); ++i) {
        out << format_double(traj.time(i));
        for (Eigen::Index j = 0; j < d; ++j) out << ',' << format_double(traj.data(i, j));
        out << '\n';
    }
}

void write_csv(const Trajectory& traj, const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    write_csv(traj, f);
    if (!f) throw IoError("failed writing " + path.string());
}

}  // namespace chaos
