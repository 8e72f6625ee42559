#include "cnsdg/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace cnsdg {

namespace {

std::ofstream open_or_throw(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error("cannot open output file '" + path + "'");
    return f;
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Cell-average primitives; nan row for inactive lattice cells.
struct AvgRow {
    double rho, p, e, umag, u;
};

AvgRow average_row(const DGField& U, const GasParams& gas, int cell) {
    const ConsState a = U.cell_average(cell);
    AvgRow r;
    r.rho = a.rho;
    const double re = rho_e(a);
    r.p = (gas.gamma - 1.0) * re;
    r.e = re / a.rho;
    r.umag = std::sqrt(norm2(a.m)) / a.rho;
    r.u = a.m.x / a.rho;
    return r;
}

} // namespace

void write_csv_1d(const DGField& U, const GasParams& gas, const std::string& path) {
    const Mesh& mesh = U.mesh();
    auto f = open_or_throw(path);
    f << "x,rho,u,p,e\n";
    for (int c = 0; c < mesh.n_cells(); ++c) {
        const AvgRow r = average_row(U, gas, c);
        const Vec2 ctr = mesh.cell_center(c);
        f << g17(ctr.x) << ',' << g17(r.rho) << ',' << g17(r.u) << ',' << g17(r.p) << ','
          << g17(r.e) << '\n';
    }
}

void write_csv_2d(const DGField& U, const GasParams& gas, const std::string& path) {
    const Mesh& mesh = U.mesh();
    auto f = open_or_throw(path);
    f << "x,y,rho,p,e,umag\n";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int iy = 0; iy < mesh.ny; ++iy)
        for (int ix = 0; ix < mesh.nx; ++ix) {
            const int c = mesh.cell_at(ix, iy);
            const double x = mesh.origin.x + (ix + 0.5) * mesh.dx;
            const double y = mesh.origin.y + (iy + 0.5) * mesh.dx;
            AvgRow r{nan, nan, nan, nan, nan};
            if (c >= 0) r = average_row(U, gas, c);
            f << g17(x) << ',' << g17(y) << ',' << g17(r.rho) << ',' << g17(r.p) << ','
              << g17(r.e) << ',' << g17(r.umag) << '\n';
        }
}

void write_vtk_2d(const DGField& U, const GasParams& gas, const std::string& path,
                  const std::string& title) {
    const Mesh& mesh = U.mesh();
    auto f = open_or_throw(path);
    f << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET STRUCTURED_POINTS\n";
    f << "DIMENSIONS " << mesh.nx << ' ' << mesh.ny << " 1\n";
    f << "ORIGIN " << g17(mesh.origin.x + 0.5 * mesh.dx) << ' '
      << g17(mesh.origin.y + 0.5 * mesh.dx) << " 0\n";
    f << "SPACING " << g17(mesh.dx) << ' ' << g17(mesh.dx) << " 1\n";
    f << "POINT_DATA " << mesh.nx * mesh.ny << '\n';

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<AvgRow> rows(static_cast<size_t>(mesh.nx) * mesh.ny,
                             AvgRow{nan, nan, nan, nan, nan});
    for (int iy = 0; iy < mesh.ny; ++iy)
        for (int ix = 0; ix < mesh.nx; ++ix) {
            const int c = mesh.cell_at(ix, iy);
            if (c >= 0) rows[static_cast<size_t>(iy) * mesh.nx + ix] = average_row(U, gas, c);
        }
    auto scalars = [&](const char* name, auto pick) {
        f << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (const AvgRow& r : rows) f << g17(pick(r)) << '\n';
    };
    scalars("rho", [](const AvgRow& r) { return r.rho; });
    scalars("p", [](const AvgRow& r) { return r.p; });
    scalars("e", [](const AvgRow& r) { return r.e; });
    scalars("umag", [](const AvgRow& r) { return r.umag; });
}

void write_log_csv(const std::vector<LogRow>& rows, const std::string& path) {
    auto f = open_or_throw(path);
    f << "step,t,dt,halvings,doublings,min_rho,min_rhoe,total_rho,total_mx,total_my,total_E\n";
    for (const LogRow& r : rows)
        f << r.step << ',' << g17(r.t) << ',' << g17(r.dt) << ',' << r.halvings << ','
          << r.doublings << ',' << g17(r.min_rho) << ',' << g17(r.min_rhoe) << ','
          << g17(r.total_rho) << ',' << g17(r.total_mx) << ',' << g17(r.total_my) << ','
          << g17(r.total_E) << '\n';
}

} // namespace cnsdg
