/// @file output.hpp
/// @brief Plot-ready file outputs: cell-average CSV, legacy VTK structured
/// points, and the per-step conservation/timestep log.

#ifndef CNSDG_OUTPUT_HPP
#define CNSDG_OUTPUT_HPP

#include "cnsdg/field.hpp"

#include <string>
#include <vector>

namespace cnsdg {

struct LogRow {
    long step = 0;
    double t = 0, dt = 0;
    int halvings = 0, doublings = 0;
    double min_rho = 0, min_rhoe = 0;
    double total_rho = 0, total_mx = 0, total_my = 0, total_E = 0;
};

/// 1D cell averages: header "x,rho,u,p,e", 17 significant digits.
void write_csv_1d(const DGField& U, const GasParams& gas, const std::string& path);

/// 2D cell averages on the bounding lattice: "x,y,rho,p,e,umag";
/// inactive cells carry nan.
void write_csv_2d(const DGField& U, const GasParams& gas, const std::string& path);

/// Legacy VTK structured points with scalar fields rho, p, e, umag at the
/// cell centers; inactive cells carry nan.
void write_vtk_2d(const DGField& U, const GasParams& gas, const std::string& path,
                  const std::string& title);

/// "step,t,dt,halvings,doublings,min_rho,min_rhoe,total_rho,total_mx,total_my,total_E"
void write_log_csv(const std::vector<LogRow>& rows, const std::string& path);

} // namespace cnsdg

#endif
