/// @file hyperbolic.hpp
/// @brief Semi-discrete DG residual for the compressible Euler subproblem,
/// SSP-RK3 stepping with stage-wise limiting, and the adaptive step-halving
/// loop that keeps every stage's cell averages admissible.

#ifndef CNSDG_HYPERBOLIC_HPP
#define CNSDG_HYPERBOLIC_HPP

#include "cnsdg/field.hpp"
#include "cnsdg/limiter.hpp"

#include <functional>

namespace cnsdg {

/// Optional source collocated at the basis nodes (manufactured solutions).
using HyperbolicForcing = std::function<std::array<double, 4>(const Vec2&, double)>;

struct HyperbolicContext {
    const Mesh* mesh = nullptr;
    const ElementTables* tables = nullptr;
    GasParams gas;
    HyperbolicForcing forcing; ///< empty for physical scenarios
};

/// dU/dt nodal values of the DG scheme: volume term on tensor Gauss points
/// minus Lax-Friedrichs surface term on face Gauss points, divided by the
/// diagonal Gauss-Lobatto mass. Ghost states realize the boundary tags at
/// time t.
void dg_residual(const HyperbolicContext& ctx, const DGField& U, double t, DGField& R);

/// max over faces and face quadrature points of |u.n| + sqrt(gamma p / rho).
double max_face_wave_speed(const HyperbolicContext& ctx, const DGField& U, double t);

struct StageReport {
    bool accepted = false;
    int halvings = 0;
    double dt_used = 0.0;
    double min_rho = 0.0;   ///< over check points before final-stage limiting
    double min_rho_e = 0.0; ///< over check points before final-stage limiting
};

/// One SSP-RK3 step of Algorithm H: any stage whose cell averages leave
/// G^eps restarts the whole step from U with dt halved. Accepted stages are
/// limited on S_H; the final stage also on the nodal set S_P when
/// final_stage_includes_nodes is set. Throws MaxHalvingsError.
StageReport ssp_rk3_adaptive(const HyperbolicContext& ctx, DGField& U, double dt_target,
                             double t, double eps, bool final_stage_includes_nodes,
                             int max_halvings = 40);

struct AdvanceReport {
    int substeps = 0;
    int halvings = 0;
};

/// Chains SSP-RK3 substeps from t_from to t_to; each substep takes the
/// minimum of dt_trial and the remaining interval, so the last lands on
/// t_to exactly.
AdvanceReport advance_hyperbolic(const HyperbolicContext& ctx, DGField& U, double t_from,
                                 double t_to, double dt_trial, double eps,
                                 bool final_stage_includes_nodes, int max_halvings = 40);

} // namespace cnsdg

#endif
