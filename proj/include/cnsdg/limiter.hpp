/// @file limiter.hpp
/// @brief Two-stage positivity-preserving limiter: affine scaling of the cell
/// polynomial toward its admissible average, first for density, then for
/// internal energy, leaving every cell average unchanged.

#ifndef CNSDG_LIMITER_HPP
#define CNSDG_LIMITER_HPP

#include "cnsdg/field.hpp"

#include <span>

namespace cnsdg {

struct LimitResult {
    double theta_rho = 1.0;
    double theta_e = 1.0;
    double min_rho = 0.0;   ///< before limiting
    double min_rho_e = 0.0; ///< before limiting (after the density stage)
};

/// First-stage scaling factor for density.
/// Returns 1 when min_rho >= eps or when the 0/0 guard applies.
double limiter_theta(double avg, double minval, double eps);

/// Limits a set of point states sharing the cell average. The average must
/// be in G^eps. Used directly by tests; the field version below applies the
/// same scalings to nodal coefficients.
LimitResult limit_cell(std::span<ConsState> states, const ConsState& avg, double eps);

struct FieldLimitStats {
    int cells_limited = 0;
    double min_rho = 0.0;   ///< over all check points, before limiting
    double min_rho_e = 0.0; ///< over all check points, before limiting
};

/// Applies the limiter cellwise on the S_H check points (plus the nodal set
/// S_P when include_nodes is set). Throws AverageNotAdmissibleError if any
/// cell average has rho or rho*e below eps.
FieldLimitStats apply_limiter(DGField& U, double eps, bool include_nodes);

/// Minimum of rho and rho*e over all S_H points (plus nodes if requested).
void field_min_check(const DGField& U, bool include_nodes, double& min_rho, double& min_rho_e);

/// Floor policy of Algorithm H: eps = min(cap, min_K avg rho, min_K avg rho*e).
double positivity_floor(const DGField& U, double cap);

} // namespace cnsdg

#endif
