#include "cnsdg/limiter.hpp"

#include <algorithm>
#include <limits>

namespace cnsdg {

double limiter_theta(double avg, double minval, double eps) {
    if (minval >= eps) return 1.0;
    const double denom = avg - minval;
    if (!(denom > 0.0)) return 1.0; // 0/0 guard: min equals average
    return std::min(1.0, (avg - eps) / denom);
}

LimitResult limit_cell(std::span<ConsState> states, const ConsState& avg, double eps) {
    if (!in_G_eps(avg, eps))
        throw AverageNotAdmissibleError("limit_cell: cell average outside G^eps");
    LimitResult r;

    double min_rho = std::numeric_limits<double>::infinity();
    for (const auto& s : states) min_rho = std::min(min_rho, s.rho);
    r.min_rho = min_rho;
    r.theta_rho = limiter_theta(avg.rho, min_rho, eps);
    if (r.theta_rho < 1.0)
        for (auto& s : states) s.rho = r.theta_rho * (s.rho - avg.rho) + avg.rho;

    double min_re = std::numeric_limits<double>::infinity();
    for (const auto& s : states) min_re = std::min(min_re, rho_e(s));
    r.min_rho_e = min_re;
    r.theta_e = limiter_theta(rho_e(avg), min_re, eps);
    if (r.theta_e < 1.0)
        for (auto& s : states) {
            s.rho = r.theta_e * (s.rho - avg.rho) + avg.rho;
            s.m.x = r.theta_e * (s.m.x - avg.m.x) + avg.m.x;
            s.m.y = r.theta_e * (s.m.y - avg.m.y) + avg.m.y;
            s.E = r.theta_e * (s.E - avg.E) + avg.E;
        }
    return r;
}

namespace {

// Evaluates the four variables at the S_H check points (and appends the
// nodal values when requested). vals[v] has one entry per point.
void eval_check_values(const DGField& U, int c, bool include_nodes,
                       std::array<std::vector<double>, kVars>& vals) {
    const ElementTables& et = U.tables();
    const int nloc = et.nloc(), nchk = et.n_check();
    const auto& E = et.eval_check();
    const int total = nchk + (include_nodes ? nloc : 0);
    for (int v = 0; v < kVars; ++v) {
        vals[v].assign(total, 0.0);
        const double* coef = U.cell_var(c, v);
        for (int p = 0; p < nchk; ++p) {
            double acc = 0.0;
            const double* row = E.data() + static_cast<size_t>(p) * nloc;
            for (int j = 0; j < nloc; ++j) acc += row[j] * coef[j];
            vals[v][p] = acc;
        }
        if (include_nodes)
            for (int j = 0; j < nloc; ++j) vals[v][nchk + j] = coef[j];
    }
}

double point_rho_e(const std::array<std::vector<double>, kVars>& vals, int p) {
    const double rho = vals[0][p];
    const double m2 = vals[1][p] * vals[1][p] + vals[2][p] * vals[2][p];
    return vals[3][p] - 0.5 * m2 / rho;
}

} // namespace

FieldLimitStats apply_limiter(DGField& U, double eps, bool include_nodes) {
    const ElementTables& et = U.tables();
    const int nloc = et.nloc();
    FieldLimitStats stats;
    stats.min_rho = std::numeric_limits<double>::infinity();
    stats.min_rho_e = std::numeric_limits<double>::infinity();
    std::array<std::vector<double>, kVars> vals;

    for (int c = 0; c < U.n_cells(); ++c) {
        const ConsState avg = U.cell_average(c);
        if (!in_G_eps(avg, eps))
            throw AverageNotAdmissibleError("apply_limiter: average of cell " +
                                            std::to_string(c) + " outside G^eps");
        eval_check_values(U, c, include_nodes, vals);
        const int total = static_cast<int>(vals[0].size());

        double min_rho = std::numeric_limits<double>::infinity();
        for (int p = 0; p < total; ++p) min_rho = std::min(min_rho, vals[0][p]);
        stats.min_rho = std::min(stats.min_rho, min_rho);

        bool limited = false;
        const double theta_rho = limiter_theta(avg.rho, min_rho, eps);
        if (theta_rho < 1.0) {
            limited = true;
            double* coef = U.cell_var(c, 0);
            for (int j = 0; j < nloc; ++j) coef[j] = theta_rho * (coef[j] - avg.rho) + avg.rho;
            for (int p = 0; p < total; ++p)
                vals[0][p] = theta_rho * (vals[0][p] - avg.rho) + avg.rho;
        }

        double min_re = std::numeric_limits<double>::infinity();
        for (int p = 0; p < total; ++p) min_re = std::min(min_re, point_rho_e(vals, p));
        stats.min_rho_e = std::min(stats.min_rho_e, min_re);

        const double theta_e = limiter_theta(rho_e(avg), min_re, eps);
        if (theta_e < 1.0) {
            limited = true;
            const double avgv[kVars] = {avg.rho, avg.m.x, avg.m.y, avg.E};
            for (int v = 0; v < kVars; ++v) {
                double* coef = U.cell_var(c, v);
                for (int j = 0; j < nloc; ++j)
                    coef[j] = theta_e * (coef[j] - avgv[v]) + avgv[v];
            }
        }
        if (limited) ++stats.cells_limited;
    }
    return stats;
}

void field_min_check(const DGField& U, bool include_nodes, double& min_rho, double& min_rho_e) {
    min_rho = std::numeric_limits<double>::infinity();
    min_rho_e = std::numeric_limits<double>::infinity();
    std::array<std::vector<double>, kVars> vals;
    for (int c = 0; c < U.n_cells(); ++c) {
        eval_check_values(U, c, include_nodes, vals);
        const int total = static_cast<int>(vals[0].size());
        for (int p = 0; p < total; ++p) {
            min_rho = std::min(min_rho, vals[0][p]);
            min_rho_e = std::min(min_rho_e, point_rho_e(vals, p));
        }
    }
}

double positivity_floor(const DGField& U, double cap) {
    double eps = cap;
    for (int c = 0; c < U.n_cells(); ++c) {
        const ConsState avg = U.cell_average(c);
        eps = std::min(eps, std::min(avg.rho, rho_e(avg)));
    }
    return eps;
}

} // namespace cnsdg
