#include "cnsdg/field.hpp"

#include <cmath>

namespace cnsdg {

ConsState DGField::evaluate(int c, const Vec2& xhat) const {
    const NodalBasis& basis = tables_->basis;
    double vals[kVars] = {0, 0, 0, 0};
    for (int j = 0; j < nloc_; ++j) {
        const double phi = basis.basis_eval(j, xhat);
        for (int v = 0; v < kVars; ++v) vals[v] += phi * cell_var(c, v)[j];
    }
    return {vals[0], {vals[1], vals[2]}, vals[3]};
}

ConsState DGField::cell_average(int c) const {
    double vals[kVars] = {0, 0, 0, 0};
    for (int j = 0; j < nloc_; ++j) {
        const double w = tables_->node_w(j);
        for (int v = 0; v < kVars; ++v) vals[v] += w * cell_var(c, v)[j];
    }
    return {vals[0], {vals[1], vals[2]}, vals[3]};
}

std::array<double, 4> DGField::totals() const {
    const int nq = tables_->n_vol_q();
    const auto& ev = tables_->eval_vol();
    const double cellvol = std::pow(mesh_->dx, mesh_->dim);
    std::array<double, 4> tot{0, 0, 0, 0};
    for (int c = 0; c < n_cells(); ++c) {
        for (int p = 0; p < nq; ++p) {
            const double w = tables_->pts.s_h_vol_w[p];
            for (int v = 0; v < kVars; ++v) {
                double uv = 0.0;
                const double* coef = cell_var(c, v);
                for (int j = 0; j < nloc_; ++j) uv += ev[p * nloc_ + j] * coef[j];
                tot[v] += cellvol * w * uv;
            }
        }
    }
    return tot;
}

bool DGField::all_finite() const {
    for (double x : data_)
        if (!std::isfinite(x)) return false;
    return true;
}

void DGField::axpby(double a, const DGField& x, double b, DGField& y) {
    const size_t n = y.data_.size();
    for (size_t i = 0; i < n; ++i) y.data_[i] = a * x.data_[i] + b * y.data_[i];
}

} // namespace cnsdg
