/// @file field.hpp
/// @brief Per-cell nodal coefficient storage for the conserved variables.

#ifndef CNSDG_FIELD_HPP
#define CNSDG_FIELD_HPP

#include "cnsdg/basis.hpp"
#include "cnsdg/gas.hpp"
#include "cnsdg/mesh.hpp"

#include <array>
#include <vector>

namespace cnsdg {

/// Always four variables [rho, m_x, m_y, E]; 1D fields keep m_y at zero.
inline constexpr int kVars = 4;

/// DG field of conserved variables: coefficients are point values at the
/// tensor Gauss-Lobatto nodes, so the cell average is the node-weighted sum.
class DGField {
public:
    DGField() = default;
    DGField(const Mesh& mesh, const ElementTables& tables)
        : mesh_(&mesh), tables_(&tables), nloc_(tables.nloc()),
          data_(static_cast<size_t>(mesh.n_cells()) * kVars * tables.nloc(), 0.0) {}

    const Mesh& mesh() const { return *mesh_; }
    const ElementTables& tables() const { return *tables_; }
    int n_cells() const { return mesh_->n_cells(); }
    int nloc() const { return nloc_; }

    double* cell_var(int c, int v) { return data_.data() + (static_cast<size_t>(c) * kVars + v) * nloc_; }
    const double* cell_var(int c, int v) const {
        return data_.data() + (static_cast<size_t>(c) * kVars + v) * nloc_;
    }

    ConsState node_state(int c, int j) const {
        return {cell_var(c, 0)[j], {cell_var(c, 1)[j], cell_var(c, 2)[j]}, cell_var(c, 3)[j]};
    }
    void set_node_state(int c, int j, const ConsState& s) {
        cell_var(c, 0)[j] = s.rho;
        cell_var(c, 1)[j] = s.m.x;
        cell_var(c, 2)[j] = s.m.y;
        cell_var(c, 3)[j] = s.E;
    }

    /// Exact polynomial evaluation at reference point xhat of cell c.
    ConsState evaluate(int c, const Vec2& xhat) const;

    /// Cell average: Gauss-Lobatto weighted nodal sum (exact for Q^k).
    ConsState cell_average(int c) const;

    /// Global totals of [rho, m_x, m_y, E] via the S_H_vol Gauss rule.
    std::array<double, 4> totals() const;

    bool all_finite() const;

    std::vector<double>& raw() { return data_; }
    const std::vector<double>& raw() const { return data_; }

    /// y = a*x + b*y nodewise (RK stage combinations).
    static void axpby(double a, const DGField& x, double b, DGField& y);

private:
    const Mesh* mesh_ = nullptr;
    const ElementTables* tables_ = nullptr;
    int nloc_ = 0;
    std::vector<double> data_;
};

} // namespace cnsdg

#endif
