#include "cnsdg/parabolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace cnsdg {

namespace {

struct PFaceSide {
    int cell;
    int local_face;
};

// Parabolic view of a mesh face: interior (including periodic wrap),
// Dirichlet, or Neumann. Neumann faces carry no terms at all.
struct PFace {
    PFaceSide in, out; // out.cell < 0 on boundary faces
    Vec2 n;
    ParBCKind kind;
    int seg;
    const Face* mf;
};

int local_face_in(const Face& f) { return 2 * f.axis + (f.sign > 0 ? 1 : 0); }
int local_face_out(const Face& f) { return 2 * f.axis + (f.sign > 0 ? 0 : 1); }

std::vector<PFace> parabolic_faces(const Mesh& mesh) {
    std::vector<PFace> out;
    out.reserve(mesh.faces.size());
    for (const Face& f : mesh.faces) {
        PFace pf{};
        pf.mf = &f;
        pf.in = {f.cell_in, local_face_in(f)};
        pf.out = {f.cell_out, f.cell_out >= 0 ? local_face_out(f) : -1};
        pf.n = Vec2{0, 0};
        pf.n[f.axis] = f.sign;
        pf.seg = f.seg;
        pf.kind = f.cell_out >= 0 ? ParBCKind::Interior
                                  : mesh.segments[f.seg].parabolic.kind;
        out.push_back(pf);
    }
    return out;
}

// Dense accumulation block, emitted as triplets with exact zeros skipped.
class Block {
public:
    void reset(int n) {
        n_ = n;
        data_.assign(static_cast<size_t>(n) * n, 0.0);
    }
    double& at(int r, int c) { return data_[static_cast<size_t>(r) * n_ + c]; }
    void emit(const std::vector<int>& dofs, std::vector<Triplet>& out) const {
        for (int r = 0; r < n_; ++r)
            for (int c = 0; c < n_; ++c) {
                const double v = data_[static_cast<size_t>(r) * n_ + c];
                if (v != 0.0) out.emplace_back(dofs[r], dofs[c], v);
            }
    }

private:
    int n_ = 0;
    std::vector<double> data_;
};

} // namespace

NodalFields project_forward(const DGField& U) {
    const Mesh& mesh = U.mesh();
    const int dim = mesh.dim, nloc = U.nloc(), nc = U.n_cells();
    NodalFields f;
    f.rho.resize(static_cast<size_t>(nc) * nloc);
    f.u.resize(static_cast<size_t>(nc) * nloc * dim);
    f.e.resize(static_cast<size_t>(nc) * nloc);
    for (int c = 0; c < nc; ++c)
        for (int j = 0; j < nloc; ++j) {
            const ConsState s = U.node_state(c, j);
            if (!(s.rho > 0.0))
                throw NonPositiveDensityError("project_forward: rho <= 0 at cell " +
                                              std::to_string(c) + " node " + std::to_string(j));
            const size_t idx = static_cast<size_t>(c) * nloc + j;
            f.rho[idx] = s.rho;
            double ke = 0.0;
            for (int a = 0; a < dim; ++a) {
                const double ua = s.m[a] / s.rho;
                f.u[idx * dim + a] = ua;
                ke += 0.5 * ua * ua;
            }
            f.e[idx] = s.E / s.rho - ke;
        }
    return f;
}

DGField project_backward(const Mesh& mesh, const ElementTables& tables,
                         const std::vector<double>& rho, const std::vector<double>& u,
                         const std::vector<double>& e) {
    const int dim = mesh.dim, nloc = tables.nloc();
    DGField U(mesh, tables);
    for (int c = 0; c < mesh.n_cells(); ++c)
        for (int j = 0; j < nloc; ++j) {
            const size_t idx = static_cast<size_t>(c) * nloc + j;
            ConsState s;
            s.rho = rho[idx];
            double ke = 0.0;
            for (int a = 0; a < dim; ++a) {
                const double ua = u[idx * dim + a];
                s.m[a] = s.rho * ua;
                ke += 0.5 * ua * ua;
            }
            s.E = s.rho * e[idx] + s.rho * ke;
            U.set_node_state(c, j, s);
        }
    return U;
}

std::vector<char> cell_average_admissible_after_parabolic(
    const Mesh& mesh, const ElementTables& tables, const std::vector<double>& rho,
    const std::vector<double>& u, const std::vector<double>& e, double eps, int* n_bad) {
    const int dim = mesh.dim, nloc = tables.nloc();
    std::vector<char> ok(mesh.n_cells(), 1);
    int bad = 0;
    for (int c = 0; c < mesh.n_cells(); ++c) {
        ConsState avg;
        for (int j = 0; j < nloc; ++j) {
            const size_t idx = static_cast<size_t>(c) * nloc + j;
            const double w = tables.node_w(j);
            double ke = 0.0;
            for (int a = 0; a < dim; ++a) ke += 0.5 * u[idx * dim + a] * u[idx * dim + a];
            avg.rho += w * rho[idx];
            avg.m.x += w * rho[idx] * u[idx * dim + 0];
            if (dim == 2) avg.m.y += w * rho[idx] * u[idx * dim + 1];
            avg.E += w * (rho[idx] * e[idx] + rho[idx] * ke);
        }
        if (!in_G_eps(avg, eps)) {
            ok[c] = 0;
            ++bad;
        }
    }
    if (n_bad) *n_bad = bad;
    return ok;
}

SemDofMap build_sem_dof_map(const Mesh& mesh, const ElementTables& tables) {
    SemDofMap map;
    const int k = tables.k(), n1 = tables.n1(), nloc = tables.nloc();
    const int dim = mesh.dim;
    map.node_dof.assign(static_cast<size_t>(mesh.n_cells()) * nloc, -1);
    const int px = mesh.periodic[0] ? mesh.nx * k : mesh.nx * k + 1;
    const int py = dim == 2 ? (mesh.periodic[1] ? mesh.ny * k : mesh.ny * k + 1) : 1;
    std::unordered_map<long long, int> seen;
    for (int c = 0; c < mesh.n_cells(); ++c) {
        const int ix = mesh.cells[c][0], iy = mesh.cells[c][1];
        for (int j = 0; j < nloc; ++j) {
            const int a = j % n1, b = dim == 2 ? j / n1 : 0;
            const int kx = (ix * k + a) % px;
            const int ky = dim == 2 ? (iy * k + b) % py : 0;
            const long long key = static_cast<long long>(ky) * (px + 1) + kx;
            auto it = seen.find(key);
            int dof;
            if (it == seen.end()) {
                dof = map.n_dofs++;
                seen.emplace(key, dof);
                map.dof_rep_node.push_back(c * nloc + j);
            } else {
                dof = it->second;
            }
            map.node_dof[static_cast<size_t>(c) * nloc + j] = dof;
        }
    }
    map.dof_dirichlet.assign(map.n_dofs, 0);
    map.dof_dirichlet_seg.assign(map.n_dofs, -1);
    for (const Face& f : mesh.faces) {
        if (f.cell_out >= 0) continue;
        if (mesh.segments[f.seg].parabolic.kind != ParBCKind::Dirichlet) continue;
        const int lf = local_face_in(f);
        for (int q : tables.face_nodes()[lf]) {
            const int dof = map.node_dof[static_cast<size_t>(f.cell_in) * nloc + q];
            map.dof_dirichlet[dof] = 1;
            map.dof_dirichlet_seg[dof] = f.seg;
        }
    }
    return map;
}

// ---------------------------------------------------------------------------

ParabolicOperator::ParabolicOperator(const Mesh& mesh, const ElementTables& tables,
                                     const GasParams& gas, const IPDGParams& params)
    : mesh_(&mesh), tables_(&tables), gas_(gas), params_(params) {
    const int nloc = tables.nloc();
    grad_node_.resize(static_cast<size_t>(nloc) * nloc * 2);
    for (int m = 0; m < nloc; ++m)
        for (int j = 0; j < nloc; ++j) {
            const Vec2 g = tables.basis.basis_grad(j, tables.basis.node(m));
            grad_node_[(static_cast<size_t>(m) * nloc + j) * 2 + 0] = g.x;
            grad_node_[(static_cast<size_t>(m) * nloc + j) * 2 + 1] = g.y;
        }
    for (const auto& seg : mesh.segments)
        if (seg.parabolic.kind == ParBCKind::Dirichlet) has_dirichlet_ = true;

    if (params_.energy_variant == EnergyVariant::SEM) {
        if (tables.k() < 2)
            throw ConfigError("ParabolicOperator: SEM energy variant requires k >= 2");
        sem_map_ = build_sem_dof_map(mesh, tables);
        k_energy_ = build_a_sem();
    } else {
        k_energy_ = build_a_D();
    }

    // Momentum stiffness A_eps/2 + A_lambda/3 cached with coefficients of
    // the Crank-Nicolson system (dt/Re applied per step).
    k_mom_ = [this] {
        std::vector<Triplet> trip;
        assemble_momentum_stiffness(0.5, 1.0 / 3.0, trip);
        return SparseMatrix::from_triplets(momentum_dofs(), trip);
    }();

    auto diag_positions = [](const SparseMatrix& A) {
        std::vector<int> pos(A.rows(), -1);
        for (int r = 0; r < A.rows(); ++r)
            for (int idx = A.row_offsets()[r]; idx < A.row_offsets()[r + 1]; ++idx)
                if (A.col_indices()[idx] == r) {
                    pos[r] = idx;
                    break;
                }
        for (int r = 0; r < A.rows(); ++r)
            if (pos[r] < 0) throw Error("stiffness pattern lost a diagonal entry");
        return pos;
    };
    diag_mom_ = diag_positions(k_mom_);
    diag_energy_ = diag_positions(k_energy_);
}

int ParabolicOperator::momentum_dofs() const {
    return mesh_->n_cells() * tables_->nloc() * mesh_->dim;
}

int ParabolicOperator::energy_dofs() const {
    return params_.energy_variant == EnergyVariant::SEM ? sem_map_.n_dofs
                                                        : mesh_->n_cells() * tables_->nloc();
}

void ParabolicOperator::velocity_gradient(const std::vector<double>& u, int cell, int node,
                                          double grad[2][2]) const {
    const int dim = mesh_->dim, nloc = tables_->nloc();
    const double inv_dx = 1.0 / mesh_->dx;
    for (int b = 0; b < 2; ++b)
        for (int a = 0; a < 2; ++a) grad[b][a] = 0.0;
    const size_t base = static_cast<size_t>(cell) * nloc;
    for (int j = 0; j < nloc; ++j)
        for (int b = 0; b < dim; ++b) {
            const double uj = u[(base + j) * dim + b];
            for (int a = 0; a < dim; ++a) grad[b][a] += uj * grad_at_node(node, j, a) * inv_dx;
        }
}

} // namespace cnsdg

namespace cnsdg {

void ParabolicOperator::dirichlet_data(int seg, const Vec2& x, double t, Vec2& u_D,
                                       double& e_D) const {
    const auto& bc = mesh_->segments[seg].parabolic;
    if (!bc.dirichlet) throw ConfigError("Dirichlet face without velocity/energy data");
    bc.dirichlet(x, t, u_D, e_D);
}

/// Momentum stiffness w_eps * a_eps + w_lambda * a_lambda on interleaved
/// vector dofs. All integrals use the tensor Gauss-Lobatto rule.
void ParabolicOperator::assemble_momentum_stiffness(double w_eps, double w_lambda,
                                                    std::vector<Triplet>& out) const {
    const Mesh& mesh = *mesh_;
    const ElementTables& et = *tables_;
    const int dim = mesh.dim, nloc = et.nloc();
    const int ndof_cell = nloc * dim;
    const double dx = mesh.dx;
    const double s_vol = std::pow(dx, dim - 2);
    const double s_face = std::pow(dx, dim - 1);
    const double h = mesh.diameter();

    // Pattern always contains the diagonal (mass is added there per step).
    for (int d = 0; d < momentum_dofs(); ++d) out.emplace_back(d, d, 0.0);

    Block blk;
    std::vector<int> dofs;

    // Volume: w_eps * [ (g_j.g_j') delta_cc' + g_j[c'] g_j'[c] ]
    //       - w_lambda * g_j[c] g_j'[c']   (reference gradients, 1/dx^2 in s_vol)
    for (int cell = 0; cell < mesh.n_cells(); ++cell) {
        blk.reset(ndof_cell);
        for (int m = 0; m < nloc; ++m) {
            const double w = s_vol * et.node_w(m);
            for (int j = 0; j < nloc; ++j) {
                const double gjx = grad_at_node(m, j, 0), gjy = grad_at_node(m, j, 1);
                for (int jp = 0; jp < nloc; ++jp) {
                    const double gpx = grad_at_node(m, jp, 0), gpy = grad_at_node(m, jp, 1);
                    const double gdot = gjx * gpx + gjy * gpy;
                    for (int c = 0; c < dim; ++c) {
                        const double gjc = c == 0 ? gjx : gjy;
                        for (int cp = 0; cp < dim; ++cp) {
                            const double gjcp = cp == 0 ? gjx : gjy;
                            const double gpc = c == 0 ? gpx : gpy;
                            const double gpcp = cp == 0 ? gpx : gpy;
                            double v = w_eps * ((c == cp ? gdot : 0.0) + gjcp * gpc);
                            v -= w_lambda * gjc * gpcp;
                            if (v != 0.0) blk.at(jp * dim + cp, j * dim + c) += w * v;
                        }
                    }
                }
            }
        }
        dofs.resize(ndof_cell);
        for (int j = 0; j < nloc; ++j)
            for (int c = 0; c < dim; ++c) dofs[j * dim + c] = (cell * nloc + j) * dim + c;
        blk.emit(dofs, out);
    }

    // Faces. For an interior face the block covers both sides (in first).
    const auto& fnodes = et.face_nodes();
    const auto& gface = et.grad_face_node();
    const int nfq = static_cast<int>(fnodes[0].size());
    for (const PFace& pf : parabolic_faces(mesh)) {
        if (pf.kind == ParBCKind::Neumann) continue;
        const bool interior = pf.kind == ParBCKind::Interior;
        const double sigma = interior ? params_.sigma_int : params_.sigma_bdy;
        const int nsides = interior ? 2 : 1;
        const double kappa = interior ? 0.5 : 1.0;
        blk.reset(nsides * ndof_cell);

        const PFaceSide sides[2] = {pf.in, pf.out};
        const double sgn[2] = {1.0, -1.0};
        const Vec2 n = pf.n;

        for (int q = 0; q < nfq; ++q) {
            const double wq = dim == 2 ? et.basis.gl.weights[q] : 1.0;
            const double wgrad = wq * s_face / dx;
            const double wpen = wq * s_face * sigma / h;

            for (int su = 0; su < nsides; ++su) {
                const auto& gu = gface[sides[su].local_face];
                const int ju_face = fnodes[sides[su].local_face][q];
                for (int st = 0; st < nsides; ++st) {
                    const int jt_face = fnodes[sides[st].local_face][q];
                    // trace-trace penalty, only for the strain form
                    if (sigma > 0.0 && w_eps != 0.0)
                        for (int c = 0; c < dim; ++c)
                            blk.at(st * ndof_cell + jt_face * dim + c,
                                   su * ndof_cell + ju_face * dim + c) +=
                                w_eps * wpen * sgn[su] * sgn[st];
                    // gradient(u) x trace(theta): -w_eps kappa_u sgn_t (...)
                    //                           + w_lambda kappa_u sgn_t g_j[c] n[c']
                    for (int j = 0; j < nloc; ++j) {
                        const double gx = gu[(q * nloc + j) * 2 + 0];
                        const double gy = gu[(q * nloc + j) * 2 + 1];
                        const double gn = gx * n.x + gy * n.y;
                        for (int c = 0; c < dim; ++c) {
                            const double gc = c == 0 ? gx : gy;
                            for (int cp = 0; cp < dim; ++cp) {
                                const double gcp = cp == 0 ? gx : gy;
                                double v = 0.0;
                                if (w_eps != 0.0)
                                    v -= w_eps * (gcp * n[c] + (c == cp ? gn : 0.0));
                                if (w_lambda != 0.0) v += w_lambda * gc * n[cp];
                                if (v != 0.0)
                                    blk.at(st * ndof_cell + jt_face * dim + cp,
                                           su * ndof_cell + j * dim + c) +=
                                        kappa * sgn[st] * wgrad * v;
                            }
                        }
                    }
                    // gradient(theta) x trace(u): +w_eps kappa_t sgn_u (...)
                    //                           - w_lambda kappa_t sgn_u g_j'[c'] n[c]
                    const auto& gt = gface[sides[st].local_face];
                    for (int jp = 0; jp < nloc; ++jp) {
                        const double gx = gt[(q * nloc + jp) * 2 + 0];
                        const double gy = gt[(q * nloc + jp) * 2 + 1];
                        const double gn = gx * n.x + gy * n.y;
                        for (int cp = 0; cp < dim; ++cp) {
                            const double gcp = cp == 0 ? gx : gy;
                            for (int c = 0; c < dim; ++c) {
                                const double gc = c == 0 ? gx : gy;
                                double v = 0.0;
                                if (w_eps != 0.0)
                                    v += w_eps * (gc * n[cp] + (c == cp ? gn : 0.0));
                                if (w_lambda != 0.0) v -= w_lambda * gcp * n[c];
                                if (v != 0.0)
                                    blk.at(st * ndof_cell + jp * dim + cp,
                                           su * ndof_cell + ju_face * dim + c) +=
                                        kappa * sgn[su] * wgrad * v;
                            }
                        }
                    }
                }
            }
        }

        dofs.resize(nsides * ndof_cell);
        for (int s = 0; s < nsides; ++s)
            for (int j = 0; j < nloc; ++j)
                for (int c = 0; c < dim; ++c)
                    dofs[s * ndof_cell + j * dim + c] = (sides[s].cell * nloc + j) * dim + c;
        blk.emit(dofs, out);
    }
}

SparseMatrix ParabolicOperator::build_a_eps() const {
    std::vector<Triplet> trip;
    assemble_momentum_stiffness(1.0, 0.0, trip);
    return SparseMatrix::from_triplets(momentum_dofs(), trip);
}

SparseMatrix ParabolicOperator::build_a_lambda() const {
    std::vector<Triplet> trip;
    assemble_momentum_stiffness(0.0, 1.0, trip);
    return SparseMatrix::from_triplets(momentum_dofs(), trip);
}

SparseMatrix ParabolicOperator::build_a_D() const {
    const Mesh& mesh = *mesh_;
    const ElementTables& et = *tables_;
    const int dim = mesh.dim, nloc = et.nloc();
    const double dx = mesh.dx;
    const double s_vol = std::pow(dx, dim - 2);
    const double s_face = std::pow(dx, dim - 1);
    const double h = mesh.diameter();
    const int ndofs = mesh.n_cells() * nloc;

    std::vector<Triplet> trip;
    for (int d = 0; d < ndofs; ++d) trip.emplace_back(d, d, 0.0);

    Block blk;
    std::vector<int> dofs;
    for (int cell = 0; cell < mesh.n_cells(); ++cell) {
        blk.reset(nloc);
        for (int m = 0; m < nloc; ++m) {
            const double w = s_vol * et.node_w(m);
            for (int j = 0; j < nloc; ++j) {
                const double gjx = grad_at_node(m, j, 0), gjy = grad_at_node(m, j, 1);
                for (int jp = 0; jp < nloc; ++jp) {
                    const double v = gjx * grad_at_node(m, jp, 0) +
                                     (dim == 2 ? gjy * grad_at_node(m, jp, 1) : 0.0);
                    if (v != 0.0) blk.at(jp, j) += w * v;
                }
            }
        }
        dofs.resize(nloc);
        for (int j = 0; j < nloc; ++j) dofs[j] = cell * nloc + j;
        blk.emit(dofs, trip);
    }

    const auto& fnodes = et.face_nodes();
    const auto& gface = et.grad_face_node();
    const int nfq = static_cast<int>(fnodes[0].size());
    for (const PFace& pf : parabolic_faces(mesh)) {
        if (pf.kind == ParBCKind::Neumann) continue;
        const bool interior = pf.kind == ParBCKind::Interior;
        const int nsides = interior ? 2 : 1;
        const double kappa = interior ? 0.5 : 1.0;
        blk.reset(nsides * nloc);
        const PFaceSide sides[2] = {pf.in, pf.out};
        const double sgn[2] = {1.0, -1.0};
        const Vec2 n = pf.n;

        for (int q = 0; q < nfq; ++q) {
            const double wq = dim == 2 ? et.basis.gl.weights[q] : 1.0;
            const double wgrad = wq * s_face / dx;
            const double wpen = wq * s_face * params_.sigma_tilde / h;
            for (int su = 0; su < nsides; ++su) {
                const auto& gu = gface[sides[su].local_face];
                const int ju_face = fnodes[sides[su].local_face][q];
                for (int st = 0; st < nsides; ++st) {
                    const int jt_face = fnodes[sides[st].local_face][q];
                    blk.at(st * nloc + jt_face, su * nloc + ju_face) +=
                        wpen * sgn[su] * sgn[st];
                    // IIPG: consistency term only, no transpose
                    for (int j = 0; j < nloc; ++j) {
                        const double gn = gu[(q * nloc + j) * 2 + 0] * n.x +
                                          gu[(q * nloc + j) * 2 + 1] * n.y;
                        if (gn != 0.0)
                            blk.at(st * nloc + jt_face, su * nloc + j) -=
                                kappa * sgn[st] * wgrad * gn;
                    }
                }
            }
        }
        dofs.resize(nsides * nloc);
        for (int s = 0; s < nsides; ++s)
            for (int j = 0; j < nloc; ++j) dofs[s * nloc + j] = sides[s].cell * nloc + j;
        blk.emit(dofs, trip);
    }
    return SparseMatrix::from_triplets(ndofs, trip);
}

SparseMatrix ParabolicOperator::build_a_sem() const {
    const Mesh& mesh = *mesh_;
    const ElementTables& et = *tables_;
    const int dim = mesh.dim, nloc = et.nloc();
    const double s_vol = std::pow(mesh.dx, dim - 2);
    const SemDofMap& map = sem_map_;

    std::vector<Triplet> trip;
    for (int d = 0; d < map.n_dofs; ++d) trip.emplace_back(d, d, 0.0);
    for (int cell = 0; cell < mesh.n_cells(); ++cell) {
        const size_t base = static_cast<size_t>(cell) * nloc;
        for (int m = 0; m < nloc; ++m) {
            const double w = s_vol * et.node_w(m);
            for (int j = 0; j < nloc; ++j) {
                const double gjx = grad_at_node(m, j, 0), gjy = grad_at_node(m, j, 1);
                for (int jp = 0; jp < nloc; ++jp) {
                    const double v = gjx * grad_at_node(m, jp, 0) +
                                     (dim == 2 ? gjy * grad_at_node(m, jp, 1) : 0.0);
                    if (v != 0.0)
                        trip.emplace_back(map.node_dof[base + jp], map.node_dof[base + j],
                                          w * v);
                }
            }
        }
    }
    return SparseMatrix::from_triplets(map.n_dofs, trip);
}

} // namespace cnsdg

namespace cnsdg {

namespace {

// A = coef * K + diag(mass), reusing K's pattern (diagonal always present).
SparseMatrix scaled_plus_diag(const SparseMatrix& K, double coef,
                              const std::vector<int>& diag_pos, const Vector& mass) {
    SparseMatrix A = K;
    double* v = A.values();
    const int nnz = A.nnz();
    for (int i = 0; i < nnz; ++i) v[i] *= coef;
    for (int r = 0; r < A.rows(); ++r) v[diag_pos[r]] += mass[r];
    return A;
}

} // namespace

Vector ParabolicOperator::b_tau(double t_impl) const {
    const Mesh& mesh = *mesh_;
    const ElementTables& et = *tables_;
    const int dim = mesh.dim, nloc = et.nloc();
    const double dx = mesh.dx;
    const double s_face = std::pow(dx, dim - 1);
    const double h = mesh.diameter();
    Vector rhs = Vector::Zero(momentum_dofs());

    const auto& fnodes = et.face_nodes();
    const auto& gface = et.grad_face_node();
    const int nfq = static_cast<int>(fnodes[0].size());
    for (const PFace& pf : parabolic_faces(mesh)) {
        if (pf.kind != ParBCKind::Dirichlet) continue;
        const int cell = pf.in.cell, lf = pf.in.local_face;
        const Vec2 n = pf.n;
        const auto& g = gface[lf];
        for (int q = 0; q < nfq; ++q) {
            const double wq = dim == 2 ? et.basis.gl.weights[q] : 1.0;
            const int jq = fnodes[lf][q];
            const Vec2 x = mesh.map_to_physical(cell, et.basis.node(jq));
            Vec2 uD;
            double eD;
            dirichlet_data(pf.seg, x, t_impl, uD, eD);
            const double uDn = dot(uD, n);
            // 2 (eps(theta) n) . u_D  - (2/3) (div theta)(u_D . n), all theta
            for (int jp = 0; jp < nloc; ++jp) {
                const double gx = g[(q * nloc + jp) * 2 + 0];
                const double gy = g[(q * nloc + jp) * 2 + 1];
                const double gn = gx * n.x + gy * n.y;
                const double gu = gx * uD.x + gy * uD.y;
                for (int cp = 0; cp < dim; ++cp) {
                    const double gcp = cp == 0 ? gx : gy;
                    double v = gu * n[cp] + gn * uD[cp] - (2.0 / 3.0) * gcp * uDn;
                    rhs[(cell * nloc + jp) * dim + cp] += wq * (s_face / dx) * v;
                }
            }
            // penalty part on the trace node
            if (params_.sigma_bdy > 0.0)
                for (int cp = 0; cp < dim; ++cp)
                    rhs[(cell * nloc + jq) * dim + cp] +=
                        wq * s_face * params_.sigma_bdy / h * uD[cp];
        }
    }
    return rhs;
}

Vector ParabolicOperator::b_D(double t_impl) const {
    const Mesh& mesh = *mesh_;
    const ElementTables& et = *tables_;
    const int dim = mesh.dim, nloc = et.nloc();
    const double s_face = std::pow(mesh.dx, dim - 1);
    const double h = mesh.diameter();
    Vector rhs = Vector::Zero(mesh.n_cells() * nloc);
    const auto& fnodes = et.face_nodes();
    const int nfq = static_cast<int>(fnodes[0].size());
    for (const PFace& pf : parabolic_faces(mesh)) {
        if (pf.kind != ParBCKind::Dirichlet) continue;
        const int cell = pf.in.cell, lf = pf.in.local_face;
        for (int q = 0; q < nfq; ++q) {
            const double wq = dim == 2 ? et.basis.gl.weights[q] : 1.0;
            const int jq = fnodes[lf][q];
            const Vec2 x = mesh.map_to_physical(cell, et.basis.node(jq));
            Vec2 uD;
            double eD;
            dirichlet_data(pf.seg, x, t_impl, uD, eD);
            rhs[cell * nloc + jq] += wq * s_face * params_.sigma_tilde / h * eD;
        }
    }
    return rhs;
}

Vector ParabolicOperator::b_eps(const std::vector<double>& u_star, double t_impl) const {
    const Mesh& mesh = *mesh_;
    const ElementTables& et = *tables_;
    const int dim = mesh.dim, nloc = et.nloc();
    const double cellvol = std::pow(mesh.dx, dim);
    const double s_face = std::pow(mesh.dx, dim - 1);
    const double h = mesh.diameter();
    Vector rhs = Vector::Zero(mesh.n_cells() * nloc);

    double grad[2][2];
    for (int cell = 0; cell < mesh.n_cells(); ++cell)
        for (int m = 0; m < nloc; ++m) {
            velocity_gradient(u_star, cell, m, grad);
            double ee = 0.0;
            for (int a = 0; a < dim; ++a)
                for (int b = 0; b < dim; ++b) {
                    const double eab = 0.5 * (grad[a][b] + grad[b][a]);
                    ee += eab * eab;
                }
            rhs[cell * nloc + m] += 2.0 * cellvol * et.node_w(m) * ee;
        }

    const auto& fnodes = et.face_nodes();
    const int nfq = static_cast<int>(fnodes[0].size());
    for (const PFace& pf : parabolic_faces(mesh)) {
        if (pf.kind == ParBCKind::Neumann) continue;
        const bool interior = pf.kind == ParBCKind::Interior;
        const double sigma = interior ? params_.sigma_int : params_.sigma_bdy;
        if (sigma == 0.0) continue;
        for (int q = 0; q < nfq; ++q) {
            const double wq = dim == 2 ? et.basis.gl.weights[q] : 1.0;
            const int jin = fnodes[pf.in.local_face][q];
            const size_t iin = (static_cast<size_t>(pf.in.cell) * nloc + jin) * dim;
            if (interior) {
                const int jout = fnodes[pf.out.local_face][q];
                const size_t iout = (static_cast<size_t>(pf.out.cell) * nloc + jout) * dim;
                double jump2 = 0.0;
                for (int c = 0; c < dim; ++c) {
                    const double d = u_star[iin + c] - u_star[iout + c];
                    jump2 += d * d;
                }
                const double v = 0.5 * wq * s_face * sigma / h * jump2; // {chi} = 1/2 each side
                rhs[pf.in.cell * nloc + jin] += v;
                rhs[pf.out.cell * nloc + jout] += v;
            } else {
                const Vec2 x = mesh.map_to_physical(pf.in.cell, et.basis.node(jin));
                Vec2 uD;
                double eD;
                dirichlet_data(pf.seg, x, t_impl, uD, eD);
                double diff2 = 0.0;
                for (int c = 0; c < dim; ++c) {
                    const double d = u_star[iin + c] - uD[c];
                    diff2 += d * d;
                }
                rhs[pf.in.cell * nloc + jin] += wq * s_face * sigma / h * diff2;
            }
        }
    }
    return rhs;
}

Vector ParabolicOperator::b_lambda(const std::vector<double>& u_star) const {
    const Mesh& mesh = *mesh_;
    const ElementTables& et = *tables_;
    const int dim = mesh.dim, nloc = et.nloc();
    const double cellvol = std::pow(mesh.dx, dim);
    Vector rhs = Vector::Zero(mesh.n_cells() * nloc);
    double grad[2][2];
    for (int cell = 0; cell < mesh.n_cells(); ++cell)
        for (int m = 0; m < nloc; ++m) {
            velocity_gradient(u_star, cell, m, grad);
            double div = 0.0;
            for (int a = 0; a < dim; ++a) div += grad[a][a];
            rhs[cell * nloc + m] -= cellvol * et.node_w(m) * div * div;
        }
    return rhs;
}

} // namespace cnsdg

namespace cnsdg {

Vector ParabolicOperator::energy_mass_diag(const std::vector<double>& rho) const {
    const ElementTables& et = *tables_;
    const int nloc = et.nloc();
    const double cellvol = std::pow(mesh_->dx, mesh_->dim);
    if (params_.energy_variant == EnergyVariant::Q1_IIPG) {
        Vector d(mesh_->n_cells() * nloc);
        for (int c = 0; c < mesh_->n_cells(); ++c)
            for (int j = 0; j < nloc; ++j)
                d[c * nloc + j] = cellvol * et.node_w(j) * rho[static_cast<size_t>(c) * nloc + j];
        return d;
    }
    Vector d = Vector::Zero(sem_map_.n_dofs);
    for (int c = 0; c < mesh_->n_cells(); ++c)
        for (int j = 0; j < nloc; ++j)
            d[sem_map_.node_dof[static_cast<size_t>(c) * nloc + j]] +=
                cellvol * et.node_w(j) * rho[static_cast<size_t>(c) * nloc + j];
    return d;
}

LinearSystem ParabolicOperator::assemble_momentum(const std::vector<double>& rho,
                                                  const std::vector<double>& u_H, double dt,
                                                  double t_impl,
                                                  const ParabolicForcing* forcing) const {
    const ElementTables& et = *tables_;
    const Mesh& mesh = *mesh_;
    const int dim = mesh.dim, nloc = et.nloc();
    const double cellvol = std::pow(mesh.dx, dim);
    const double Re = gas_.reynolds;

    for (double r : rho)
        if (!(r > 0.0))
            throw NonPositiveDensityError("assemble_momentum: non-positive nodal density");

    Vector mass(momentum_dofs());
    for (int c = 0; c < mesh.n_cells(); ++c)
        for (int j = 0; j < nloc; ++j) {
            const double m = cellvol * et.node_w(j) * rho[static_cast<size_t>(c) * nloc + j];
            for (int a = 0; a < dim; ++a) mass[(c * nloc + j) * dim + a] = m;
        }

    LinearSystem sys;
    sys.A = scaled_plus_diag(k_mom_, dt / Re, diag_mom_, mass);
    sys.b = Vector(momentum_dofs());
    for (int i = 0; i < momentum_dofs(); ++i) sys.b[i] = mass[i] * u_H[i];
    if (has_dirichlet_) sys.b += (0.5 * dt / Re) * b_tau(t_impl);
    if (forcing && forcing->momentum) {
        for (int c = 0; c < mesh.n_cells(); ++c)
            for (int j = 0; j < nloc; ++j) {
                const Vec2 x = mesh.map_to_physical(c, et.basis.node(j));
                const Vec2 s = forcing->momentum(x, t_impl);
                const double w = 0.5 * dt * cellvol * et.node_w(j);
                for (int a = 0; a < dim; ++a) sys.b[(c * nloc + j) * dim + a] += w * s[a];
            }
    }
    return sys;
}

LinearSystem ParabolicOperator::assemble_energy_system(const std::vector<double>& rho,
                                                       const std::vector<double>& e_H,
                                                       const std::vector<double>& u_star,
                                                       double dt, double t_impl,
                                                       const ParabolicForcing* forcing) const {
    const ElementTables& et = *tables_;
    const Mesh& mesh = *mesh_;
    const int nloc = et.nloc();
    const double cellvol = std::pow(mesh.dx, mesh.dim);
    const double Re = gas_.reynolds, lam = gas_.lambda();
    const bool sem = params_.energy_variant == EnergyVariant::SEM;

    for (double r : rho)
        if (!(r > 0.0))
            throw NonPositiveDensityError("assemble_energy_system: non-positive nodal density");

    // Right-hand side on DG nodes first.
    const int ndg = mesh.n_cells() * nloc;
    Vector rhs_dg(ndg);
    for (int c = 0; c < mesh.n_cells(); ++c)
        for (int j = 0; j < nloc; ++j) {
            const size_t idx = static_cast<size_t>(c) * nloc + j;
            rhs_dg[c * nloc + j] = cellvol * et.node_w(j) * rho[idx] * e_H[idx];
        }
    rhs_dg += (dt / Re) * b_eps(u_star, t_impl);
    rhs_dg += (2.0 * dt / (3.0 * Re)) * b_lambda(u_star);
    if (!sem && has_dirichlet_) rhs_dg += (dt * lam / Re) * b_D(t_impl);
    if (forcing && forcing->energy) {
        for (int c = 0; c < mesh.n_cells(); ++c)
            for (int j = 0; j < nloc; ++j) {
                const Vec2 x = mesh.map_to_physical(c, et.basis.node(j));
                rhs_dg[c * nloc + j] += dt * cellvol * et.node_w(j) * forcing->energy(x, t_impl);
            }
    }

    LinearSystem sys;
    const Vector mass = energy_mass_diag(rho);
    sys.A = scaled_plus_diag(k_energy_, dt * lam / Re, diag_energy_, mass);
    if (!sem) {
        sys.b = rhs_dg;
        return sys;
    }
    sys.b = Vector::Zero(sem_map_.n_dofs);
    for (int i = 0; i < ndg; ++i) sys.b[sem_map_.node_dof[i]] += rhs_dg[i];

    // Dirichlet rows by replacement (exercised by the MMS study only).
    if (has_dirichlet_) {
        double* vals = sys.A.values();
        for (int dof = 0; dof < sem_map_.n_dofs; ++dof) {
            if (!sem_map_.dof_dirichlet[dof]) continue;
            for (int idx = sys.A.row_offsets()[dof]; idx < sys.A.row_offsets()[dof + 1]; ++idx)
                vals[idx] = sys.A.col_indices()[idx] == dof ? 1.0 : 0.0;
            const int rep = sem_map_.dof_rep_node[dof];
            const Vec2 x = mesh.map_to_physical(rep / nloc, et.basis.node(rep % nloc));
            Vec2 uD;
            double eD;
            dirichlet_data(sem_map_.dof_dirichlet_seg[dof], x, t_impl, uD, eD);
            sys.b[dof] = eD;
        }
    }
    return sys;
}

ParabolicReport ParabolicOperator::solve_parabolic_step(
    const std::vector<double>& rho, const std::vector<double>& u_H,
    const std::vector<double>& e_H, double dt, double t_impl, const SolverPolicy& policy,
    std::vector<double>& u_P, std::vector<double>& e_P,
    const ParabolicForcing* forcing) const {
    const int dim = mesh_->dim, nloc = tables_->nloc();
    const bool sem = params_.energy_variant == EnergyVariant::SEM;
    ParabolicReport rep;

    const LinearSystem mom = assemble_momentum(rho, u_H, dt, t_impl, forcing);
    Vector guess(momentum_dofs());
    for (int i = 0; i < momentum_dofs(); ++i) guess[i] = u_H[i];
    const Vector u_star =
        solve_system(mom.A, mom.b, false, policy, &guess, &rep.momentum_iterations);

    std::vector<double> u_star_v(u_star.data(), u_star.data() + u_star.size());
    u_P.resize(u_star_v.size());
    for (size_t i = 0; i < u_star_v.size(); ++i) u_P[i] = 2.0 * u_star_v[i] - u_H[i];

    const LinearSystem en = assemble_energy_system(rho, e_H, u_star_v, dt, t_impl, forcing);
    Vector eguess;
    if (sem) {
        eguess = Vector::Zero(sem_map_.n_dofs);
        Vector cnt = Vector::Zero(sem_map_.n_dofs);
        for (int i = 0; i < mesh_->n_cells() * nloc; ++i) {
            eguess[sem_map_.node_dof[i]] += e_H[i];
            cnt[sem_map_.node_dof[i]] += 1.0;
        }
        for (int d = 0; d < sem_map_.n_dofs; ++d) eguess[d] /= cnt[d];
    } else {
        eguess = Vector(mesh_->n_cells() * nloc);
        for (int i = 0; i < mesh_->n_cells() * nloc; ++i) eguess[i] = e_H[i];
    }
    const bool symmetric = sem && !has_dirichlet_;
    const Vector e_dof = solve_system(en.A, en.b, symmetric, policy, &eguess,
                                      &rep.energy_iterations);

    e_P.resize(static_cast<size_t>(mesh_->n_cells()) * nloc);
    if (sem)
        for (int i = 0; i < mesh_->n_cells() * nloc; ++i) e_P[i] = e_dof[sem_map_.node_dof[i]];
    else
        for (int i = 0; i < mesh_->n_cells() * nloc; ++i) e_P[i] = e_dof[i];

    rep.min_e = std::numeric_limits<double>::infinity();
    for (int c = 0; c < mesh_->n_cells(); ++c)
        for (int j = 0; j < nloc; ++j) {
            const double e = e_P[static_cast<size_t>(c) * nloc + j];
            if (e < rep.min_e) {
                rep.min_e = e;
                rep.argmin_cell = c;
                rep.argmin_node = j;
            }
        }
    (void)dim;
    return rep;
}

RhsCheck energy_rhs_nonneg_check(const Vector& rhs) {
    RhsCheck c;
    c.min_entry = std::numeric_limits<double>::infinity();
    for (int i = 0; i < rhs.size(); ++i)
        if (rhs[i] < c.min_entry) {
            c.min_entry = rhs[i];
            c.argmin = i;
        }
    c.all_positive = c.min_entry > 0.0;
    return c;
}

Vector solve_system(const SparseMatrix& A, const Vector& b, bool symmetric,
                    const SolverPolicy& policy, const Vector* guess, int* iterations) {
    if (iterations) *iterations = 0;
    const bool use_direct = policy.kind == SolverKind::Direct ||
                            (policy.kind == SolverKind::Auto &&
                             A.rows() <= policy.direct_threshold);
    if (use_direct) return direct_solve(A, b);
    return krylov_solve(A, b, policy.tol, symmetric, guess, iterations);
}

} // namespace cnsdg
