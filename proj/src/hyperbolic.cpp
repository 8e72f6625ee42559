#include "cnsdg/hyperbolic.hpp"

#include <cmath>

namespace cnsdg {

namespace {

// Local face id of a mesh face as seen from the given side.
// side_in: the face of cell_in; for sign=+1 it is the cell's hi face.
int local_face_in(const Face& f) { return 2 * f.axis + (f.sign > 0 ? 1 : 0); }
int local_face_out(const Face& f) { return 2 * f.axis + (f.sign > 0 ? 0 : 1); }

struct FaceTraceWorkspace {
    std::array<std::array<double, 4>, 4> Um; // per quad point, per var
    std::array<std::array<double, 4>, 4> Up;
};

// Evaluates both traces (or trace + ghost) at every face quadrature point.
void face_traces(const HyperbolicContext& ctx, const DGField& U, const Face& face, double t,
                 FaceTraceWorkspace& w) {
    const Mesh& mesh = *ctx.mesh;
    const ElementTables& et = *ctx.tables;
    const int nloc = et.nloc(), nq = et.n_face_q();
    const int fin = local_face_in(face);
    const auto& Ein = et.eval_face()[fin];
    for (int q = 0; q < nq; ++q)
        for (int v = 0; v < kVars; ++v) {
            double acc = 0.0;
            const double* coef = U.cell_var(face.cell_in, v);
            const double* row = Ein.data() + static_cast<size_t>(q) * nloc;
            for (int j = 0; j < nloc; ++j) acc += row[j] * coef[j];
            w.Um[q][v] = acc;
        }
    if (face.cell_out >= 0) {
        const int fout = local_face_out(face);
        const auto& Eout = et.eval_face()[fout];
        for (int q = 0; q < nq; ++q)
            for (int v = 0; v < kVars; ++v) {
                double acc = 0.0;
                const double* coef = U.cell_var(face.cell_out, v);
                const double* row = Eout.data() + static_cast<size_t>(q) * nloc;
                for (int j = 0; j < nloc; ++j) acc += row[j] * coef[j];
                w.Up[q][v] = acc;
            }
    } else {
        const HyperbolicBC& bc = mesh.segments[face.seg].hyperbolic;
        Vec2 n{0, 0};
        n[face.axis] = face.sign;
        const int taxis = 1 - face.axis;
        for (int q = 0; q < nq; ++q) {
            Vec2 x = face.center;
            if (mesh.dim == 2) {
                // tangential Gauss offset of the q-th face point
                const double off = et.pts.s_h_face[0][q].y;
                x[taxis] = face.center[taxis] + off * mesh.dx;
            }
            const ConsState Uin{w.Um[q][0], {w.Um[q][1], w.Um[q][2]}, w.Um[q][3]};
            const ConsState g = ghost_state(bc, Uin, n, x, t);
            w.Up[q][0] = g.rho;
            w.Up[q][1] = g.m.x;
            w.Up[q][2] = g.m.y;
            w.Up[q][3] = g.E;
        }
    }
}

} // namespace

void dg_residual(const HyperbolicContext& ctx, const DGField& U, double t, DGField& R) {
    const Mesh& mesh = *ctx.mesh;
    const ElementTables& et = *ctx.tables;
    const int dim = mesh.dim, nloc = et.nloc(), nvq = et.n_vol_q(), nq = et.n_face_q();
    const auto& ev = et.eval_vol();
    const auto& gv = et.grad_vol();

    std::fill(R.raw().begin(), R.raw().end(), 0.0);

    // Volume term: sum_p w_p F(U(x_p)) . grad phi_j (reference gradients; the
    // 1/dx of the physical gradient cancels against the cell volume below).
    std::array<std::array<double, 4>, 2> flux;
    for (int c = 0; c < mesh.n_cells(); ++c) {
        for (int p = 0; p < nvq; ++p) {
            double uv[kVars];
            for (int v = 0; v < kVars; ++v) {
                double acc = 0.0;
                const double* coef = U.cell_var(c, v);
                const double* row = ev.data() + static_cast<size_t>(p) * nloc;
                for (int j = 0; j < nloc; ++j) acc += row[j] * coef[j];
                uv[v] = acc;
            }
            const ConsState s{uv[0], {uv[1], uv[2]}, uv[3]};
            if (!(s.rho > 0.0)) throw NonAdmissibleError("dg_residual: non-positive density at volume point");
            advective_flux(s, ctx.gas, flux, dim);
            const double w = et.pts.s_h_vol_w[p];
            for (int j = 0; j < nloc; ++j) {
                const double* g = gv.data() + (static_cast<size_t>(p) * nloc + j) * 2;
                for (int v = 0; v < kVars; ++v) {
                    double acc = flux[0][v] * g[0];
                    if (dim == 2) acc += flux[1][v] * g[1];
                    R.cell_var(c, v)[j] += w * acc;
                }
            }
        }
    }

    // Surface term: one Lax-Friedrichs flux per face, scattered to both sides.
    FaceTraceWorkspace w;
    for (const Face& face : mesh.faces) {
        face_traces(ctx, U, face, t, w);
        Vec2 n{0, 0};
        n[face.axis] = face.sign;

        double alpha = 0.0;
        for (int q = 0; q < nq; ++q) {
            const ConsState Um{w.Um[q][0], {w.Um[q][1], w.Um[q][2]}, w.Um[q][3]};
            const ConsState Up{w.Up[q][0], {w.Up[q][1], w.Up[q][2]}, w.Up[q][3]};
            alpha = std::max(alpha, max_wave_speed(Um, Up, n, ctx.gas));
        }
        const int fin = local_face_in(face);
        const auto& Ein = et.eval_face()[fin];
        const int fout = face.cell_out >= 0 ? local_face_out(face) : 0;
        for (int q = 0; q < nq; ++q) {
            const ConsState Um{w.Um[q][0], {w.Um[q][1], w.Um[q][2]}, w.Um[q][3]};
            const ConsState Up{w.Up[q][0], {w.Up[q][1], w.Up[q][2]}, w.Up[q][3]};
            const auto fhat = lax_friedrichs_flux(Um, Up, n, alpha, ctx.gas, dim);
            const double wq = et.pts.face_qw[q];
            for (int j = 0; j < nloc; ++j) {
                const double phi_in = Ein[q * nloc + j];
                for (int v = 0; v < kVars; ++v)
                    R.cell_var(face.cell_in, v)[j] -= wq * fhat[v] * phi_in;
            }
            if (face.cell_out >= 0) {
                const auto& Eout = et.eval_face()[fout];
                for (int j = 0; j < nloc; ++j) {
                    const double phi_out = Eout[q * nloc + j];
                    for (int v = 0; v < kVars; ++v)
                        R.cell_var(face.cell_out, v)[j] += wq * fhat[v] * phi_out;
                }
            }
        }
    }

    // Diagonal mass: volume and surface quadratures above carry reference
    // weights, so the physical scaling reduces to 1/(dx w_j).
    for (int c = 0; c < mesh.n_cells(); ++c)
        for (int v = 0; v < kVars; ++v) {
            double* r = R.cell_var(c, v);
            for (int j = 0; j < nloc; ++j) r[j] /= mesh.dx * et.node_w(j);
        }

    if (ctx.forcing) {
        for (int c = 0; c < mesh.n_cells(); ++c)
            for (int j = 0; j < nloc; ++j) {
                const Vec2 x = mesh.map_to_physical(c, et.basis.node(j));
                const auto s = ctx.forcing(x, t);
                for (int v = 0; v < kVars; ++v) R.cell_var(c, v)[j] += s[v];
            }
    }
}

double max_face_wave_speed(const HyperbolicContext& ctx, const DGField& U, double t) {
    const ElementTables& et = *ctx.tables;
    const int nq = et.n_face_q();
    FaceTraceWorkspace w;
    double alpha = 0.0;
    for (const Face& face : ctx.mesh->faces) {
        face_traces(ctx, U, face, t, w);
        Vec2 n{0, 0};
        n[face.axis] = face.sign;
        for (int q = 0; q < nq; ++q) {
            const ConsState Um{w.Um[q][0], {w.Um[q][1], w.Um[q][2]}, w.Um[q][3]};
            const ConsState Up{w.Up[q][0], {w.Up[q][1], w.Up[q][2]}, w.Up[q][3]};
            alpha = std::max(alpha, max_wave_speed(Um, Up, n, ctx.gas));
        }
    }
    return alpha;
}

namespace {

bool averages_admissible(const DGField& U, double eps) {
    for (int c = 0; c < U.n_cells(); ++c)
        if (!in_G_eps(U.cell_average(c), eps)) return false;
    return true;
}

} // namespace

StageReport ssp_rk3_adaptive(const HyperbolicContext& ctx, DGField& U, double dt_target,
                             double t, double eps, bool final_stage_includes_nodes,
                             int max_halvings) {
    StageReport rep;
    DGField U1(*ctx.mesh, *ctx.tables), U2(*ctx.mesh, *ctx.tables), R(*ctx.mesh, *ctx.tables);
    double dt = dt_target;

    for (int attempt = 0; attempt <= max_halvings; ++attempt) {
        rep.halvings = attempt;
        bool failed = false;
        try {
            // Stage 1 at time t.
            dg_residual(ctx, U, t, R);
            U1 = U;
            DGField::axpby(dt, R, 1.0, U1);
            if (!averages_admissible(U1, eps)) failed = true;
            if (!failed) {
                apply_limiter(U1, eps, false);
                // Stage 2 at time t + dt.
                dg_residual(ctx, U1, t + dt, R);
                U2 = U1;
                DGField::axpby(dt, R, 1.0, U2);
                DGField::axpby(0.75, U, 0.25, U2);
                if (!averages_admissible(U2, eps)) failed = true;
            }
            if (!failed) {
                apply_limiter(U2, eps, false);
                // Stage 3 at time t + dt/2.
                dg_residual(ctx, U2, t + 0.5 * dt, R);
                DGField::axpby(dt, R, 1.0, U2);
                DGField::axpby(1.0 / 3.0, U, 2.0 / 3.0, U2);
                if (!averages_admissible(U2, eps)) failed = true;
            }
            if (!failed) {
                const FieldLimitStats st = apply_limiter(U2, eps, final_stage_includes_nodes);
                U = U2;
                rep.accepted = true;
                rep.dt_used = dt;
                rep.min_rho = st.min_rho;
                rep.min_rho_e = st.min_rho_e;
                return rep;
            }
        } catch (const NonAdmissibleError&) {
            failed = true; // flux evaluation left G: treat as a failed stage
        }
        dt *= 0.5;
    }
    throw MaxHalvingsError("ssp_rk3_adaptive: no admissible step within " +
                           std::to_string(max_halvings) + " halvings");
}

AdvanceReport advance_hyperbolic(const HyperbolicContext& ctx, DGField& U, double t_from,
                                 double t_to, double dt_trial, double eps,
                                 bool final_stage_includes_nodes, int max_halvings) {
    if (!(t_to > t_from)) throw Error("advance_hyperbolic: t_to must exceed t_from");
    AdvanceReport rep;
    double t = t_from;
    while (true) {
        const double remaining = t_to - t;
        if (remaining <= 0.0) break;
        const double dt_sub = std::min(dt_trial, remaining);
        const StageReport sr =
            ssp_rk3_adaptive(ctx, U, dt_sub, t, eps, final_stage_includes_nodes, max_halvings);
        ++rep.substeps;
        rep.halvings += sr.halvings;
        if (sr.dt_used >= remaining * (1.0 - 1e-14)) break; // landed on t_to
        t += sr.dt_used;
    }
    return rep;
}

} // namespace cnsdg
