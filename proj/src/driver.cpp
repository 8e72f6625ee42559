#include "cnsdg/driver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace cnsdg {

Simulation::Simulation(const RunConfig& cfg)
    : cfg_(cfg), scenario_(make_scenario(cfg.scenario, cfg.dx)) {
    const ScenarioPreset& preset = scenario_.preset_for_degree(cfg.degree);
    const double prandtl = cfg.prandtl > 0 ? cfg.prandtl : scenario_.prandtl;
    const double reynolds = cfg.reynolds > 0 ? cfg.reynolds : preset.reynolds;
    gas_ = GasParams(cfg.gamma, prandtl, reynolds);
    cfl_a_ = cfg.cfl_a > 0 ? cfg.cfl_a : preset.cfl_a;
    end_time_ = cfg.end_time >= 0 ? cfg.end_time : preset.end_time;

    mesh_ = build_mesh(scenario_.domain, cfg.dx);
    tables_ = std::make_unique<ElementTables>(cfg.degree, mesh_.dim);

    ipdg_ = IPDGParams::defaults_for_degree(cfg.degree);
    if (cfg.sigma_interior >= 0) ipdg_.sigma_int = cfg.sigma_interior;
    if (cfg.sigma_boundary >= 0) ipdg_.sigma_bdy = cfg.sigma_boundary;
    ipdg_.sigma_tilde = cfg.sigma_tilde;
    parabolic_ = std::make_unique<ParabolicOperator>(mesh_, *tables_, gas_, ipdg_);

    hctx_.mesh = &mesh_;
    hctx_.tables = tables_.get();
    hctx_.gas = gas_;

    forcing_on_ = scenario_.mms && (cfg.mms_forcing < 0 ? scenario_.forcing_default
                                                        : cfg.mms_forcing != 0);
    if (forcing_on_) {
        auto mms = scenario_.mms;
        hctx_.forcing = [mms](const Vec2& x, double t) { return mms->hyperbolic_forcing(x, t); };
        pforcing_.momentum = [mms](const Vec2& x, double t) {
            return mms->momentum_forcing(x, t);
        };
        pforcing_.energy = [mms](const Vec2& x, double t) { return mms->energy_forcing(x, t); };
    }

    if (cfg.solver == "direct") policy_.kind = SolverKind::Direct;
    else if (cfg.solver == "krylov") policy_.kind = SolverKind::Krylov;
    else policy_.kind = SolverKind::Auto;
}

DGField Simulation::initial_field() const {
    DGField U(mesh_, *tables_);
    const int nloc = tables_->nloc();
    for (int c = 0; c < mesh_.n_cells(); ++c) {
        const Vec2 ctr = mesh_.cell_center(c);
        for (int j = 0; j < nloc; ++j) {
            Vec2 x = mesh_.map_to_physical(c, tables_->basis.node(j));
            // nudge strictly inside the cell so per-cell constants evaluate
            // on their own side of lattice-aligned discontinuities
            x.x = ctr.x + (x.x - ctr.x) * (1.0 - 1e-12);
            x.y = ctr.y + (x.y - ctr.y) * (1.0 - 1e-12);
            U.set_node_state(c, j, scenario_.initial(x));
        }
    }
    const double eps = positivity_floor(U, cfg_.floor_cap);
    if (!(eps > 0.0)) throw NumericalError("initial condition has non-admissible cell averages");
    apply_limiter(U, eps, true);
    return U;
}

double Simulation::trial_timestep(const DGField& U, double t) const {
    const double alpha = max_face_wave_speed(hctx_, U, t);
    if (!(alpha > 0.0)) throw NumericalError("trial_timestep: vanishing wave speed");
    return cfl_a_ * tables_->pts.omega_hat * mesh_.dx / alpha;
}

StrangReport Simulation::strang_step(DGField& U, double t, double dt, double dt_trial,
                                     double remaining) const {
    StrangReport rep;
    const double eps = positivity_floor(U, cfg_.floor_cap);
    if (!(eps > 0.0))
        throw NumericalError("strang_step: non-admissible cell average at t = " +
                             std::to_string(t));

    for (int attempt = 0;; ++attempt) {
        rep.doublings = attempt;
        DGField W = U;

        // CNS1: first hyperbolic half-step; final stages limit on S_H u S_P.
        AdvanceReport a1 =
            advance_hyperbolic(hctx_, W, t, t + 0.5 * dt, dt_trial, eps, true,
                               cfg_.max_halvings);
        rep.halvings += a1.halvings;

        // CNS2 + CNS3: projection and the two implicit solves.
        NodalFields nf = project_forward(W);
        std::vector<double> u_P, e_P;
        const ParabolicReport pr = parabolic_->solve_parabolic_step(
            nf.rho, nf.u, nf.e, dt, t + dt, policy_, u_P, e_P, parabolic_forcing());

        bool accept = !pr.negative_energy();
        if (!accept) {
            const bool can_double = attempt < cfg_.max_doublings && 2.0 * dt <= remaining;
            if (can_double) {
                dt *= 2.0;
                rep.halvings = 0;
                continue;
            }
            // Clipped final step (or budget exhausted): fall back to the
            // relaxed cell-average criterion; the Step-4 limiter repairs
            // point values whenever the averages are still admissible.
            int n_bad = 0;
            cell_average_admissible_after_parabolic(mesh_, *tables_, nf.rho, u_P, e_P, 0.0,
                                                    &n_bad);
            if (n_bad > 0)
                throw BudgetExceededError(
                    "strang_step: negative internal-energy average at t = " +
                    std::to_string(t) + " with no doubling headroom");
            rep.relaxed_acceptance = true;
        }

        // CNS4: back to conserved variables, limit on S_H.
        DGField P = project_backward(mesh_, *tables_, nf.rho, u_P, e_P);
        const double eps4 = std::min(eps, positivity_floor(P, cfg_.floor_cap));
        if (!(eps4 > 0.0))
            throw NumericalError("strang_step: post-parabolic averages left G at t = " +
                                 std::to_string(t));
        apply_limiter(P, eps4, false);

        // CNS5: second hyperbolic half-step.
        AdvanceReport a2 = advance_hyperbolic(hctx_, P, t + 0.5 * dt, t + dt, dt_trial, eps4,
                                              false, cfg_.max_halvings);
        rep.halvings += a2.halvings;

        U = P;
        rep.dt_used = dt;
        return rep;
    }
}

void Simulation::write_outputs(const DGField& U, const std::string& suffix) const {
    if (cfg_.output_prefix.empty()) return;
    const std::string base = cfg_.output_prefix + suffix;
    if (mesh_.dim == 1) {
        write_csv_1d(U, gas_, base + ".csv");
    } else {
        write_csv_2d(U, gas_, base + ".csv");
        write_vtk_2d(U, gas_, base + ".vtk", scenario_.name);
    }
}

Simulation::RunResult Simulation::run(double fixed_dt) const {
    RunResult res;
    res.field = initial_field();
    res.initial_totals = res.field.totals();
    double t = 0.0;
    const double T = end_time_;

    write_outputs(res.field, "_000000");
    while (t < T * (1.0 - 1e-14) || (T == 0.0 && t == 0.0)) {
        if (T == 0.0) break;
        const double remaining = T - t;
        const double trial = fixed_dt > 0 ? fixed_dt : trial_timestep(res.field, t);
        const double dt = std::min(trial, remaining);
        const StrangReport sr = strang_step(res.field, t, dt, trial, remaining);
        t += sr.dt_used;
        ++res.steps;

        LogRow row;
        row.step = res.steps;
        row.t = t;
        row.dt = sr.dt_used;
        row.halvings = sr.halvings;
        row.doublings = sr.doublings;
        field_min_check(res.field, false, row.min_rho, row.min_rhoe);
        const auto tot = res.field.totals();
        row.total_rho = tot[0];
        row.total_mx = tot[1];
        row.total_my = tot[2];
        row.total_E = tot[3];
        res.log.push_back(row);
        if (!std::isfinite(row.min_rho) || !std::isfinite(row.min_rhoe))
            throw NumericalError("run: non-finite field at t = " + std::to_string(t));

        if (cfg_.output_every_steps > 0 && res.steps % cfg_.output_every_steps == 0) {
            char suffix[32];
            std::snprintf(suffix, sizeof(suffix), "_%06ld", res.steps);
            write_outputs(res.field, suffix);
        }
    }
    res.time = T;
    res.final_totals = res.field.totals();
    write_outputs(res.field, "_final");
    if (!cfg_.output_prefix.empty()) write_log_csv(res.log, cfg_.output_prefix + "_log.csv");
    return res;
}

Simulation::RunResult run_simulation(const RunConfig& cfg) {
    Simulation sim(cfg);
    return sim.run();
}

void mms_errors(const Simulation& sim, const DGField& U, double t, double& err_rho,
                double& err_m, double& err_E) {
    const ElementTables& et = sim.tables();
    const Mesh& mesh = sim.mesh();
    const MmsSolution& mms = *sim.scenario().mms;
    const int nloc = et.nloc(), nq = et.n_vol_q();
    const auto& ev = et.eval_vol();
    const double cellvol = std::pow(mesh.dx, mesh.dim);
    double s_rho = 0, s_m = 0, s_E = 0;
    for (int c = 0; c < mesh.n_cells(); ++c) {
        for (int p = 0; p < nq; ++p) {
            double uv[kVars];
            for (int v = 0; v < kVars; ++v) {
                double acc = 0.0;
                const double* coef = U.cell_var(c, v);
                for (int j = 0; j < nloc; ++j) acc += ev[p * nloc + j] * coef[j];
                uv[v] = acc;
            }
            const Vec2 x = mesh.map_to_physical(c, et.pts.s_h_vol[p]);
            const ConsState ex = mms.exact_state(x, t);
            const double w = cellvol * et.pts.s_h_vol_w[p];
            s_rho += w * (uv[0] - ex.rho) * (uv[0] - ex.rho);
            s_m += w * ((uv[1] - ex.m.x) * (uv[1] - ex.m.x) +
                        (uv[2] - ex.m.y) * (uv[2] - ex.m.y));
            s_E += w * (uv[3] - ex.E) * (uv[3] - ex.E);
        }
    }
    err_rho = std::sqrt(s_rho);
    err_m = std::sqrt(s_m);
    err_E = std::sqrt(s_E);
}

std::vector<ConvergenceRow> mms_convergence(const RunConfig& base,
                                            const std::vector<double>& dx_list,
                                            double dt_fixed) {
    if (!(dt_fixed > 0.0)) throw ConfigError("mms_convergence: dt must be positive");
    std::vector<ConvergenceRow> rows;
    for (double dx : dx_list) {
        RunConfig cfg = base;
        cfg.dx = dx;
        Simulation sim(cfg);
        if (!sim.scenario().mms)
            throw ConfigError("mms_convergence: scenario has no exact solution");
        const auto res = sim.run(dt_fixed);
        ConvergenceRow row;
        row.dx = dx;
        mms_errors(sim, res.field, res.time, row.err_rho, row.err_m, row.err_E);
        if (!rows.empty()) {
            const ConvergenceRow& prev = rows.back();
            const double r = std::log(prev.dx / row.dx);
            row.rate_rho = std::log(prev.err_rho / row.err_rho) / r;
            row.rate_m = std::log(prev.err_m / row.err_m) / r;
            row.rate_E = std::log(prev.err_E / row.err_E) / r;
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace cnsdg
