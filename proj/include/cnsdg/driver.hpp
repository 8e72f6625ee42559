/// @file driver.hpp
/// @brief Strang-splitting orchestration with the trial time step, halving
/// inside the hyperbolic half-steps, and doubling on parabolic positivity
/// failures; plus the simulation runner and the convergence harness.

#ifndef CNSDG_DRIVER_HPP
#define CNSDG_DRIVER_HPP

#include "cnsdg/config.hpp"
#include "cnsdg/output.hpp"
#include "cnsdg/scenario.hpp"

#include <memory>

namespace cnsdg {

struct StrangReport {
    double dt_used = 0.0;
    int halvings = 0;
    int doublings = 0;
    bool relaxed_acceptance = false; ///< Step-4 average check in place of nodal
};

/// A configured scenario run: mesh, tables, operators, and the stepping loop.
class Simulation {
public:
    explicit Simulation(const RunConfig& cfg);

    const Mesh& mesh() const { return mesh_; }
    const ElementTables& tables() const { return *tables_; }
    const GasParams& gas() const { return gas_; }
    const ScenarioSpec& scenario() const { return scenario_; }
    const ParabolicOperator& parabolic() const { return *parabolic_; }
    const RunConfig& config() const { return cfg_; }
    double end_time() const { return end_time_; }
    double cfl_a() const { return cfl_a_; }

    /// Initial condition collocated at the nodes, then limited on S_H u S_P.
    DGField initial_field() const;

    /// dt = a omega_hat dx / max_e alpha_e  (Eq.-(15)-style trial step).
    double trial_timestep(const DGField& U, double t) const;

    /// One outer Strang step of length dt (already clipped to the horizon).
    /// dt_trial is the step-start trial value driving the inner substeps.
    StrangReport strang_step(DGField& U, double t, double dt, double dt_trial,
                             double remaining) const;

    struct RunResult {
        DGField field;
        std::vector<LogRow> log;
        long steps = 0;
        double time = 0.0;
        std::array<double, 4> initial_totals{}, final_totals{};
    };

    /// Marches to the end time; fixed_dt > 0 bypasses the trial step
    /// (used by the accuracy study). Writes outputs when configured.
    RunResult run(double fixed_dt = 0.0) const;

    const HyperbolicContext& hyperbolic_context() const { return hctx_; }
    const ParabolicForcing* parabolic_forcing() const {
        return forcing_on_ ? &pforcing_ : nullptr;
    }

private:
    RunConfig cfg_;
    ScenarioSpec scenario_;
    GasParams gas_;
    Mesh mesh_;
    std::unique_ptr<ElementTables> tables_;
    IPDGParams ipdg_;
    std::unique_ptr<ParabolicOperator> parabolic_;
    HyperbolicContext hctx_;
    ParabolicForcing pforcing_;
    SolverPolicy policy_;
    bool forcing_on_ = false;
    double cfl_a_ = 0.5;
    double end_time_ = 0.0;

    void write_outputs(const DGField& U, const std::string& suffix) const;
};

Simulation::RunResult run_simulation(const RunConfig& cfg);

struct ConvergenceRow {
    double dx = 0.0;
    double err_rho = 0.0, err_m = 0.0, err_E = 0.0;
    double rate_rho = 0.0, rate_m = 0.0, rate_E = 0.0; ///< 0 on the first row
};

/// Discrete L2_h errors (S_H_vol Gauss rule) against the exact fields at the
/// end time, on a sequence of meshes at fixed dt.
std::vector<ConvergenceRow> mms_convergence(const RunConfig& base,
                                            const std::vector<double>& dx_list,
                                            double dt_fixed);

/// L2_h errors of a single run against the scenario's exact solution.
void mms_errors(const Simulation& sim, const DGField& U, double t, double& err_rho,
                double& err_m, double& err_E);

} // namespace cnsdg

#endif
