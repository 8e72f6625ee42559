/// @file scenario.hpp
/// @brief Benchmark scenario catalog: domains, initial data, boundary
/// layouts, recommended presets, and the manufactured-solution study.

#ifndef CNSDG_SCENARIO_HPP
#define CNSDG_SCENARIO_HPP

#include "cnsdg/hyperbolic.hpp"
#include "cnsdg/mesh.hpp"
#include "cnsdg/parabolic.hpp"

#include <memory>
#include <string>
#include <vector>

namespace cnsdg {

/// Closed-form exact fields of the smooth accuracy study, with the split
/// forcings of both subproblems. The forcings satisfy: hyperbolic forcing =
/// full Euler residual of the exact solution (time derivative included),
/// parabolic forcing = viscous-only residual; their sum is the Navier-Stokes
/// residual of the exact fields.
class MmsSolution {
public:
    MmsSolution(const GasParams& gas) : gas_(gas) {}

    void primitives(const Vec2& x, double t, double& rho, Vec2& u, double& e) const;
    ConsState exact_state(const Vec2& x, double t) const;

    /// S_H for [rho, m_x, m_y, E].
    std::array<double, 4> hyperbolic_forcing(const Vec2& x, double t) const;
    /// S_P for the momentum equation.
    Vec2 momentum_forcing(const Vec2& x, double t) const;
    /// S_P for the internal-energy equation (already reduced by u . S_P,m).
    double energy_forcing(const Vec2& x, double t) const;

    /// Full Navier-Stokes residual of the exact fields, for the
    /// finite-difference consistency oracle in tests.
    std::array<double, 4> ns_residual(const Vec2& x, double t) const;

private:
    GasParams gas_;
};

struct ScenarioPreset {
    int k;
    double dx;
    double cfl_a;
    double reynolds;
    double end_time;
};

struct ScenarioSpec {
    std::string name;
    std::string description;
    int dim = 2;
    DomainSpec domain;
    std::function<ConsState(const Vec2&)> initial;
    double gamma = 1.4;
    double prandtl = 0.72;
    std::vector<ScenarioPreset> presets;
    std::shared_ptr<MmsSolution> mms; ///< set for the accuracy-study scenarios
    bool forcing_default = false;     ///< whether runs add the MMS forcings

    const ScenarioPreset& preset_for_degree(int k) const;
};

/// Post-shock state of a normal shock of Mach number mach moving along unit
/// normal n into the quiescent state (rho, p) (Rankine-Hugoniot relations).
ConsState normal_shock_post_state(double mach, double rho_pre, double p_pre, const Vec2& n,
                                  const GasParams& gas);

std::vector<std::string> scenario_names();

/// Builds a scenario; dx fixes cell-dependent initial data (blast energy).
ScenarioSpec make_scenario(const std::string& name, double dx);

} // namespace cnsdg

#endif
