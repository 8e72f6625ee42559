/// @file boundary.hpp
/// @brief Boundary-condition tags and payloads for both subproblems, the
/// moving-shock descriptor, and hyperbolic ghost states.

#ifndef CNSDG_BOUNDARY_HPP
#define CNSDG_BOUNDARY_HPP

#include "cnsdg/gas.hpp"
#include "cnsdg/types.hpp"

#include <functional>

namespace cnsdg {

enum class HypBCKind { Interior, Inflow, Outflow, Reflective, MovingShock, Periodic };
enum class ParBCKind { Interior, Dirichlet, Neumann, Periodic };

/// Exact pre/post state of a planar shock advected along its unit normal.
/// The line a x + b y + c = 0 with unit (a, b) holds at t = 0; points with
/// negative signed distance see the post-shock (left) state.
struct MovingShockDescriptor {
    ConsState post;  ///< left of the line
    ConsState pre;   ///< right of the line
    double a = 1.0, b = 0.0, c = 0.0;
    double speed = 0.0; ///< normal shock speed

    ConsState state_at(const Vec2& x, double t) const {
        const double phi = a * x.x + b * x.y + c - speed * t;
        return phi < 0.0 ? post : pre;
    }
};

/// Dirichlet data for the hyperbolic subproblem; constant states are
/// captured constants, the MMS study supplies time-dependent exact states.
using InflowStateFn = std::function<ConsState(const Vec2&, double)>;

struct HyperbolicBC {
    HypBCKind kind = HypBCKind::Outflow;
    InflowStateFn inflow;        ///< used when kind == Inflow
    MovingShockDescriptor shock; ///< used when kind == MovingShock
};

/// Dirichlet velocity/internal-energy data for the parabolic subproblem.
using VelEnergyFn = std::function<void(const Vec2&, double, Vec2&, double&)>;

struct ParabolicBC {
    ParBCKind kind = ParBCKind::Neumann;
    VelEnergyFn dirichlet; ///< used when kind == Dirichlet
};

/// Ghost state realizing the hyperbolic boundary condition at face point x,
/// time t, for interior trace U_in and outward unit normal n.
inline ConsState ghost_state(const HyperbolicBC& bc, const ConsState& U_in, const Vec2& n,
                             const Vec2& x, double t) {
    switch (bc.kind) {
    case HypBCKind::Inflow:
        return bc.inflow(x, t);
    case HypBCKind::Outflow:
        return U_in;
    case HypBCKind::Reflective: {
        const double mn = dot(U_in.m, n);
        return {U_in.rho, U_in.m - 2.0 * mn * n, U_in.E};
    }
    case HypBCKind::MovingShock:
        return bc.shock.state_at(x, t);
    default:
        throw Error("ghost_state: face is not a hyperbolic boundary");
    }
}

} // namespace cnsdg

#endif
