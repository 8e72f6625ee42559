/// @file gas.hpp
/// @brief Ideal-gas state algebra: conserved variables, equation of state,
/// advective flux, wave speeds, Lax-Friedrichs flux and the admissible sets.

#ifndef CNSDG_GAS_HPP
#define CNSDG_GAS_HPP

#include "cnsdg/types.hpp"

#include <array>

namespace cnsdg {

/// Dimensionless gas parameters. lambda = gamma / Pr is the heat-conduction
/// coefficient of the internal-energy equation.
struct GasParams {
    double gamma = 1.4;
    double prandtl = 0.72;
    double reynolds = 1.0;

    GasParams() = default;
    GasParams(double gamma_, double prandtl_, double reynolds_)
        : gamma(gamma_), prandtl(prandtl_), reynolds(reynolds_) {
        if (!(gamma > 1.0)) throw ConfigError("GasParams: gamma must exceed 1");
        if (!(prandtl > 0.0)) throw ConfigError("GasParams: prandtl must be positive");
        if (!(reynolds > 0.0)) throw ConfigError("GasParams: reynolds must be positive");
    }

    double lambda() const { return gamma / prandtl; }
};

/// Conserved variables U = [rho, m, E]. In 1D only m.x is used.
struct ConsState {
    double rho = 0.0;
    Vec2 m;
    double E = 0.0;

    ConsState() = default;
    ConsState(double rho_, Vec2 m_, double E_) : rho(rho_), m(m_), E(E_) {}
};

/// Builds a conserved state from primitive variables (rho, u, p).
inline ConsState cons_from_primitive(double rho, Vec2 u, double p, const GasParams& gas) {
    ConsState s;
    s.rho = rho;
    s.m = rho * u;
    s.E = p / (gas.gamma - 1.0) + 0.5 * rho * norm2(u);
    return s;
}

/// Internal-energy density rho*e = E - |m|^2 / (2 rho).
inline double rho_e(const ConsState& U) {
    return U.E - 0.5 * norm2(U.m) / U.rho;
}

inline double pressure(const ConsState& U, const GasParams& gas) {
    return (gas.gamma - 1.0) * rho_e(U);
}

/// Strict admissibility: rho > 0 and rho*e > 0.
inline bool in_G(const ConsState& U) {
    return U.rho > 0.0 && rho_e(U) > 0.0;
}

/// Floored admissibility: rho >= eps and rho*e >= eps (closed set).
inline bool in_G_eps(const ConsState& U, double eps) {
    return U.rho >= eps && rho_e(U) >= eps;
}

/// Columns of the advective flux F^a = [rho u, rho u (x) u + p I, (E+p) u].
/// flux[a] is the flux of [rho, m.x, m.y, E] in direction a.
inline void advective_flux(const ConsState& U, const GasParams& gas,
                           std::array<std::array<double, 4>, 2>& flux, int dim) {
    const double p = pressure(U, gas);
    const Vec2 u{U.m.x / U.rho, U.m.y / U.rho};
    for (int a = 0; a < dim; ++a) {
        const double ua = u[a];
        flux[a][0] = U.m[a];
        flux[a][1] = U.m.x * ua;
        flux[a][2] = U.m.y * ua;
        flux[a][3] = (U.E + p) * ua;
    }
    for (int a = 0; a < dim; ++a) flux[a][1 + a] += p;
}

/// Wave speed |u.n| + sqrt(gamma p / rho) of a single state.
inline double wave_speed(const ConsState& U, const Vec2& n, const GasParams& gas) {
    if (!(U.rho > 0.0)) throw NonAdmissibleError("wave_speed: non-positive density");
    const double re = rho_e(U);
    if (!(re > 0.0)) throw NonAdmissibleError("wave_speed: non-positive internal energy");
    const double p = (gas.gamma - 1.0) * re;
    const double un = (U.m.x * n.x + U.m.y * n.y) / U.rho;
    return std::abs(un) + std::sqrt(gas.gamma * p / U.rho);
}

/// Maximum wave speed over the two traces of a face.
inline double max_wave_speed(const ConsState& Um, const ConsState& Up, const Vec2& n,
                             const GasParams& gas) {
    return std::max(wave_speed(Um, n, gas), wave_speed(Up, n, gas));
}

/// Local Lax-Friedrichs flux
///   0.5 (F(U-) + F(U+)) . n - (alpha/2) (U+ - U-).
inline std::array<double, 4> lax_friedrichs_flux(const ConsState& Um, const ConsState& Up,
                                                 const Vec2& n, double alpha,
                                                 const GasParams& gas, int dim) {
    std::array<std::array<double, 4>, 2> Fm, Fp;
    advective_flux(Um, gas, Fm, dim);
    advective_flux(Up, gas, Fp, dim);
    const std::array<double, 4> dU{Up.rho - Um.rho, Up.m.x - Um.m.x, Up.m.y - Um.m.y,
                                   Up.E - Um.E};
    std::array<double, 4> out;
    for (int v = 0; v < 4; ++v) {
        double fn = 0.0;
        for (int a = 0; a < dim; ++a) fn += 0.5 * (Fm[a][v] + Fp[a][v]) * n[a];
        out[v] = fn - 0.5 * alpha * dU[v];
    }
    return out;
}

} // namespace cnsdg

#endif
