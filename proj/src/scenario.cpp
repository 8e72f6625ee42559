#include "cnsdg/scenario.hpp"

#include <cmath>

namespace cnsdg {

namespace {

constexpr double kPi = 3.14159265358979323846;

// All first and second derivatives of the prescribed smooth fields.
struct MmsPoint {
    double rho, rho_t, rho_x, rho_y;
    double u1, u1_t, u1_x, u1_y, u1_xx, u1_yy, u1_xy;
    double u2, u2_t, u2_x, u2_y, u2_xx, u2_yy, u2_xy;
    double e, e_t, e_x, e_y, e_xx, e_yy;
};

MmsPoint mms_point(const Vec2& p, double t) {
    const double A = std::exp(-t);
    const double sx = std::sin(2 * kPi * p.x), cx = std::cos(2 * kPi * p.x);
    const double sy = std::sin(2 * kPi * p.y), cy = std::cos(2 * kPi * p.y);
    const double sp = std::sin(2 * kPi * (p.x + p.y)), cp = std::cos(2 * kPi * (p.x + p.y));
    const double w = 2 * kPi, w2 = w * w;
    MmsPoint m{};
    m.rho = A * sp + 2.0;
    m.rho_t = -A * sp;
    m.rho_x = w * A * cp;
    m.rho_y = w * A * cp;

    m.u1 = A * cx * sy + 2.0;
    m.u1_t = -A * cx * sy;
    m.u1_x = -w * A * sx * sy;
    m.u1_y = w * A * cx * cy;
    m.u1_xx = -w2 * A * cx * sy;
    m.u1_yy = -w2 * A * cx * sy;
    m.u1_xy = -w2 * A * sx * cy;

    m.u2 = A * sx * cy + 2.0;
    m.u2_t = -A * sx * cy;
    m.u2_x = w * A * cx * cy;
    m.u2_y = -w * A * sx * sy;
    m.u2_xx = -w2 * A * sx * cy;
    m.u2_yy = -w2 * A * sx * cy;
    m.u2_xy = -w2 * A * cx * sy;

    m.e = 0.5 * A * cx * cy + 1.0;
    m.e_t = -0.5 * A * cx * cy;
    m.e_x = -kPi * A * sx * cy;
    m.e_y = -kPi * A * cx * sy;
    m.e_xx = -2 * kPi * kPi * A * cx * cy;
    m.e_yy = -2 * kPi * kPi * A * cx * cy;
    return m;
}

} // namespace

void MmsSolution::primitives(const Vec2& x, double t, double& rho, Vec2& u, double& e) const {
    const MmsPoint m = mms_point(x, t);
    rho = m.rho;
    u = {m.u1, m.u2};
    e = m.e;
}

ConsState MmsSolution::exact_state(const Vec2& x, double t) const {
    const MmsPoint m = mms_point(x, t);
    ConsState s;
    s.rho = m.rho;
    s.m = {m.rho * m.u1, m.rho * m.u2};
    s.E = m.rho * m.e + 0.5 * m.rho * (m.u1 * m.u1 + m.u2 * m.u2);
    return s;
}

std::array<double, 4> MmsSolution::hyperbolic_forcing(const Vec2& x, double t) const {
    const MmsPoint m = mms_point(x, t);
    const double g1 = gas_.gamma - 1.0;
    const double p = g1 * m.rho * m.e;
    const double p_x = g1 * (m.rho_x * m.e + m.rho * m.e_x);
    const double p_y = g1 * (m.rho_y * m.e + m.rho * m.e_y);
    const double q2 = m.u1 * m.u1 + m.u2 * m.u2;

    const double s_rho =
        m.rho_t + m.rho_x * m.u1 + m.rho * m.u1_x + m.rho_y * m.u2 + m.rho * m.u2_y;
    const double s_m1 = m.rho_t * m.u1 + m.rho * m.u1_t + m.rho_x * m.u1 * m.u1 +
                        2.0 * m.rho * m.u1 * m.u1_x + p_x + m.rho_y * m.u1 * m.u2 +
                        m.rho * (m.u1_y * m.u2 + m.u1 * m.u2_y);
    const double s_m2 = m.rho_t * m.u2 + m.rho * m.u2_t + m.rho_x * m.u1 * m.u2 +
                        m.rho * (m.u1_x * m.u2 + m.u1 * m.u2_x) + m.rho_y * m.u2 * m.u2 +
                        2.0 * m.rho * m.u2 * m.u2_y + p_y;

    const double E = m.rho * m.e + 0.5 * m.rho * q2;
    const double E_t = m.rho_t * m.e + m.rho * m.e_t + 0.5 * m.rho_t * q2 +
                       m.rho * (m.u1 * m.u1_t + m.u2 * m.u2_t);
    const double E_x = m.rho_x * m.e + m.rho * m.e_x + 0.5 * m.rho_x * q2 +
                       m.rho * (m.u1 * m.u1_x + m.u2 * m.u2_x);
    const double E_y = m.rho_y * m.e + m.rho * m.e_y + 0.5 * m.rho_y * q2 +
                       m.rho * (m.u1 * m.u1_y + m.u2 * m.u2_y);
    const double s_E = E_t + (E_x + p_x) * m.u1 + (E + p) * m.u1_x + (E_y + p_y) * m.u2 +
                       (E + p) * m.u2_y;
    return {s_rho, s_m1, s_m2, s_E};
}

Vec2 MmsSolution::momentum_forcing(const Vec2& x, double t) const {
    const MmsPoint m = mms_point(x, t);
    const double div_tau_1 =
        (4.0 / 3.0) * m.u1_xx + m.u1_yy + (1.0 / 3.0) * m.u2_xy;
    const double div_tau_2 =
        m.u2_xx + (4.0 / 3.0) * m.u2_yy + (1.0 / 3.0) * m.u1_xy;
    return {-div_tau_1 / gas_.reynolds, -div_tau_2 / gas_.reynolds};
}

double MmsSolution::energy_forcing(const Vec2& x, double t) const {
    const MmsPoint m = mms_point(x, t);
    const double tau11 = (4.0 / 3.0) * m.u1_x - (2.0 / 3.0) * m.u2_y;
    const double tau22 = (4.0 / 3.0) * m.u2_y - (2.0 / 3.0) * m.u1_x;
    const double tau12 = m.u1_y + m.u2_x;
    const double tau_grad_u = tau11 * m.u1_x + tau12 * (m.u1_y + m.u2_x) + tau22 * m.u2_y;
    const double lap_e = m.e_xx + m.e_yy;
    return -(gas_.lambda() / gas_.reynolds) * lap_e - tau_grad_u / gas_.reynolds;
}

std::array<double, 4> MmsSolution::ns_residual(const Vec2& x, double t) const {
    const auto sh = hyperbolic_forcing(x, t);
    const Vec2 sm = momentum_forcing(x, t);
    const double se = energy_forcing(x, t);
    const MmsPoint m = mms_point(x, t);
    // S_P for total energy: S_P,E = S_P,e + u . S_P,m.
    const double spE = se + m.u1 * sm.x + m.u2 * sm.y;
    return {sh[0], sh[1] + sm.x, sh[2] + sm.y, sh[3] + spE};
}

// ---------------------------------------------------------------------------

const ScenarioPreset& ScenarioSpec::preset_for_degree(int k) const {
    const ScenarioPreset* fallback = nullptr;
    for (const auto& p : presets) {
        if (p.k == k) return p;
        if (!fallback) fallback = &p;
    }
    if (!fallback) throw ConfigError("scenario '" + name + "' has no presets");
    return *fallback;
}

ConsState normal_shock_post_state(double mach, double rho_pre, double p_pre, const Vec2& n,
                                  const GasParams& gas) {
    const double g = gas.gamma;
    const double c_pre = std::sqrt(g * p_pre / rho_pre);
    const double s = mach * c_pre;
    const double rho_post = rho_pre * ((g + 1.0) * mach * mach) / ((g - 1.0) * mach * mach + 2.0);
    const double p_post = p_pre * (1.0 + 2.0 * g * (mach * mach - 1.0) / (g + 1.0));
    const Vec2 u_post = s * (1.0 - rho_pre / rho_post) * n;
    return cons_from_primitive(rho_post, u_post, p_post, gas);
}

namespace {

HyperbolicBC hyp_inflow(const ConsState& s) {
    HyperbolicBC bc;
    bc.kind = HypBCKind::Inflow;
    bc.inflow = [s](const Vec2&, double) { return s; };
    return bc;
}

HyperbolicBC hyp_simple(HypBCKind kind) {
    HyperbolicBC bc;
    bc.kind = kind;
    return bc;
}

HyperbolicBC hyp_moving_shock(const MovingShockDescriptor& d) {
    HyperbolicBC bc;
    bc.kind = HypBCKind::MovingShock;
    bc.shock = d;
    return bc;
}

ParabolicBC par_neumann() { return ParabolicBC{ParBCKind::Neumann, nullptr}; }

ParabolicBC par_dirichlet(Vec2 u, double e) {
    ParabolicBC bc;
    bc.kind = ParBCKind::Dirichlet;
    bc.dirichlet = [u, e](const Vec2&, double, Vec2& uD, double& eD) {
        uD = u;
        eD = e;
    };
    return bc;
}

ScenarioSpec make_mms(bool periodic) {
    ScenarioSpec sc;
    sc.name = periodic ? "mms-periodic" : "mms";
    sc.description = periodic
        ? "smooth manufactured fields on the periodic unit square (conservation checks)"
        : "smooth manufactured fields on the unit square, Dirichlet boundaries (accuracy study)";
    sc.dim = 2;
    sc.gamma = 1.4;
    sc.prandtl = 1.4; // lambda = gamma / Pr = 1
    sc.forcing_default = true;
    sc.domain.dim = 2;
    sc.domain.rectangles = {{{0, 0}, {1, 1}}};
    GasParams gas(sc.gamma, sc.prandtl, 1.0);
    auto mms = std::make_shared<MmsSolution>(gas);
    sc.mms = mms;
    if (periodic) {
        sc.domain.periodic = {true, true};
    } else {
        HyperbolicBC hyp;
        hyp.kind = HypBCKind::Inflow;
        hyp.inflow = [mms](const Vec2& x, double t) { return mms->exact_state(x, t); };
        ParabolicBC par;
        par.kind = ParBCKind::Dirichlet;
        par.dirichlet = [mms](const Vec2& x, double t, Vec2& uD, double& eD) {
            double rho;
            mms->primitives(x, t, rho, uD, eD);
        };
        sc.domain.segments = {
            {{0, 0}, {0, 1}, hyp, par}, // left
            {{1, 0}, {1, 1}, hyp, par}, // right
            {{0, 0}, {1, 0}, hyp, par}, // bottom
            {{0, 1}, {1, 1}, hyp, par}, // top
        };
    }
    sc.initial = [mms](const Vec2& x) { return mms->exact_state(x, 0.0); };
    sc.presets = {{1, 1.0 / 32, 0.25, 1.0, 0.1024},
                  {2, 1.0 / 32, 0.25, 1.0, 0.1024},
                  {3, 1.0 / 8, 0.25, 1.0, 0.1024}};
    return sc;
}

ScenarioSpec make_riemann_1d(const std::string& name, double x_split, Vec2 xlim,
                             double rl, double ul, double pl, double rr, double ur, double pr,
                             double end_time, const std::string& desc) {
    ScenarioSpec sc;
    sc.name = name;
    sc.description = desc;
    sc.dim = 1;
    sc.domain.dim = 1;
    sc.domain.rectangles = {{{xlim.x, 0}, {xlim.y, 1}}};
    GasParams gas(sc.gamma, sc.prandtl, 1.0);
    const ConsState left = cons_from_primitive(rl, {ul, 0}, pl, gas);
    const ConsState right = cons_from_primitive(rr, {ur, 0}, pr, gas);
    const double el = pl / ((sc.gamma - 1.0) * rl), er = pr / ((sc.gamma - 1.0) * rr);
    sc.domain.segments = {
        {{xlim.x, 0}, {xlim.x, 0}, hyp_inflow(left), par_dirichlet({ul, 0}, el)},
        {{xlim.y, 0}, {xlim.y, 0}, hyp_inflow(right), par_dirichlet({ur, 0}, er)},
    };
    sc.initial = [x_split, left, right](const Vec2& x) {
        return x.x < x_split ? left : right;
    };
    const double width = xlim.y - xlim.x;
    sc.presets = {{1, width / 512, 0.125, 1000.0, end_time}};
    return sc;
}

ScenarioSpec make_sedov(bool desk, double dx) {
    ScenarioSpec sc;
    sc.name = desk ? "sedov-desk" : "sedov";
    sc.description = desk ? "Sedov blast wave, reduced mesh and horizon"
                          : "Sedov blast wave on [0,1.1]^2, corner energy deposition";
    sc.dim = 2;
    sc.domain.dim = 2;
    sc.domain.rectangles = {{{0, 0}, {1.1, 1.1}}};
    sc.domain.segments = {
        {{0, 0}, {0, 1.1}, hyp_simple(HypBCKind::Reflective), par_neumann()},   // left
        {{0, 0}, {1.1, 0}, hyp_simple(HypBCKind::Reflective), par_neumann()},   // bottom
        {{1.1, 0}, {1.1, 1.1}, hyp_simple(HypBCKind::Outflow), par_neumann()},  // right
        {{0, 1.1}, {1.1, 1.1}, hyp_simple(HypBCKind::Outflow), par_neumann()},  // top
    };
    const double corner_E = 0.244816 / (dx * dx);
    sc.initial = [dx, corner_E](const Vec2& x) {
        const bool corner = x.x < dx && x.y < dx;
        return ConsState{1.0, {0.0, 0.0}, corner ? corner_E : 1e-12};
    };
    if (desk)
        sc.presets = {{1, 1.1 / 80, 0.5, 200.0, 0.2}, {2, 1.1 / 80, 1.0, 200.0, 0.2}};
    else
        sc.presets = {{1, 1.1 / 320, 0.5, 200.0, 1.0},
                      {2, 1.1 / 320, 1.0, 200.0, 1.0},
                      {3, 1.1 / 320, 1.0, 200.0, 1.0}};
    return sc;
}

ScenarioSpec make_shock_diffraction() {
    ScenarioSpec sc;
    sc.name = "shock-diffraction";
    sc.description = "Mach 5.09 shock diffracting around a corner of an L-shaped channel";
    sc.dim = 2;
    sc.domain.dim = 2;
    sc.domain.rectangles = {{{0, 6}, {1, 12}}, {{1, 0}, {13, 12}}};
    GasParams gas(sc.gamma, sc.prandtl, 1.0);
    const ConsState pre = cons_from_primitive(1.4, {0, 0}, 1.0, gas);
    const ConsState post = normal_shock_post_state(5.09, 1.4, 1.0, {1, 0}, gas);
    MovingShockDescriptor shock;
    shock.post = post;
    shock.pre = pre;
    shock.a = 1.0;
    shock.b = 0.0;
    shock.c = -0.5;
    shock.speed = 5.09 * std::sqrt(gas.gamma * 1.0 / 1.4);
    sc.domain.segments = {
        {{0, 6}, {0, 12}, hyp_inflow(post), par_neumann()},                    // left inflow
        {{13, 0}, {13, 12}, hyp_simple(HypBCKind::Outflow), par_neumann()},    // right
        {{1, 0}, {13, 0}, hyp_simple(HypBCKind::Outflow), par_neumann()},      // bottom
        {{0, 6}, {1, 6}, hyp_simple(HypBCKind::Reflective), par_neumann()},    // wall y=6
        {{1, 0}, {1, 6}, hyp_simple(HypBCKind::Reflective), par_neumann()},    // wall x=1
        {{0, 12}, {13, 12}, hyp_moving_shock(shock), par_neumann()},           // top
    };
    sc.initial = [post, pre](const Vec2& x) { return x.x < 0.5 ? post : pre; };
    sc.presets = {{1, 1.0 / 96, 0.5, 1000.0, 2.3},
                  {2, 1.0 / 64, 1.0, 1000.0, 2.3},
                  {3, 1.0 / 64, 1.0, 1000.0, 2.3}};
    return sc;
}

MovingShockDescriptor mach10_shock(const GasParams& gas) {
    MovingShockDescriptor shock;
    shock.pre = cons_from_primitive(1.4, {0, 0}, 1.0, gas);
    shock.post = cons_from_primitive(
        8.0, {4.125 * std::sqrt(3.0), -4.125}, 116.5, gas);
    // 6x - 2 sqrt(3) y - 1 = 0 normalized so (a, b) is the unit shock normal
    shock.a = std::sqrt(3.0) / 2.0;
    shock.b = -0.5;
    shock.c = -std::sqrt(3.0) / 12.0;
    shock.speed = 10.0 * std::sqrt(gas.gamma * 1.0 / 1.4);
    return shock;
}

ScenarioSpec make_double_mach(bool desk) {
    ScenarioSpec sc;
    sc.name = desk ? "double-mach-desk" : "double-mach";
    sc.description = desk ? "double Mach reflection, reduced resolution"
                          : "double Mach reflection of a Mach 10 shock on [0,4]x[0,1]";
    sc.dim = 2;
    sc.domain.dim = 2;
    sc.domain.rectangles = {{{0, 0}, {4, 1}}};
    GasParams gas(sc.gamma, sc.prandtl, 1.0);
    const MovingShockDescriptor shock = mach10_shock(gas);
    const double x0 = 1.0 / 6.0;
    sc.domain.segments = {
        {{0, 0}, {0, 1}, hyp_inflow(shock.post), par_neumann()},                // left
        {{4, 0}, {4, 1}, hyp_simple(HypBCKind::Outflow), par_neumann()},        // right
        {{0, 0}, {x0, 0}, hyp_inflow(shock.post), par_neumann()},               // post-shock strip
        {{x0, 0}, {4, 0}, hyp_simple(HypBCKind::Reflective), par_neumann()},    // wall
        {{0, 1}, {4, 1}, hyp_moving_shock(shock), par_neumann()},               // top
    };
    sc.initial = [shock](const Vec2& x) { return shock.state_at(x, 0.0); };
    if (desk)
        sc.presets = {{3, 1.0 / 60, 1.0, 100.0, 0.2}};
    else
        sc.presets = {{1, 1.0 / 480, 0.5, 1000.0, 0.2},
                      {2, 1.0 / 240, 1.0, 1000.0, 0.2},
                      {3, 1.0 / 240, 1.0, 1000.0, 0.2}};
    return sc;
}

ScenarioSpec make_reflection_diffraction() {
    ScenarioSpec sc;
    sc.name = "reflection-diffraction";
    sc.description = "Mach 10 shock reflecting off a wall that ends in a backward step";
    sc.dim = 2;
    sc.domain.dim = 2;
    sc.domain.rectangles = {{{1, -1}, {4, 0}}, {{0, 0}, {4, 1}}};
    GasParams gas(sc.gamma, sc.prandtl, 1.0);
    const MovingShockDescriptor shock = mach10_shock(gas);
    const double x0 = 1.0 / 6.0;
    sc.domain.segments = {
        {{0, 0}, {0, 1}, hyp_inflow(shock.post), par_neumann()},                 // left
        {{4, -1}, {4, 1}, hyp_simple(HypBCKind::Outflow), par_neumann()},        // right
        {{1, -1}, {4, -1}, hyp_simple(HypBCKind::Outflow), par_neumann()},       // bottom
        {{0, 0}, {x0, 0}, hyp_inflow(shock.post), par_neumann()},                // post-shock strip
        {{x0, 0}, {1, 0}, hyp_simple(HypBCKind::Reflective), par_neumann()},     // wall y=0
        {{1, -1}, {1, 0}, hyp_simple(HypBCKind::Reflective), par_neumann()},     // wall x=1
        {{0, 1}, {4, 1}, hyp_moving_shock(shock), par_neumann()},                // top
    };
    sc.initial = [shock](const Vec2& x) { return shock.state_at(x, 0.0); };
    sc.presets = {{1, 1.0 / 480, 0.5, 1000.0, 0.2},
                  {2, 1.0 / 240, 1.0, 1000.0, 0.2},
                  {3, 1.0 / 120, 1.0, 1000.0, 0.2}};
    return sc;
}

} // namespace

std::vector<std::string> scenario_names() {
    return {"mms",   "mms-periodic",      "lax",         "double-rarefaction",
            "sedov", "sedov-desk",        "shock-diffraction", "double-mach",
            "double-mach-desk", "reflection-diffraction"};
}

ScenarioSpec make_scenario(const std::string& name, double dx) {
    if (name == "mms") return make_mms(false);
    if (name == "mms-periodic") return make_mms(true);
    if (name == "lax")
        return make_riemann_1d("lax", 0.0, {-5, 5}, 0.445, 0.698, 3.528, 0.5, 0.0, 0.571, 1.3,
                               "Lax shock tube on [-5,5], 512 cells");
    if (name == "double-rarefaction")
        return make_riemann_1d("double-rarefaction", 0.0, {-1, 1}, 7.0, -1.0, 0.2, 7.0, 1.0,
                               0.2, 0.6, "double rarefaction with near-vacuum core on [-1,1]");
    if (name == "sedov") return make_sedov(false, dx);
    if (name == "sedov-desk") return make_sedov(true, dx);
    if (name == "shock-diffraction") return make_shock_diffraction();
    if (name == "double-mach") return make_double_mach(false);
    if (name == "double-mach-desk") return make_double_mach(true);
    if (name == "reflection-diffraction") return make_reflection_diffraction();
    throw ConfigError("unknown scenario '" + name + "'");
}

} // namespace cnsdg
