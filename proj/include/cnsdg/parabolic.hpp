/// @file parabolic.hpp
/// @brief Weak forms of the parabolic subproblem: NIPG momentum system,
/// IIPG / spectral-element internal-energy system, right-hand-side
/// functionals, and the nodal L2 projections. All integrals use the tensor
/// (k+1)-point Gauss-Lobatto rule, which makes mass matrices diagonal and
/// projections nodal algebra.

#ifndef CNSDG_PARABOLIC_HPP
#define CNSDG_PARABOLIC_HPP

#include "cnsdg/field.hpp"
#include "cnsdg/linalg.hpp"

#include <functional>
#include <memory>

namespace cnsdg {

enum class EnergyVariant { Q1_IIPG, SEM };

struct IPDGParams {
    double sigma_int = 2.0;  ///< NIPG penalty on interior faces
    double sigma_bdy = 4.0;  ///< NIPG penalty on Dirichlet boundary faces
    double sigma_tilde = 2.0; ///< IIPG penalty
    EnergyVariant energy_variant = EnergyVariant::Q1_IIPG;

    static IPDGParams defaults_for_degree(int k) {
        IPDGParams p;
        if (k >= 2) {
            p.sigma_int = 0.0; // NIPG0
            p.sigma_bdy = 0.0;
            p.energy_variant = EnergyVariant::SEM;
        }
        return p;
    }
};

/// Gauss-Lobatto nodal fields of the parabolic subproblem. Velocity
/// components are interleaved per node, matching the momentum dof layout.
struct NodalFields {
    std::vector<double> rho; ///< n_cells * nloc
    std::vector<double> u;   ///< n_cells * nloc * dim
    std::vector<double> e;   ///< n_cells * nloc
};

/// Nodewise u = m / rho, e = E / rho - |u|^2 / 2.
NodalFields project_forward(const DGField& U);

/// Nodewise m = rho u, E = rho e + rho |u|^2 / 2.
DGField project_backward(const Mesh& mesh, const ElementTables& tables,
                         const std::vector<double>& rho, const std::vector<double>& u,
                         const std::vector<double>& e);

/// Jensen check: every reconstructed cell average is in G^eps given nodal
/// positivity. Returns per-cell flags; n_bad counts failures.
std::vector<char> cell_average_admissible_after_parabolic(
    const Mesh& mesh, const ElementTables& tables, const std::vector<double>& rho,
    const std::vector<double>& u, const std::vector<double>& e, double eps, int* n_bad = nullptr);

/// Continuous-space dof map for the spectral-element energy system.
struct SemDofMap {
    int n_dofs = 0;
    std::vector<int> node_dof;      ///< (cell * nloc + j) -> global dof
    std::vector<int> dof_rep_node;  ///< one representative cell*nloc+j per dof
    std::vector<char> dof_dirichlet;
    std::vector<int> dof_dirichlet_seg; ///< segment supplying the data, or -1
};

SemDofMap build_sem_dof_map(const Mesh& mesh, const ElementTables& tables);

struct LinearSystem {
    SparseMatrix A;
    Vector b;
};

enum class SolverKind { Auto, Direct, Krylov };

struct SolverPolicy {
    SolverKind kind = SolverKind::Auto;
    int direct_threshold = 200000; ///< Auto: direct at or below, Krylov above
    double tol = 1e-12;
};

/// Parabolic forcing of the manufactured-solution study: S_P for momentum
/// and the internal-energy equation, evaluated at the implicit time level.
struct ParabolicForcing {
    std::function<Vec2(const Vec2&, double)> momentum;
    std::function<double(const Vec2&, double)> energy;
};

struct ParabolicReport {
    double min_e = 0.0;
    int argmin_cell = -1;
    int argmin_node = -1;
    int momentum_iterations = 0;
    int energy_iterations = 0;
    bool negative_energy() const { return !(min_e > 0.0); }
};

/// Holds the constant stiffness parts (geometry and penalties only); the
/// per-step systems add the density-weighted diagonal mass.
class ParabolicOperator {
public:
    ParabolicOperator(const Mesh& mesh, const ElementTables& tables, const GasParams& gas,
                      const IPDGParams& params);

    const Mesh& mesh() const { return *mesh_; }
    const IPDGParams& params() const { return params_; }
    const SemDofMap& sem_map() const { return sem_map_; }
    int momentum_dofs() const;
    int energy_dofs() const;

    /// System matrix rho-mass + (dt/2Re) A_eps + (dt/3Re) A_lambda and RHS
    /// rho-mass * u_H + (dt/2Re) b_tau [+ (dt/2) <S_P,m, theta>].
    LinearSystem assemble_momentum(const std::vector<double>& rho, const std::vector<double>& u_H,
                                   double dt, double t_impl,
                                   const ParabolicForcing* forcing = nullptr) const;

    /// Energy system A_M + (dt lambda / Re) A_D (or the SEM analogue) with
    /// RHS B_M + (dt/Re) B_eps + (2dt/3Re) B_lambda + (dt lambda/Re) B_D
    /// [+ dt <S_P,e, chi>]. For SEM the dofs are the continuous ones.
    LinearSystem assemble_energy_system(const std::vector<double>& rho,
                                        const std::vector<double>& e_H,
                                        const std::vector<double>& u_star, double dt,
                                        double t_impl,
                                        const ParabolicForcing* forcing = nullptr) const;

    /// Full Step 3: momentum solve, u_P = 2 u_star - u_H, energy solve.
    ParabolicReport solve_parabolic_step(const std::vector<double>& rho,
                                         const std::vector<double>& u_H,
                                         const std::vector<double>& e_H, double dt,
                                         double t_impl, const SolverPolicy& policy,
                                         std::vector<double>& u_P, std::vector<double>& e_P,
                                         const ParabolicForcing* forcing = nullptr) const;

    /// Bare-form assemblies for verification (fresh matrices, small meshes).
    SparseMatrix build_a_eps() const;
    SparseMatrix build_a_lambda() const;
    SparseMatrix build_a_D() const;   ///< IIPG energy stiffness on DG dofs
    SparseMatrix build_a_sem() const; ///< SEM stiffness on continuous dofs
    Vector b_eps(const std::vector<double>& u_star, double t_impl = 0.0) const;
    Vector b_lambda(const std::vector<double>& u_star) const;
    Vector b_tau(double t_impl) const;
    Vector b_D(double t_impl) const;

    /// Diagonal rho-weighted Gauss-Lobatto mass on the energy dofs.
    Vector energy_mass_diag(const std::vector<double>& rho) const;

private:
    const Mesh* mesh_;
    const ElementTables* tables_;
    GasParams gas_;
    IPDGParams params_;
    SemDofMap sem_map_;
    SparseMatrix k_mom_; ///< A_eps/2 + A_lambda/3
    SparseMatrix k_energy_; ///< A_D (IIPG) or SEM stiffness
    std::vector<int> diag_mom_, diag_energy_; ///< CSR positions of diagonals
    std::vector<double> grad_node_; ///< reference grad of phi_j at GL node m
    bool has_dirichlet_ = false;

    double grad_at_node(int m, int j, int c) const {
        return grad_node_[(static_cast<size_t>(m) * tables_->nloc() + j) * 2 + c];
    }
    void velocity_gradient(const std::vector<double>& u, int cell, int node,
                           double grad[2][2]) const;
    void assemble_momentum_stiffness(double w_eps, double w_lambda,
                                     std::vector<Triplet>& out) const;
    void dirichlet_data(int seg, const Vec2& x, double t, Vec2& u_D, double& e_D) const;
};

/// Diagnostic of Lemma-3 type: all RHS entries positive; reports the minimum.
struct RhsCheck {
    bool all_positive = false;
    double min_entry = 0.0;
    int argmin = -1;
};
RhsCheck energy_rhs_nonneg_check(const Vector& rhs);

/// Solves with the configured policy (Auto: direct below the threshold).
Vector solve_system(const SparseMatrix& A, const Vector& b, bool symmetric,
                    const SolverPolicy& policy, const Vector* guess = nullptr,
                    int* iterations = nullptr);

} // namespace cnsdg

#endif
