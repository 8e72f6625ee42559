/// @file basis.hpp
/// @brief Tensor-product Lagrange nodal bases on the reference element
/// [-1/2, 1/2]^d with Gauss-Lobatto nodes, the quadrature-point families used
/// by the hyperbolic and parabolic subproblems, and precomputed evaluation
/// tables shared by residual assembly, limiting, and IPDG assembly.

#ifndef CNSDG_BASIS_HPP
#define CNSDG_BASIS_HPP

#include "cnsdg/quadrature.hpp"
#include "cnsdg/types.hpp"

#include <vector>

namespace cnsdg {

/// Q^k Lagrange basis at (k+1)^d tensor Gauss-Lobatto nodes.
/// Node ordering is lexicographic with x fastest: j = a + (k+1) b.
struct NodalBasis {
    int k = 1;
    int dim = 2;
    QuadRule1D gl; ///< (k+1)-point Gauss-Lobatto rule: nodes double as S_P

    NodalBasis() = default;
    NodalBasis(int k_, int dim_);

    int n1() const { return k + 1; }
    int nloc() const { return dim == 1 ? n1() : n1() * n1(); }

    Vec2 node(int j) const;
    double node_weight(int j) const; ///< tensor Gauss-Lobatto weight, sums to 1

    double eval1d(int j, double x) const;
    double grad1d(int j, double x) const;

    double basis_eval(int j, const Vec2& xhat) const;
    Vec2 basis_grad(int j, const Vec2& xhat) const;
};

/// The four quadrature-point families on the reference element.
/// Faces are indexed f = 2*axis + side with side 0 at -1/2 and 1 at +1/2.
struct PointSets {
    int k = 1;
    int dim = 2;
    int N = 2;              ///< smallest integer with 2N-3 >= k
    double omega_hat = 0.5; ///< 1 / (N (N-1))

    std::vector<Vec2> s_p;                  ///< tensor Gauss-Lobatto = basis nodes
    std::vector<Vec2> s_h_vol;              ///< tensor Gauss, exact to degree 2k+1
    std::vector<double> s_h_vol_w;          ///< matching tensor weights (sum 1)
    std::vector<std::vector<Vec2>> s_h_face; ///< per face, (k+1)^{d-1} Gauss points
    std::vector<double> face_qw;            ///< Gauss weights along a face ({1} in 1D)
    std::vector<Vec2> s_h_aux;              ///< interior weak-positivity points
};

PointSets build_point_sets(int k, int dim);

/// Precomputed evaluation tables for one (k, dim) discretization.
class ElementTables {
public:
    ElementTables(int k, int dim);

    int k() const { return k_; }
    int dim() const { return dim_; }
    int n1() const { return basis.n1(); }
    int nloc() const { return basis.nloc(); }
    int nvar() const { return dim_ + 2; }
    int n_faces() const { return 2 * dim_; }
    int n_face_q() const { return static_cast<int>(pts.face_qw.size()); }
    int n_vol_q() const { return static_cast<int>(pts.s_h_vol.size()); }
    int n_check() const { return n_check_; }

    NodalBasis basis;
    PointSets pts;

    /// Tensor Gauss-Lobatto node weight of local node j.
    double node_w(int j) const { return node_w_[j]; }

    /// phi_j at volume Gauss point p: eval_vol[p * nloc + j].
    const std::vector<double>& eval_vol() const { return eval_vol_; }
    /// reference gradient of phi_j at volume Gauss point p, component c:
    /// grad_vol[(p * nloc + j) * 2 + c].
    const std::vector<double>& grad_vol() const { return grad_vol_; }
    /// phi_j at face-quadrature point q of face f: eval_face[f][q * nloc + j].
    const std::vector<std::vector<double>>& eval_face() const { return eval_face_; }
    /// Rows for every S_H check point (volume, then faces, then aux):
    /// eval_check[p * nloc + j].
    const std::vector<double>& eval_check() const { return eval_check_; }

    /// 1D differentiation matrix at the Gauss-Lobatto nodes: dmat1[m * n1 + j].
    const std::vector<double>& dmat1() const { return dmat1_; }
    /// Local node indices lying on face f, ordered by the transverse index.
    const std::vector<std::vector<int>>& face_nodes() const { return face_nodes_; }
    /// Reference gradient of phi_j at face node q of face f:
    /// grad_face_node[f][(q * nloc + j) * 2 + c].
    const std::vector<std::vector<double>>& grad_face_node() const { return grad_face_node_; }

private:
    int k_, dim_, n_check_;
    std::vector<double> node_w_;
    std::vector<double> eval_vol_, grad_vol_;
    std::vector<std::vector<double>> eval_face_;
    std::vector<double> eval_check_;
    std::vector<double> dmat1_;
    std::vector<std::vector<int>> face_nodes_;
    std::vector<std::vector<double>> grad_face_node_;
};

} // namespace cnsdg

#endif
