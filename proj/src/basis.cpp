#include "cnsdg/basis.hpp"

#include <cmath>

namespace cnsdg {

NodalBasis::NodalBasis(int k_, int dim_) : k(k_), dim(dim_) {
    if (k < 1 || k > 3) throw UnsupportedOrderError("NodalBasis: k must be in {1, 2, 3}");
    if (dim < 1 || dim > 2) throw UnsupportedOrderError("NodalBasis: dim must be 1 or 2");
    gl = gauss_lobatto_rule(k + 1);
}

Vec2 NodalBasis::node(int j) const {
    if (dim == 1) return {gl.points[j], 0.0};
    return {gl.points[j % n1()], gl.points[j / n1()]};
}

double NodalBasis::node_weight(int j) const {
    if (dim == 1) return gl.weights[j];
    return gl.weights[j % n1()] * gl.weights[j / n1()];
}

double NodalBasis::eval1d(int j, double x) const {
    double v = 1.0;
    for (int i = 0; i < n1(); ++i) {
        if (i == j) continue;
        v *= (x - gl.points[i]) / (gl.points[j] - gl.points[i]);
    }
    return v;
}

double NodalBasis::grad1d(int j, double x) const {
    double v = 0.0;
    for (int l = 0; l < n1(); ++l) {
        if (l == j) continue;
        double term = 1.0 / (gl.points[j] - gl.points[l]);
        for (int i = 0; i < n1(); ++i) {
            if (i == j || i == l) continue;
            term *= (x - gl.points[i]) / (gl.points[j] - gl.points[i]);
        }
        v += term;
    }
    return v;
}

double NodalBasis::basis_eval(int j, const Vec2& xhat) const {
    if (dim == 1) return eval1d(j, xhat.x);
    return eval1d(j % n1(), xhat.x) * eval1d(j / n1(), xhat.y);
}

Vec2 NodalBasis::basis_grad(int j, const Vec2& xhat) const {
    if (dim == 1) return {grad1d(j, xhat.x), 0.0};
    const int a = j % n1(), b = j / n1();
    return {grad1d(a, xhat.x) * eval1d(b, xhat.y), eval1d(a, xhat.x) * grad1d(b, xhat.y)};
}

PointSets build_point_sets(int k, int dim) {
    if (k < 1 || k > 3) throw UnsupportedOrderError("build_point_sets: k must be in {1, 2, 3}");
    PointSets ps;
    ps.k = k;
    ps.dim = dim;
    ps.N = (k + 3 + 1) / 2; // smallest N with 2N - 3 >= k
    ps.omega_hat = 1.0 / (ps.N * (ps.N - 1.0));

    const QuadRule1D gl = gauss_lobatto_rule(k + 1);
    const QuadRule1D gauss = gauss_rule(k + 1); // 2(k+1)-1 = 2k+1 exact
    const QuadRule1D lob_aux = gauss_lobatto_rule(ps.N);

    if (dim == 1) {
        for (int a = 0; a <= k; ++a) ps.s_p.push_back({gl.points[a], 0.0});
        for (int g = 0; g <= k; ++g) {
            ps.s_h_vol.push_back({gauss.points[g], 0.0});
            ps.s_h_vol_w.push_back(gauss.weights[g]);
        }
        ps.s_h_face = {{{-0.5, 0.0}}, {{0.5, 0.0}}};
        ps.face_qw = {1.0};
        for (int m = 1; m < ps.N - 1; ++m) ps.s_h_aux.push_back({lob_aux.points[m], 0.0});
        return ps;
    }

    for (int b = 0; b <= k; ++b)
        for (int a = 0; a <= k; ++a) ps.s_p.push_back({gl.points[a], gl.points[b]});
    for (int gy = 0; gy <= k; ++gy)
        for (int gx = 0; gx <= k; ++gx) {
            ps.s_h_vol.push_back({gauss.points[gx], gauss.points[gy]});
            ps.s_h_vol_w.push_back(gauss.weights[gx] * gauss.weights[gy]);
        }
    ps.s_h_face.resize(4);
    for (int g = 0; g <= k; ++g) {
        ps.s_h_face[0].push_back({-0.5, gauss.points[g]});
        ps.s_h_face[1].push_back({0.5, gauss.points[g]});
        ps.s_h_face[2].push_back({gauss.points[g], -0.5});
        ps.s_h_face[3].push_back({gauss.points[g], 0.5});
        ps.face_qw.push_back(gauss.weights[g]);
    }
    // Gauss (x) Lobatto and Lobatto (x) Gauss, interior Lobatto coordinates only.
    for (int m = 1; m < ps.N - 1; ++m)
        for (int g = 0; g <= k; ++g) {
            ps.s_h_aux.push_back({gauss.points[g], lob_aux.points[m]});
            ps.s_h_aux.push_back({lob_aux.points[m], gauss.points[g]});
        }
    return ps;
}

ElementTables::ElementTables(int k, int dim)
    : basis(k, dim), pts(build_point_sets(k, dim)), k_(k), dim_(dim) {
    const int nl = nloc();

    node_w_.resize(nl);
    for (int j = 0; j < nl; ++j) node_w_[j] = basis.node_weight(j);

    const int nvq = n_vol_q();
    eval_vol_.resize(nvq * nl);
    grad_vol_.resize(nvq * nl * 2);
    for (int p = 0; p < nvq; ++p)
        for (int j = 0; j < nl; ++j) {
            eval_vol_[p * nl + j] = basis.basis_eval(j, pts.s_h_vol[p]);
            const Vec2 g = basis.basis_grad(j, pts.s_h_vol[p]);
            grad_vol_[(p * nl + j) * 2 + 0] = g.x;
            grad_vol_[(p * nl + j) * 2 + 1] = g.y;
        }

    eval_face_.resize(n_faces());
    for (int f = 0; f < n_faces(); ++f) {
        eval_face_[f].resize(n_face_q() * nl);
        for (int q = 0; q < n_face_q(); ++q)
            for (int j = 0; j < nl; ++j)
                eval_face_[f][q * nl + j] = basis.basis_eval(j, pts.s_h_face[f][q]);
    }

    // Stacked check rows: S_H = volume + face + aux points.
    std::vector<Vec2> check;
    check.insert(check.end(), pts.s_h_vol.begin(), pts.s_h_vol.end());
    for (const auto& fpts : pts.s_h_face) check.insert(check.end(), fpts.begin(), fpts.end());
    check.insert(check.end(), pts.s_h_aux.begin(), pts.s_h_aux.end());
    n_check_ = static_cast<int>(check.size());
    eval_check_.resize(n_check_ * nl);
    for (int p = 0; p < n_check_; ++p)
        for (int j = 0; j < nl; ++j) eval_check_[p * nl + j] = basis.basis_eval(j, check[p]);

    const int n1d = n1();
    dmat1_.resize(n1d * n1d);
    for (int m = 0; m < n1d; ++m)
        for (int j = 0; j < n1d; ++j) dmat1_[m * n1d + j] = basis.grad1d(j, basis.gl.points[m]);

    face_nodes_.resize(n_faces());
    grad_face_node_.resize(n_faces());
    for (int f = 0; f < n_faces(); ++f) {
        const int axis = f / 2, side = f % 2;
        const int edge = side == 0 ? 0 : k;
        if (dim == 1) {
            face_nodes_[f] = {edge};
        } else if (axis == 0) {
            for (int b = 0; b < n1d; ++b) face_nodes_[f].push_back(edge + n1d * b);
        } else {
            for (int a = 0; a < n1d; ++a) face_nodes_[f].push_back(a + n1d * edge);
        }
        const int nq = static_cast<int>(face_nodes_[f].size());
        grad_face_node_[f].resize(nq * nl * 2);
        for (int q = 0; q < nq; ++q) {
            const Vec2 x = basis.node(face_nodes_[f][q]);
            for (int j = 0; j < nl; ++j) {
                const Vec2 g = basis.basis_grad(j, x);
                grad_face_node_[f][(q * nl + j) * 2 + 0] = g.x;
                grad_face_node_[f][(q * nl + j) * 2 + 1] = g.y;
            }
        }
    }
}

} // namespace cnsdg
