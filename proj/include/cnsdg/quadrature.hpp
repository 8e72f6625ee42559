/// @file quadrature.hpp
/// @brief One-dimensional Gauss and Gauss-Lobatto rules on the reference
/// interval [-1/2, 1/2]. Nodes are found by Newton iteration on Legendre
/// polynomials at construction time; weights sum to one.

#ifndef CNSDG_QUADRATURE_HPP
#define CNSDG_QUADRATURE_HPP

#include <vector>

namespace cnsdg {

struct QuadRule1D {
    std::vector<double> points;  ///< abscissae in [-1/2, 1/2], ascending
    std::vector<double> weights; ///< positive, summing to 1

    int size() const { return static_cast<int>(points.size()); }
};

/// n-point Gauss rule, exact for polynomials of degree 2n-1. 1 <= n <= 8.
QuadRule1D gauss_rule(int n);

/// n-point Gauss-Lobatto rule including both endpoints,
/// exact for polynomials of degree 2n-3. 2 <= n <= 6.
QuadRule1D gauss_lobatto_rule(int n);

} // namespace cnsdg

#endif
