#pragma once

#include <vector>

namespace ulr {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre on [-1, 1], nodes ascending.
QuadratureRule gauss_legendre(int count);

// Clenshaw-Curtis on the n + 1 Chebyshev-Lobatto points cos(k pi / n),
// k = 0..n (nodes descending from 1 to -1).
QuadratureRule clenshaw_curtis(int n);

// Interpolatory rule on the n points cos(k pi / n), k = 0..n-1: the
// Clenshaw-Curtis rule with its x = -1 node folded back onto the remaining
// nodes through the Lagrange basis, so it stays exact for degree n - 1.
// For even n the weight at x = 1 vanishes identically.
QuadratureRule chebyshev_open_end(int n);

}  // namespace ulr
