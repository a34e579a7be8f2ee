#include "ulr/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "ulr/errors.hpp"

namespace ulr {

QuadratureRule gauss_legendre(int count) {
  if (count < 1) throw DomainError("gauss_legendre: count must be >= 1");
  // Legendre P_count and its derivative by the three-term recurrence.
  const auto legendre = [count](double x) {
    double p_prev = 1.0;
    double p = x;
    for (int k = 2; k <= count; ++k) {
      const double p_next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
      p_prev = p;
      p = p_next;
    }
    if (count == 1) p_prev = 1.0;
    return std::pair{p, count * (x * p - p_prev) / (x * x - 1.0)};
  };
  QuadratureRule rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  for (int i = 0; i < (count + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[count - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[count - 1 - i] = w;
  }
  return rule;
}

QuadratureRule clenshaw_curtis(int n) {
  if (n < 1) throw DomainError("clenshaw_curtis: n must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(n + 1);
  rule.weights.assign(n + 1, 0.0);
  for (int k = 0; k <= n; ++k) rule.nodes[k] = std::cos(std::numbers::pi * k / n);

  if (n % 2 == 0) {
    rule.weights[0] = rule.weights[n] = 1.0 / (static_cast<double>(n) * n - 1.0);
  } else {
    rule.weights[0] = rule.weights[n] = 1.0 / (static_cast<double>(n) * n);
  }
  for (int i = 1; i < n; ++i) {
    const double theta = std::numbers::pi * i / n;
    double v = 1.0;
    if (n % 2 == 0) {
      for (int k = 1; k < n / 2; ++k) v -= 2.0 * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
      v -= std::cos(n * theta) / (static_cast<double>(n) * n - 1.0);
    } else {
      for (int k = 1; k <= (n - 1) / 2; ++k) v -= 2.0 * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
    }
    rule.weights[i] = 2.0 * v / n;
  }
  return rule;
}

QuadratureRule chebyshev_open_end(int n) {
  if (n < 2) throw DomainError("chebyshev_open_end: n must be >= 2");
  const QuadratureRule full = clenshaw_curtis(n);
  // Barycentric weights of the Lobatto set are (-1)^k delta_k; dropping the
  // x = -1 node turns the Lagrange basis at x = -1 into lambda_k / sum(lambda).
  double lambda_sum = 0.0;
  std::vector<double> lambda(n);
  for (int k = 0; k < n; ++k) {
    lambda[k] = (k % 2 == 0 ? 1.0 : -1.0) * (k == 0 ? 0.5 : 1.0);
    lambda_sum += lambda[k];
  }
  QuadratureRule rule;
  rule.nodes.assign(full.nodes.begin(), full.nodes.begin() + n);
  rule.weights.resize(n);
  const double dropped = full.weights[n];
  for (int k = 0; k < n; ++k) rule.weights[k] = full.weights[k] + dropped * lambda[k] / lambda_sum;
  if (n % 2 == 0) rule.weights[0] = 0.0;  // exact cancellation, remove rounding residue
  return rule;
}

}  // namespace ulr
