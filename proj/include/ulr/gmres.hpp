#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ulr/errors.hpp"

namespace ulr {

struct GmresOptions {
  double tolerance = 1e-8;  // on ||b - A x|| / ||b||
  int max_iterations = 500;
  int restart = 60;
};

struct GmresResult {
  double relative_residual = 0.0;
  int iterations = 0;
};

// Restarted GMRES with modified Gram-Schmidt and Givens rotations. x holds the
// initial guess on entry. Throws ConvergenceError after max_iterations.
template <typename Apply>
GmresResult gmres(const Apply& apply, const Eigen::VectorXcd& rhs, Eigen::VectorXcd& x,
                  const GmresOptions& options = {}) {
  using Complex = std::complex<double>;
  const double rhs_norm = rhs.norm();
  GmresResult result;
  if (rhs_norm == 0.0) {
    x.setZero();
    return result;
  }
  const int restart = std::max(1, options.restart);
  const Eigen::Index size = rhs.size();
  Eigen::VectorXcd work(size);

  std::vector<Eigen::VectorXcd> basis;
  Eigen::MatrixXcd hessenberg(restart + 1, restart);
  std::vector<Complex> cs(restart), sn(restart), g(restart + 1);

  while (true) {
    apply(x, work);
    Eigen::VectorXcd residual = rhs - work;
    double beta = residual.norm();
    result.relative_residual = beta / rhs_norm;
    if (result.relative_residual <= options.tolerance) return result;
    if (result.iterations >= options.max_iterations) {
      throw ConvergenceError("gmres: no convergence after " + std::to_string(result.iterations) +
                                 " iterations (relative residual " +
                                 std::to_string(result.relative_residual) + ")",
                             result.relative_residual, result.iterations);
    }

    basis.clear();
    basis.push_back(residual / beta);
    hessenberg.setZero();
    std::fill(g.begin(), g.end(), Complex(0.0));
    g[0] = beta;
    int j = 0;
    for (; j < restart && result.iterations < options.max_iterations; ++j) {
      ++result.iterations;
      apply(basis[j], work);
      for (int i = 0; i <= j; ++i) {
        hessenberg(i, j) = basis[i].dot(work);
        work -= hessenberg(i, j) * basis[i];
      }
      const double h_next = work.norm();
      hessenberg(j + 1, j) = h_next;
      for (int i = 0; i < j; ++i) {
        const Complex a = hessenberg(i, j);
        const Complex b = hessenberg(i + 1, j);
        hessenberg(i, j) = std::conj(cs[i]) * a + std::conj(sn[i]) * b;
        hessenberg(i + 1, j) = -sn[i] * a + cs[i] * b;
      }
      const Complex a = hessenberg(j, j);
      const double denom = std::hypot(std::abs(a), h_next);
      cs[j] = denom == 0.0 ? Complex(1.0) : a / denom;
      sn[j] = denom == 0.0 ? Complex(0.0) : Complex(h_next / denom);
      hessenberg(j, j) = denom;
      hessenberg(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = std::conj(cs[j]) * g[j];
      const double estimate = std::abs(g[j + 1]) / rhs_norm;
      if (h_next == 0.0 || estimate <= options.tolerance) {
        ++j;
        break;
      }
      basis.push_back(work / h_next);
    }
    // back substitution on the j x j upper triangle
    Eigen::VectorXcd y(j);
    for (int i = j - 1; i >= 0; --i) {
      Complex value = g[i];
      for (int k = i + 1; k < j; ++k) value -= hessenberg(i, k) * y[k];
      y[i] = value / hessenberg(i, i);
    }
    for (int i = 0; i < j; ++i) x += y[i] * basis[i];
  }
}

}  // namespace ulr
