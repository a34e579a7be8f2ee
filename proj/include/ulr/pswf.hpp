#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ulr/polar_grid.hpp"
#include "ulr/quadrature.hpp"

namespace ulr {

// Radial part of a disk PSWF: psi_{m,n,l}(r, theta) = r^m phi(2r^2 - 1) Y_{m,l}(theta)
// with phi = sum_j beta_j P_j^{(m)}. beta has unit Euclidean norm (unit L^2(B)
// norm of psi) and the sign is fixed by phi(1) > 0.
struct RadialEigenpair {
  int m = 0;
  int n = 0;
  double chi = 0.0;
  std::vector<double> beta;

  int truncation() const noexcept { return static_cast<int>(beta.size()) - 1; }
};

// J = max(2c, 30) + m.
int default_truncation(int m, double c);

// Matrix of the Sturm-Liouville operator
//   D f = -(1 - r^2) f'' - f'/r + 3 r f' + m^2/r^2 f + c^2 r^2 f
// in the basis r^m P_j^{(m)}(2r^2 - 1), j = 0..J, obtained by applying D to each
// basis function and projecting with Gauss-Legendre quadrature in eta.
// Throws AssemblyError if an entry off the tridiagonal band exceeds
// max(1e-8, 1e-12 max|entry|).
Eigen::MatrixXd assemble_radial_operator(int m, double c, int truncation);

// The `count` smallest eigenpairs, chi ascending. Throws TruncationError if the
// eigenvalues move by more than 1e-8 (relative) when J is doubled.
std::vector<RadialEigenpair> compute_radial_eigenpairs(int m, double c, int count, int truncation);

// r^m phi(2r^2 - 1) for 0 <= r <= 1.
double radial_profile(const RadialEigenpair& pair, double r);
std::vector<double> radial_profile(const RadialEigenpair& pair, std::span<const double> radii);

// Restricted Fourier transform F_b f(x) = int_B exp(i c x.y) f(y) dy acting on the
// radial factor: (F_b psi)(rho) = 2 pi i^m int_0^1 J_m(c rho r) R(r) r dr.
struct ProlateEigenvalue {
  std::complex<double> alpha;
  double residual = 0.0;  // ||F_b psi - alpha psi||_{L^2(B)}
};

// Quadrature rule in eta on [-1, 1] used for the radial projections.
QuadratureRule radial_projection_rule(const RadialEigenpair& pair, double c);

// alpha = <F_b psi, psi>. Throws EigenResidualError when the residual exceeds 1e-6.
ProlateEigenvalue compute_prolate_eigenvalue(const RadialEigenpair& pair, double c);
ProlateEigenvalue compute_prolate_eigenvalue(const RadialEigenpair& pair, double c,
                                             const QuadratureRule& eta_rule);

struct PswfEntry {
  int m = 0;
  int n = 0;
  int l = 1;
};

// Immutable basis {psi_{m,n,l} : m <= max_m, n <= max_n, l in I(m)}; entries are
// ordered by m, then n, then l.
class PswfBasis {
 public:
  PswfBasis(double c, int max_m, int max_n, std::vector<RadialEigenpair> radial,
            std::vector<std::complex<double>> alpha);

  double bandwidth() const noexcept { return c_; }
  int max_m() const noexcept { return max_m_; }
  int max_n() const noexcept { return max_n_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::span<const PswfEntry> entries() const noexcept { return entries_; }

  const RadialEigenpair& radial(int m, int n) const;
  std::complex<double> alpha(int m, int n) const;
  double chi(int m, int n) const { return radial(m, n).chi; }
  std::size_t entry_index(int m, int n, int l) const;

  double evaluate(const PswfEntry& entry, Point2 point) const;
  std::vector<double> evaluate(const PswfEntry& entry, std::span<const Point2> points) const;
  // Values on the polar grid, radial-major.
  std::vector<double> sample(const PswfEntry& entry, const PolarGrid& grid) const;

 private:
  std::size_t radial_index(int m, int n) const;

  double c_;
  int max_m_;
  int max_n_;
  std::vector<RadialEigenpair> radial_;
  std::vector<std::complex<double>> alpha_;
  std::vector<PswfEntry> entries_;
};

// Real part of sum_e coefficients[e] psi_e at arbitrary points of the closed
// disk (basis entry order); points outside the disk give 0.
std::vector<double> evaluate_expansion(const PswfBasis& basis, std::span<const std::complex<double>> coefficients,
                                       std::span<const Point2> points);

// Builds and verifies (eigen-relation residual, chi and |alpha| ordering) the basis.
PswfBasis build_basis(double c, int max_m, int max_n);

// "PSWF1" cache file.
void save_basis(const PswfBasis& basis, const std::filesystem::path& path);
PswfBasis load_basis(const std::filesystem::path& path);

// Ordering of |alpha_{m,n}| in n, checked in 50-digit arithmetic: the eigenpair
// is refined by Rayleigh quotient iteration and alpha is read off the
// eigen-relation at rho -> 0, alpha = 2 pi i^m c^m h_0 beta_0 / (2^m m! phi(-1)).
// Near the plateau |alpha| ~ 2 pi / c the double values coincide, so the deficit
// 1 - |alpha| c / (2 pi) is reported as well.
struct AlphaOrdering {
  int m = 0;
  std::vector<double> magnitude;
  std::vector<double> deficit;
  bool strictly_decreasing = false;
};

AlphaOrdering verify_alpha_ordering(const PswfBasis& basis, int m);

// Runs verify_alpha_ordering for every m and checks chi ordering; throws OrderingError.
void assert_basis_ordering(const PswfBasis& basis);

}  // namespace ulr
