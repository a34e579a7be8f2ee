#pragma once

#include <complex>
#include <vector>

namespace ulr {

// Normalized Jacobi polynomials P_j^{(m)} of the (0, m) family, orthonormal on
// (-1, 1) for the weight (1 + x)^m / 2^(m+2). With eta = 2r^2 - 1 this weight
// is exactly the radial measure r^(2m) r dr, so r^m P_j^{(m)}(2r^2 - 1) Y_{m,l}
// is an orthonormal system of L^2 of the unit disk.
struct JacobiParams {
  int m = 0;
  int max_degree = 0;
};

// Recurrence coefficients: x P_n = a_n P_{n+1} + b_n P_n + a_{n-1} P_{n-1}.
double jacobi_a(int m, int n);
double jacobi_b(int m, int n);

// [P_0(x), ..., P_J(x)]. Throws DomainError unless |x| < 1.
std::vector<double> jacobi_normalized(const JacobiParams& params, double x);

struct JacobiDerivatives {
  std::vector<double> value;
  std::vector<double> first;
  std::vector<double> second;
};

// Values and first two derivatives on the closed interval [-1, 1]. The open
// interval restriction of jacobi_normalized() exists to honour its contract;
// the PSWF evaluator needs the endpoints (r = 0 and r = 1).
JacobiDerivatives jacobi_normalized_closed(const JacobiParams& params, double x);

// Bessel functions of the first kind. Power series in long double for
// x <= kBesselSeriesLimit, Hankel asymptotic expansion above it. Integer
// orders >= 2 use forward recurrence when order < x and Miller's backward
// recurrence otherwise.
inline constexpr double kBesselSeriesLimit = 20.0;

double bessel_j0(double x);
double bessel_j1(double x);
double bessel_y0(double x);
double bessel_j(int order, double x);

// H_0^{(1)}(x) = J_0(x) + i Y_0(x); x must be positive.
std::complex<double> hankel1_0(double x);

// Real circular harmonics Y_{m,l}: 1/sqrt(2 pi) for (0, 1), cos(m theta)/sqrt(pi)
// for l = 1 and sin(m theta)/sqrt(pi) for l = 2.
double spherical_harmonic(int m, int l, double theta);

// Number of admissible l for order m (1 for m = 0, else 2).
constexpr int harmonic_multiplicity(int m) { return m == 0 ? 1 : 2; }

}  // namespace ulr
