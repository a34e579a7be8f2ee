#include <cmath>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "ulr/errors.hpp"
#include "ulr/pswf.hpp"
#include "ulr/special_functions.hpp"

namespace ulr {

namespace {

using Real = boost::multiprecision::cpp_bin_float_50;

struct Tridiagonal {
  std::vector<Real> diag;
  std::vector<Real> off;  // off[j] couples j and j + 1
};

Real coeff_a(int m, int n) {
  const Real num = Real(2) * (n + 1) * (n + m + 1);
  const Real den = Real(2 * n + m + 2) * sqrt(Real(2 * n + m + 1) * Real(2 * n + m + 3));
  return num / den;
}

Real coeff_b(int m, int n) {
  if (2 * n + m == 0) return Real(0);
  return Real(m) * m / (Real(2 * n + m) * Real(2 * n + m + 2));
}

Tridiagonal closed_form_operator(int m, const Real& c, int truncation) {
  Tridiagonal t;
  const Real half_c2 = c * c / 2;
  t.diag.resize(truncation + 1);
  t.off.resize(truncation);
  for (int j = 0; j <= truncation; ++j) {
    t.diag[j] = Real(4) * j * (j + m + 1) + Real(m) * (m + 2) + half_c2 * (1 + coeff_b(m, j));
    if (j < truncation) t.off[j] = half_c2 * coeff_a(m, j);
  }
  return t;
}

// (T - shift I) y = rhs by Gaussian elimination with partial pivoting on the band.
std::vector<Real> shifted_solve(const Tridiagonal& t, const Real& shift, const std::vector<Real>& rhs) {
  const std::size_t size = t.diag.size();
  // rows hold up to three entries: main, +1, +2 (fill-in from pivoting)
  std::vector<Real> d(size), u1(size), u2(size), l(size), b = rhs;
  for (std::size_t i = 0; i < size; ++i) {
    d[i] = t.diag[i] - shift;
    u1[i] = i + 1 < size ? t.off[i] : Real(0);
    l[i] = i > 0 ? t.off[i - 1] : Real(0);  // entry (i, i - 1)
  }
  for (std::size_t i = 0; i + 1 < size; ++i) {
    // candidate rows i and i + 1 for pivot in column i
    if (abs(l[i + 1]) > abs(d[i])) {
      std::swap(d[i], l[i + 1]);
      std::swap(u1[i], d[i + 1]);
      std::swap(u2[i], u1[i + 1]);
      std::swap(b[i], b[i + 1]);
    }
    if (d[i] == 0) d[i] = Real(1e-60);
    const Real factor = l[i + 1] / d[i];
    d[i + 1] -= factor * u1[i];
    u1[i + 1] -= factor * u2[i];
    b[i + 1] -= factor * b[i];
    l[i + 1] = 0;
  }
  std::vector<Real> y(size);
  for (std::size_t k = size; k-- > 0;) {
    Real value = b[k];
    if (k + 1 < size) value -= u1[k] * y[k + 1];
    if (k + 2 < size) value -= u2[k] * y[k + 2];
    y[k] = value / (d[k] == 0 ? Real(1e-60) : d[k]);
  }
  return y;
}

Real rayleigh(const Tridiagonal& t, const std::vector<Real>& v) {
  Real num = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    Real row = t.diag[i] * v[i];
    if (i > 0) row += t.off[i - 1] * v[i - 1];
    if (i + 1 < v.size()) row += t.off[i] * v[i + 1];
    num += v[i] * row;
  }
  return num;
}

void normalize(std::vector<Real>& v) {
  Real norm = 0;
  for (const Real& x : v) norm += x * x;
  norm = sqrt(norm);
  for (Real& x : v) x /= norm;
}

// |alpha| from the eigen-relation evaluated at rho -> 0.
Real prolate_magnitude(int m, const Real& c, const std::vector<Real>& beta) {
  const std::size_t size = beta.size();
  std::vector<Real> p(size);
  p[0] = sqrt(Real(2) * (m + 1));
  if (size > 1) p[1] = (Real(m + 2) * -1 - m) * sqrt(Real(2) * (m + 3)) / 2;
  for (std::size_t n = 1; n + 1 < size; ++n) {
    const int k = static_cast<int>(n);
    p[n + 1] = ((Real(-1) - coeff_b(m, k)) * p[n] - coeff_a(m, k - 1) * p[n - 1]) / coeff_a(m, k);
  }
  Real phi_minus_one = 0;
  for (std::size_t j = 0; j < size; ++j) phi_minus_one += beta[j] * p[j];
  Real factorial = 1;
  for (int k = 2; k <= m; ++k) factorial *= k;
  const Real h0 = 1 / sqrt(Real(2) * (m + 1));
  const Real pi = boost::math::constants::pi<Real>();
  return abs(2 * pi * pow(c, m) * h0 * beta[0] / (pow(Real(2), m) * factorial * phi_minus_one));
}

}  // namespace

AlphaOrdering verify_alpha_ordering(const PswfBasis& basis, int m) {
  const Real c = basis.bandwidth();
  const Real pi = boost::math::constants::pi<Real>();
  AlphaOrdering out;
  out.m = m;
  std::vector<Real> magnitudes;
  for (int n = 0; n <= basis.max_n(); ++n) {
    const RadialEigenpair& pair = basis.radial(m, n);
    const int truncation = pair.truncation() + 30;
    const Tridiagonal t = closed_form_operator(m, c, truncation);
    std::vector<Real> v(truncation + 1, Real(0));
    for (std::size_t j = 0; j < pair.beta.size(); ++j) v[j] = pair.beta[j];
    Real shift = pair.chi;
    for (int iter = 0; iter < 6; ++iter) {
      v = shifted_solve(t, shift, v);
      normalize(v);
      shift = rayleigh(t, v);
    }
    const Real magnitude = prolate_magnitude(m, c, v);
    magnitudes.push_back(magnitude);
    out.magnitude.push_back(static_cast<double>(magnitude));
    out.deficit.push_back(static_cast<double>(1 - magnitude * c / (2 * pi)));
  }
  out.strictly_decreasing = true;
  for (std::size_t n = 1; n < magnitudes.size(); ++n) {
    if (!(magnitudes[n] < magnitudes[n - 1])) out.strictly_decreasing = false;
  }
  return out;
}

void assert_basis_ordering(const PswfBasis& basis) {
  for (int m = 0; m <= basis.max_m(); ++m) {
    for (int n = 1; n <= basis.max_n(); ++n) {
      if (!(basis.chi(m, n) > basis.chi(m, n - 1))) {
        throw OrderingError("chi_{" + std::to_string(m) + ",n} not strictly increasing at n=" +
                            std::to_string(n));
      }
    }
    const AlphaOrdering ordering = verify_alpha_ordering(basis, m);
    if (!ordering.strictly_decreasing) {
      throw OrderingError("|alpha_{" + std::to_string(m) + ",n}| not strictly decreasing");
    }
    for (int n = 0; n <= basis.max_n(); ++n) {
      const double stored = std::abs(basis.alpha(m, n));
      if (std::fabs(stored - ordering.magnitude[n]) > 1e-7) {
        throw OrderingError("|alpha_{" + std::to_string(m) + "," + std::to_string(n) +
                            "}| disagrees with the extended-precision value");
      }
    }
  }
}

}  // namespace ulr
