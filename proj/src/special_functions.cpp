#include "ulr/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ulr/errors.hpp"

namespace ulr {

namespace {

constexpr long double kEulerGammaL = 0.577215664901532860606512090082402431L;
constexpr long double kPiL = 3.141592653589793238462643383279502884L;
constexpr double kBigNumber = 1.0e250;
constexpr double kBigNumberInverse = 1.0e-250;

struct SmallArgument {
  long double j0;
  long double y0;
};

// J_0 and Y_0 from their ascending series; t = x^2/4.
SmallArgument j0_y0_series(double x) {
  const long double t = static_cast<long double>(x) * x / 4.0L;
  long double term = 1.0L;
  long double j0 = 1.0L;
  long double log_part = 0.0L;
  long double harmonic = 0.0L;
  for (int k = 1; k < 200; ++k) {
    term *= -t / (static_cast<long double>(k) * k);
    harmonic += 1.0L / k;
    j0 += term;
    log_part -= term * harmonic;
    if (std::fabs(term) * harmonic < 1e-24L * (1.0L + std::fabs(j0))) break;
  }
  const long double y0 =
      (2.0L / kPiL) * ((std::log(static_cast<long double>(x) / 2.0L) + kEulerGammaL) * j0 + log_part);
  return {j0, y0};
}

long double j1_series(double x) {
  const long double t = static_cast<long double>(x) * x / 4.0L;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int k = 1; k < 200; ++k) {
    term *= -t / (static_cast<long double>(k) * (k + 1));
    sum += term;
    if (std::fabs(term) < 1e-24L * (1.0L + std::fabs(sum))) break;
  }
  return static_cast<long double>(x) / 2.0L * sum;
}

// Hankel asymptotic series P_nu, Q_nu for nu in {0, 1}; summed until the terms
// stop decreasing, which for x > 20 leaves a remainder below 1e-17.
struct Asymptotic {
  double p;
  double q;
};

Asymptotic hankel_asymptotic(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double previous = 1.0;
  for (int k = 1; k < 80; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (8.0 * k * x);
    const double magnitude = std::fabs(term);
    if (magnitude > previous || magnitude < 1e-18) {
      break;
    }
    previous = magnitude;
    // a_k x^-k enters P with sign (-1)^(k/2) for even k, Q with (-1)^((k-1)/2).
    switch (k % 4) {
      case 0: p += term; break;
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
    }
  }
  return {p, q};
}

}  // namespace

double jacobi_a(int m, int n) {
  const double num = 2.0 * (n + 1) * (n + m + 1);
  const double den = (2.0 * n + m + 2) * std::sqrt((2.0 * n + m + 1) * (2.0 * n + m + 3));
  return num / den;
}

double jacobi_b(int m, int n) {
  if (2 * n + m == 0) return 0.0;  // Legendre limit of 0/0 at m = n = 0
  return static_cast<double>(m) * m / ((2.0 * n + m) * (2.0 * n + m + 2));
}

JacobiDerivatives jacobi_normalized_closed(const JacobiParams& params, double x) {
  if (params.m < 0 || params.max_degree < 0) {
    throw DomainError("jacobi: m and max_degree must be non-negative");
  }
  const int m = params.m;
  const int size = params.max_degree + 1;
  JacobiDerivatives out;
  out.value.resize(size);
  out.first.resize(size);
  out.second.resize(size);

  const double p0 = std::sqrt(2.0 * (m + 1));
  out.value[0] = p0;
  out.first[0] = 0.0;
  out.second[0] = 0.0;
  if (size == 1) return out;

  const double half_inv_h1 = std::sqrt(2.0 * (m + 3)) / 2.0;
  out.value[1] = ((m + 2) * x - m) * half_inv_h1;
  out.first[1] = (m + 2) * half_inv_h1;
  out.second[1] = 0.0;

  for (int n = 1; n + 1 < size; ++n) {
    const double an = jacobi_a(m, n);
    const double an1 = jacobi_a(m, n - 1);
    const double shift = x - jacobi_b(m, n);
    out.value[n + 1] = (shift * out.value[n] - an1 * out.value[n - 1]) / an;
    out.first[n + 1] = (out.value[n] + shift * out.first[n] - an1 * out.first[n - 1]) / an;
    out.second[n + 1] = (2.0 * out.first[n] + shift * out.second[n] - an1 * out.second[n - 1]) / an;
  }
  return out;
}

std::vector<double> jacobi_normalized(const JacobiParams& params, double x) {
  if (!(std::fabs(x) < 1.0)) {
    throw DomainError("jacobi_normalized: |x| must be < 1, got " + std::to_string(x));
  }
  return jacobi_normalized_closed(params, x).value;
}

double bessel_j0(double x) {
  x = std::fabs(x);
  if (x <= kBesselSeriesLimit) return static_cast<double>(j0_y0_series(x).j0);
  const auto [p, q] = hankel_asymptotic(0, x);
  const double c = std::cos(x);
  const double s = std::sin(x);
  const double scale = std::sqrt(2.0 / (std::numbers::pi * x)) / std::numbers::sqrt2;
  return scale * (p * (c + s) - q * (s - c));
}

double bessel_y0(double x) {
  if (!(x > 0.0)) throw DomainError("bessel_y0: x must be positive");
  if (x <= kBesselSeriesLimit) return static_cast<double>(j0_y0_series(x).y0);
  const auto [p, q] = hankel_asymptotic(0, x);
  const double c = std::cos(x);
  const double s = std::sin(x);
  const double scale = std::sqrt(2.0 / (std::numbers::pi * x)) / std::numbers::sqrt2;
  return scale * (p * (s - c) + q * (c + s));
}

double bessel_j1(double x) {
  const double sign = x < 0.0 ? -1.0 : 1.0;
  x = std::fabs(x);
  if (x <= kBesselSeriesLimit) return sign * static_cast<double>(j1_series(x));
  const auto [p, q] = hankel_asymptotic(1, x);
  const double c = std::cos(x);
  const double s = std::sin(x);
  const double scale = std::sqrt(2.0 / (std::numbers::pi * x)) / std::numbers::sqrt2;
  // chi = x - 3 pi / 4
  const double cos_chi = s - c;
  const double sin_chi = -(s + c);
  return sign * scale * (p * cos_chi - q * sin_chi);
}

double bessel_j(int order, double x) {
  if (order < 0) throw DomainError("bessel_j: order must be non-negative");
  if (x < 0.0) throw DomainError("bessel_j: x must be non-negative");
  if (order == 0) return bessel_j0(x);
  if (x == 0.0) return 0.0;
  if (order == 1) return bessel_j1(x);

  if (order < x) {
    long double previous = bessel_j0(x);
    long double current = bessel_j1(x);
    for (int k = 1; k < order; ++k) {
      const long double next = (2.0L * k / x) * current - previous;
      previous = current;
      current = next;
    }
    return static_cast<double>(current);
  }

  // Miller: recur downward from well above max(order, x), normalize with
  // J_0 + 2 sum J_{2k} = 1.
  const double anchor = std::max<double>(order, x);
  int start = static_cast<int>(anchor + 30.0 + std::sqrt(60.0 * anchor));
  start += start % 2;
  const long double two_over_x = 2.0L / x;
  long double above = 0.0L;
  long double current = 1.0L;
  long double result = 0.0L;
  long double even_sum = 0.0L;
  for (int k = start; k > 0; --k) {
    const long double below = k * two_over_x * current - above;
    above = current;
    current = below;
    if (std::fabs(current) > kBigNumber) {
      current *= kBigNumberInverse;
      above *= kBigNumberInverse;
      result *= kBigNumberInverse;
      even_sum *= kBigNumberInverse;
    }
    // current now holds J_{k-1} (unnormalized)
    if ((k - 1) % 2 == 0 && k - 1 > 0) even_sum += current;
    if (k - 1 == order) result = current;
  }
  const long double norm = 2.0L * even_sum + current;
  return static_cast<double>(result / norm);
}

std::complex<double> hankel1_0(double x) {
  if (!(x > 0.0)) throw DomainError("hankel1_0: x must be positive");
  if (x <= kBesselSeriesLimit) {
    const auto [j0, y0] = j0_y0_series(x);
    return {static_cast<double>(j0), static_cast<double>(y0)};
  }
  return {bessel_j0(x), bessel_y0(x)};
}

double spherical_harmonic(int m, int l, double theta) {
  if (m < 0 || (l != 1 && l != 2) || (m == 0 && l == 2)) {
    throw InvalidIndexError("spherical_harmonic: invalid index (m=" + std::to_string(m) +
                            ", l=" + std::to_string(l) + ")");
  }
  if (m == 0) return 1.0 / std::sqrt(2.0 * std::numbers::pi);
  const double scale = 1.0 / std::sqrt(std::numbers::pi);
  return l == 1 ? scale * std::cos(m * theta) : scale * std::sin(m * theta);
}

}  // namespace ulr
