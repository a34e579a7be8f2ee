#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles/bessel_oracle.hpp"
#include "ulr/errors.hpp"
#include "ulr/quadrature.hpp"
#include "ulr/special_functions.hpp"

using namespace ulr;

namespace {

// Classical Jacobi P_n^{(0,m)} from the explicit sum
//   P_n^{(a,b)}(x) = sum_s C(n+a, n-s) C(n+b, s) ((x-1)/2)^s ((x+1)/2)^(n-s).
double jacobi_sum(int n, int m, double x) {
  auto binom = [](int top, int k) {
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v = v * (top - k + i) / i;
    return v;
  };
  double total = 0.0;
  for (int s = 0; s <= n; ++s) {
    total += binom(n, n - s) * binom(n + m, s) * std::pow((x - 1) / 2, s) * std::pow((x + 1) / 2, n - s);
  }
  return total;
}

// Squared norm of P_n^{(0,m)} under the weight (1 + x)^m / 2^(m+2).
double jacobi_norm2(int n, int m) { return 0.5 / (2 * n + m + 1); }

double envelope(double x) { return std::min(1.0, std::sqrt(2.0 / (std::numbers::pi * x))); }

}  // namespace

TEST_CASE("P0 of the m = 0 family is sqrt(2)") {
  const auto p = jacobi_normalized({0, 0}, 0.3);
  REQUIRE(p.size() == 1);
  CHECK(p[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("P1 of the m = 2 family at 0 is -sqrt(10)") {
  const auto p = jacobi_normalized({2, 1}, 0.0);
  CHECK(p[1] == doctest::Approx(-std::sqrt(10.0)).epsilon(1e-14));
}

TEST_CASE("recurrence matches the explicit Jacobi sum") {
  for (int m : {0, 1, 4, 11}) {
    for (double x : {-0.93, -0.2, 0.5, 0.97}) {
      const auto p = jacobi_normalized({m, 12}, x);
      for (int n = 0; n <= 12; ++n) {
        const double expected = jacobi_sum(n, m, x) / std::sqrt(jacobi_norm2(n, m));
        CHECK(p[n] == doctest::Approx(expected).epsilon(1e-12).scale(1.0));
      }
    }
  }
}

TEST_CASE("m = 1, J = 6 at 0.5 matches the explicit sum to 1e-12") {
  const auto p = jacobi_normalized({1, 6}, 0.5);
  for (int n = 0; n <= 6; ++n) {
    const double expected = jacobi_sum(n, 1, 0.5) / std::sqrt(jacobi_norm2(n, 1));
    CHECK(std::fabs(p[n] - expected) <= 1e-12 * std::fabs(expected));
  }
}

TEST_CASE("closed-interval evaluator agrees with the recurrence and differentiates it") {
  for (int m : {0, 3, 9}) {
    const double x = 0.41;
    const auto p = jacobi_normalized({m, 10}, x);
    const double h = 1e-5;
    const auto plus = jacobi_normalized({m, 10}, x + h);
    const auto minus = jacobi_normalized({m, 10}, x - h);
    const auto closed = jacobi_normalized_closed({m, 10}, x);
    for (int n = 0; n <= 10; ++n) {
      CHECK(closed.value[n] == doctest::Approx(p[n]).epsilon(1e-13));
      CHECK(closed.first[n] == doctest::Approx((plus[n] - minus[n]) / (2 * h)).epsilon(1e-7).scale(1.0));
      CHECK(closed.second[n] ==
            doctest::Approx((plus[n] - 2 * p[n] + minus[n]) / (h * h)).epsilon(1e-4).scale(10.0));
    }
  }
}

TEST_CASE("Jacobi family is orthonormal for the weight (1 + x)^m / 2^(m+2)") {
  const QuadratureRule rule = gauss_legendre(120);
  for (int m : {0, 1, 5, 20, 40}) {
    const int degree = 25;
    std::vector<std::vector<double>> values;
    for (double x : rule.nodes) values.push_back(jacobi_normalized({m, degree}, x));
    for (int j = 0; j <= degree; ++j) {
      for (int k = j; k <= degree; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
          s += rule.weights[i] * std::pow(1 + rule.nodes[i], m) / std::pow(2.0, m + 2) * values[i][j] * values[i][k];
        }
        CHECK(std::fabs(s - (j == k ? 1.0 : 0.0)) < 1e-10);
      }
    }
  }
}

TEST_CASE("recurrence coefficients") {
  CHECK(jacobi_b(0, 0) == 0.0);
  CHECK(jacobi_b(3, 2) == doctest::Approx(9.0 / (7.0 * 9.0)));
  const double n = 4, m = 2;
  CHECK(jacobi_a(2, 4) == doctest::Approx(2 * (n + 1) * (n + m + 1) /
                                          ((2 * n + m + 2) * std::sqrt((2 * n + m + 1) * (2 * n + m + 3)))));
}

TEST_CASE("Jacobi evaluator rejects |x| >= 1") {
  CHECK_THROWS_AS(jacobi_normalized({0, 3}, 1.0), DomainError);
  CHECK_THROWS_AS(jacobi_normalized({0, 3}, -1.5), DomainError);
}

TEST_CASE("H0 matches the arbitrary-precision table") {
  for (const auto& row : oracle::kHankel0) {
    const auto h = hankel1_0(row.x);
    const double scale = envelope(row.x);
    CHECK(std::fabs(h.real() - row.j0) <= 1e-10 * std::max(std::fabs(row.j0), scale));
    CHECK(std::fabs(h.imag() - row.y0) <= 1e-10 * std::max(std::fabs(row.y0), scale));
    CHECK(std::norm(h) >= row.j0 * row.j0 * (1 - 1e-12));
  }
}

TEST_CASE("real part of H0 vanishes at the first zero of J0") {
  CHECK(std::fabs(hankel1_0(2.404825557695773).real()) < 1e-9);
}

TEST_CASE("H0 rejects non-positive arguments") {
  CHECK_THROWS_AS(hankel1_0(0.0), DomainError);
  CHECK_THROWS_AS(hankel1_0(-1.0), DomainError);
}

TEST_CASE("integer-order J matches the arbitrary-precision table") {
  for (const auto& row : oracle::kBesselJ) {
    const double v = bessel_j(row.order, row.x);
    CAPTURE(row.order);
    CAPTURE(row.x);
    // no zeros below the turning point, so the check is relative there
    const double scale = row.x > row.order ? std::max(std::fabs(row.j), envelope(row.x)) : std::fabs(row.j);
    CHECK(std::fabs(v - row.j) <= 1e-10 * scale);
  }
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(1, 0.0) == 0.0);
  CHECK(bessel_j(3, 5.0) == doctest::Approx(0.3648312306136670).epsilon(1e-10));
}

TEST_CASE("J0, J1, Y0 helpers match the table") {
  for (const auto& row : oracle::kHankel0) {
    CHECK(std::fabs(bessel_j0(row.x) - row.j0) <= 1e-10 * std::max(std::fabs(row.j0), envelope(row.x)));
    CHECK(std::fabs(bessel_y0(row.x) - row.y0) <= 1e-10 * std::max(std::fabs(row.y0), envelope(row.x)));
  }
  for (const auto& row : oracle::kBesselJ) {
    if (row.order == 1) CHECK(std::fabs(bessel_j1(row.x) - row.j) <= 1e-10 * std::max(std::fabs(row.j), envelope(row.x)));
  }
}

TEST_CASE("circular harmonics") {
  CHECK(spherical_harmonic(0, 1, 0.7) == doctest::Approx(1 / std::sqrt(2 * std::numbers::pi)));
  CHECK(spherical_harmonic(1, 2, 0.0) == 0.0);
  CHECK_THROWS_AS(spherical_harmonic(0, 2, 0.1), InvalidIndexError);
  CHECK_THROWS_AS(spherical_harmonic(1, 3, 0.1), InvalidIndexError);
  CHECK_THROWS_AS(spherical_harmonic(-1, 1, 0.1), InvalidIndexError);
  CHECK(harmonic_multiplicity(0) == 1);
  CHECK(harmonic_multiplicity(3) == 2);
}

TEST_CASE("circular harmonics are orthonormal under the trapezoid rule") {
  const int nodes = 256;
  const double w = 2 * std::numbers::pi / nodes;
  for (int m = 0; m <= 20; ++m) {
    for (int l = 1; l <= harmonic_multiplicity(m); ++l) {
      for (int mp = 0; mp <= 20; ++mp) {
        for (int lp = 1; lp <= harmonic_multiplicity(mp); ++lp) {
          double s = 0.0;
          for (int i = 0; i < nodes; ++i) {
            const double t = i * w;
            s += w * spherical_harmonic(m, l, t) * spherical_harmonic(mp, lp, t);
          }
          CHECK(std::fabs(s - (m == mp && l == lp ? 1.0 : 0.0)) < 1e-12);
        }
      }
    }
  }
}
