#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ulr/errors.hpp"
#include "ulr/polar_grid.hpp"
#include "ulr/quadrature.hpp"

using namespace ulr;

namespace {

double integrate(const QuadratureRule& rule, auto f) {
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(rule.nodes[i]);
  return s;
}

double monomial_integral(int p) { return p % 2 == 1 ? 0.0 : 2.0 / (p + 1); }

}  // namespace

TEST_CASE("Gauss-Legendre is exact to degree 2n - 1") {
  for (int n : {1, 2, 7, 30, 101}) {
    const QuadratureRule rule = gauss_legendre(n);
    REQUIRE(rule.nodes.size() == static_cast<std::size_t>(n));
    for (std::size_t i = 1; i < rule.nodes.size(); ++i) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
    for (int p = 0; p <= std::min(2 * n - 1, 60); ++p) {
      CHECK(integrate(rule, [p](double x) { return std::pow(x, p); }) ==
            doctest::Approx(monomial_integral(p)).scale(1.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("Clenshaw-Curtis is exact to degree n") {
  for (int n : {2, 8, 33, 56}) {
    const QuadratureRule rule = clenshaw_curtis(n);
    CHECK(rule.nodes.front() == doctest::Approx(1.0));
    CHECK(rule.nodes.back() == doctest::Approx(-1.0));
    for (int p = 0; p <= n; ++p) {
      CHECK(integrate(rule, [p](double x) { return std::pow(x, p); }) ==
            doctest::Approx(monomial_integral(p)).scale(1.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("open-end Chebyshev rule is exact to degree n - 1 and drops x = -1") {
  for (int n : {4, 9, 56, 104}) {
    const QuadratureRule rule = chebyshev_open_end(n);
    REQUIRE(rule.nodes.size() == static_cast<std::size_t>(n));
    CHECK(rule.nodes.back() > -1.0);
    for (int p = 0; p <= n - 1; ++p) {
      CHECK(integrate(rule, [p](double x) { return std::pow(x, p); }) ==
            doctest::Approx(monomial_integral(p)).scale(1.0).epsilon(1e-12));
    }
    if (n % 2 == 0) CHECK(std::fabs(rule.weights.front()) < 1e-14);
  }
}

TEST_CASE("polar grid nodes") {
  const PolarGrid grid(104, 56);
  CHECK(grid.size() == 104u * 56u);
  CHECK(grid.radii()[0] == doctest::Approx(1.0));
  for (int m = 0; m < 56; ++m) {
    CHECK(grid.radii()[m] == doctest::Approx(std::sqrt((std::cos(m * std::numbers::pi / 56) + 1) / 2)));
    if (m > 0) CHECK(grid.radii()[m] < grid.radii()[m - 1]);
    CHECK(grid.weight(m) >= 0.0);
  }
  CHECK(grid.radii()[55] > 0.0);
  for (int n = 0; n < 104; ++n) CHECK(grid.angles()[n] == doctest::Approx(2 * std::numbers::pi * n / 104));
  CHECK(grid.index(3, 7) == 3u * 104u + 7u);
  const Point2 p = grid.node(5, 26);
  CHECK(p.x == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK(p.y == doctest::Approx(grid.radii()[5]));
}

TEST_CASE("polar grid integrates 1 to pi and |x|^(2p) exactly") {
  const PolarGrid grid(104, 56);
  auto integral = [&](auto f) {
    double s = 0.0;
    for (int m = 0; m < grid.n_radial(); ++m) {
      for (int n = 0; n < grid.n_angular(); ++n) s += grid.weight(m) * f(grid.node(m, n));
    }
    return s;
  };
  CHECK(integral([](Point2) { return 1.0; }) == doctest::Approx(std::numbers::pi).epsilon(1e-13));
  for (int p = 1; p < 50; ++p) {
    const double exact = std::numbers::pi / (p + 1);
    CHECK(integral([p](Point2 x) { return std::pow(x.x * x.x + x.y * x.y, p); }) ==
          doctest::Approx(exact).epsilon(1e-12));
  }
  CHECK(integral([](Point2 x) { return x.x * x.x * x.y; }) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
}

TEST_CASE("polar grid rejects degenerate sizes") {
  CHECK_THROWS(PolarGrid(0, 56));
  CHECK_THROWS(PolarGrid(104, 1));
}
