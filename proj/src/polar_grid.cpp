#include "ulr/polar_grid.hpp"

#include <cmath>
#include <numbers>

#include "ulr/errors.hpp"
#include "ulr/quadrature.hpp"

namespace ulr {

PolarGrid::PolarGrid(int n_angular, int n_radial) : n_angular_(n_angular), n_radial_(n_radial) {
  if (n_angular < 1 || n_radial < 2) {
    throw DomainError("PolarGrid: need N1 >= 1 and N2 >= 2");
  }
  const QuadratureRule rule = chebyshev_open_end(n_radial);
  radii_.resize(n_radial);
  radial_weights_.resize(n_radial);
  for (int m = 0; m < n_radial; ++m) {
    // r_m = |cos(m pi / (2 N2))| avoids the cancellation in (cos + 1) / 2 near r = 0
    radii_[m] = std::cos(std::numbers::pi * m / (2.0 * n_radial));
    radial_weights_[m] = rule.weights[m] / 4.0;
  }
  angles_.resize(n_angular);
  for (int n = 0; n < n_angular; ++n) angles_[n] = 2.0 * std::numbers::pi * n / n_angular;
  angular_weight_ = 2.0 * std::numbers::pi / n_angular;
}

Point2 PolarGrid::node(int m, int n) const noexcept {
  return {radii_[m] * std::cos(angles_[n]), radii_[m] * std::sin(angles_[n])};
}

}  // namespace ulr
