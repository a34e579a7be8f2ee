#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ulr {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Polar quadrature grid of the unit disk shared by the processed data and the
// PSWF basis:
//   r_m     = sqrt((cos(m pi / N2) + 1) / 2),   m = 0..N2-1  (r_0 = 1, decreasing)
//   theta_n = 2 pi n / N1,                     n = 0..N1-1
// Radial weights come from the interpolatory Chebyshev rule in eta = 2r^2 - 1
// (r dr = d eta / 4), angular weights from the trapezoid rule. Values on the
// grid are stored radial-major: index(m, n) = m * N1 + n.
class PolarGrid {
 public:
  PolarGrid(int n_angular, int n_radial);

  int n_angular() const noexcept { return n_angular_; }
  int n_radial() const noexcept { return n_radial_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_angular_) * n_radial_; }
  std::size_t index(int m, int n) const noexcept {
    return static_cast<std::size_t>(m) * n_angular_ + n;
  }

  std::span<const double> radii() const noexcept { return radii_; }
  std::span<const double> angles() const noexcept { return angles_; }
  // Radial factor of the L^2(B) weight, including the 1/4 from r dr = d eta / 4.
  std::span<const double> radial_weights() const noexcept { return radial_weights_; }
  double angular_weight() const noexcept { return angular_weight_; }
  double weight(int m) const noexcept { return radial_weights_[m] * angular_weight_; }

  Point2 node(int m, int n) const noexcept;

  bool operator==(const PolarGrid& other) const noexcept {
    return n_angular_ == other.n_angular_ && n_radial_ == other.n_radial_;
  }

 private:
  int n_angular_;
  int n_radial_;
  std::vector<double> radii_;
  std::vector<double> angles_;
  std::vector<double> radial_weights_;
  double angular_weight_;
};

}  // namespace ulr
