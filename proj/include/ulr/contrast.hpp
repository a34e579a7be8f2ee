#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "ulr/polar_grid.hpp"

namespace ulr {

// Real contrast q on the N x N cell-centred grid over [-1, 1]^2.
// Cell (row, col) has centre (x, y) = (coordinate(col), coordinate(row)).
class ContrastGrid {
 public:
  static constexpr int kMinSize = 32;

  explicit ContrastGrid(int size);
  ContrastGrid(int size, std::vector<double> values);

  int size() const noexcept { return size_; }
  double spacing() const noexcept { return 2.0 / size_; }
  double coordinate(int index) const noexcept { return -1.0 + (index + 0.5) * spacing(); }
  Point2 centre(int row, int col) const noexcept { return {coordinate(col), coordinate(row)}; }

  double& operator()(int row, int col) { return values_[static_cast<std::size_t>(row) * size_ + col]; }
  double operator()(int row, int col) const {
    return values_[static_cast<std::size_t>(row) * size_ + col];
  }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  double max_abs() const noexcept;
  // Largest |centre| over cells with q != 0 (0 for an empty contrast).
  double support_radius() const noexcept;
  // Bilinear interpolation between cell centres; q is taken as 0 beyond the grid.
  double sample(Point2 point) const noexcept;

 private:
  int size_;
  std::vector<double> values_;
};

// Adds amplitude * (area fraction of the disk in each cell); the fraction is
// estimated on a 16 x 16 sub-grid for cells cut by the boundary.
void add_disk(ContrastGrid& q, Point2 centre, double radius, double amplitude);

// Grid of N x N with one disk.
ContrastGrid disk_contrast(int size, Point2 centre, double radius, double amplitude);

ContrastGrid operator+(const ContrastGrid& a, const ContrastGrid& b);
ContrastGrid operator*(double scale, const ContrastGrid& q);

// L2 norm over [-1, 1]^2 by the midpoint rule.
double l2_norm(const ContrastGrid& q);

}  // namespace ulr
