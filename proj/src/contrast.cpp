#include "ulr/contrast.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ulr/errors.hpp"

namespace ulr {

ContrastGrid::ContrastGrid(int size)
    : ContrastGrid(size, std::vector<double>(size > 0 ? static_cast<std::size_t>(size) * size : 0, 0.0)) {}

ContrastGrid::ContrastGrid(int size, std::vector<double> values) : size_(size), values_(std::move(values)) {
  if (size < kMinSize) {
    throw DomainError("ContrastGrid: N=" + std::to_string(size) + " below " + std::to_string(kMinSize));
  }
  if (values_.size() != static_cast<std::size_t>(size) * size) {
    throw DataError("ContrastGrid: expected " + std::to_string(size) + "^2 values");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw DataError("ContrastGrid: non-finite value");
  }
}

double ContrastGrid::max_abs() const noexcept {
  double out = 0.0;
  for (double v : values_) out = std::max(out, std::fabs(v));
  return out;
}

double ContrastGrid::support_radius() const noexcept {
  double out = 0.0;
  for (int row = 0; row < size_; ++row) {
    for (int col = 0; col < size_; ++col) {
      if ((*this)(row, col) != 0.0) {
        const Point2 p = centre(row, col);
        out = std::max(out, std::hypot(p.x, p.y));
      }
    }
  }
  return out;
}

double ContrastGrid::sample(Point2 point) const noexcept {
  const double fx = (point.x + 1.0) / spacing() - 0.5;
  const double fy = (point.y + 1.0) / spacing() - 0.5;
  const double col0 = std::floor(fx);
  const double row0 = std::floor(fy);
  const double tx = fx - col0;
  const double ty = fy - row0;
  const auto at = [this](double row, double col) {
    if (row < 0.0 || col < 0.0 || row >= size_ || col >= size_) return 0.0;
    return (*this)(static_cast<int>(row), static_cast<int>(col));
  };
  return (1.0 - ty) * ((1.0 - tx) * at(row0, col0) + tx * at(row0, col0 + 1.0)) +
         ty * ((1.0 - tx) * at(row0 + 1.0, col0) + tx * at(row0 + 1.0, col0 + 1.0));
}

void add_disk(ContrastGrid& q, Point2 centre, double radius, double amplitude) {
  constexpr int kSub = 16;
  const double h = q.spacing();
  const double half_diagonal = h / std::sqrt(2.0);
  for (int row = 0; row < q.size(); ++row) {
    for (int col = 0; col < q.size(); ++col) {
      const Point2 p = q.centre(row, col);
      const double dist = std::hypot(p.x - centre.x, p.y - centre.y);
      if (dist >= radius + half_diagonal) continue;
      if (dist <= radius - half_diagonal) {
        q(row, col) += amplitude;
        continue;
      }
      int inside = 0;
      for (int a = 0; a < kSub; ++a) {
        for (int b = 0; b < kSub; ++b) {
          const double x = p.x + ((b + 0.5) / kSub - 0.5) * h;
          const double y = p.y + ((a + 0.5) / kSub - 0.5) * h;
          if (std::hypot(x - centre.x, y - centre.y) < radius) ++inside;
        }
      }
      q(row, col) += amplitude * inside / (kSub * kSub);
    }
  }
}

ContrastGrid disk_contrast(int size, Point2 centre, double radius, double amplitude) {
  ContrastGrid q(size);
  add_disk(q, centre, radius, amplitude);
  return q;
}

ContrastGrid operator+(const ContrastGrid& a, const ContrastGrid& b) {
  if (a.size() != b.size()) throw DataError("ContrastGrid: size mismatch");
  ContrastGrid out(a.size());
  for (std::size_t i = 0; i < out.values().size(); ++i) out.values()[i] = a.values()[i] + b.values()[i];
  return out;
}

ContrastGrid operator*(double scale, const ContrastGrid& q) {
  ContrastGrid out(q.size());
  for (std::size_t i = 0; i < out.values().size(); ++i) out.values()[i] = scale * q.values()[i];
  return out;
}

double l2_norm(const ContrastGrid& q) {
  double sum = 0.0;
  for (double v : q.values()) sum += v * v;
  return std::sqrt(sum) * q.spacing();
}

}  // namespace ulr
