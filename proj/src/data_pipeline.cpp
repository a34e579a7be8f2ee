#include "ulr/data_pipeline.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ulr/errors.hpp"
#include "ulr/rng.hpp"

namespace ulr {

namespace {

constexpr double kTieTolerance = 1e-12;
constexpr double kPi = std::numbers::pi;

int positive_mod(int a, int n) { return ((a % n) + n) % n; }

}  // namespace

ProcessedData::ProcessedData(double bandwidth, PolarGrid polar)
    : c(bandwidth), grid(std::move(polar)), values(grid.size(), Complex(0.0)) {}

double wrap_angle(double angle) {
  double out = std::remainder(angle, 2.0 * kPi);  // [-pi, pi]
  if (out <= -kPi) out += 2.0 * kPi;
  return out;
}

bool within_aperture(double angle, double half_angle) { return std::fabs(wrap_angle(angle)) <= half_angle; }

PairMatching match_pairs(const DirectionSet& obs, const DirectionSet& inc, const PolarGrid& grid,
                         std::optional<double> aperture) {
  struct Candidate {
    double x, y;
    bool inside;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(obs.size() * inc.size());
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const Point2 xo = obs.unit(i);
    for (std::size_t j = 0; j < inc.size(); ++j) {
      const Point2 ti = inc.unit(j);
      const bool inside = !aperture || (within_aperture(obs.angle(i), *aperture) &&
                                        within_aperture(inc.angle(j), *aperture));
      candidates.push_back({(ti.x - xo.x) / 2.0, (ti.y - xo.y) / 2.0, inside});
    }
  }
  PairMatching out;
  out.aperture = aperture;
  out.matches.resize(grid.size());
  const int n_inc = static_cast<int>(inc.size());
  const auto relative = [](double angle, double base) {
    const double r = std::fmod(angle - base, 2.0 * kPi);
    return r < 0.0 ? r + 2.0 * kPi : r;
  };
  for (int m = 0; m < grid.n_radial(); ++m) {
    for (int n = 0; n < grid.n_angular(); ++n) {
      const Point2 p = grid.node(m, n);
      const double base = grid.angles()[n];
      // ties: inside the aperture first, then the smallest observation and
      // incidence angles measured from the node angle
      const auto before = [&](std::size_t a, std::size_t b) {
        if (candidates[a].inside != candidates[b].inside) return candidates[a].inside;
        const double oa = relative(obs.angle(a / n_inc), base);
        const double ob = relative(obs.angle(b / n_inc), base);
        if (std::fabs(oa - ob) > kTieTolerance) return oa < ob;
        return relative(inc.angle(a % n_inc), base) < relative(inc.angle(b % n_inc), base) - kTieTolerance;
      };
      std::size_t best = 0;
      double best_dist = std::numeric_limits<double>::infinity();
      for (std::size_t idx = 0; idx < candidates.size(); ++idx) {
        const double d = std::hypot(p.x - candidates[idx].x, p.y - candidates[idx].y);
        if (d < best_dist - kTieTolerance || (d <= best_dist + kTieTolerance && before(idx, best))) {
          best = idx;
          best_dist = d;
        }
      }
      PairMatch& match = out.matches[grid.index(m, n)];
      match.obs = static_cast<int>(best) / n_inc;
      match.inc = static_cast<int>(best) % n_inc;
      match.distance = best_dist;
      match.in_aperture = candidates[best].inside;
    }
  }
  return out;
}

ProcessedData process_far_field(const FarFieldMatrix& ff, const PolarGrid& grid) {
  return process_far_field(ff, grid, match_pairs(ff.observation, ff.incidence, grid, ff.aperture));
}

ProcessedData process_far_field(const FarFieldMatrix& ff, const PolarGrid& grid, const PairMatching& matching) {
  if (matching.matches.size() != grid.size()) throw DataError("process_far_field: matching does not fit the grid");
  ProcessedData out(2.0 * ff.k, grid);
  out.aperture = ff.aperture;
  const double scale = 1.0 / (ff.k * ff.k);
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const PairMatch& match = matching.matches[idx];
    if (match.obs >= ff.values.rows() || match.inc >= ff.values.cols()) {
      throw DataError("process_far_field: matching refers to a missing direction");
    }
    out.values[idx] = ff.values(match.obs, match.inc) * scale;
  }
  return out;
}

FarFieldMatrix embed_processed(const ProcessedData& data, const DirectionSet& obs, const DirectionSet& inc) {
  const double k = data.c / 2.0;
  FarFieldMatrix out(k, obs, inc);
  out.aperture = data.aperture;
  const PairMatching matching = match_pairs(obs, inc, data.grid, data.aperture);
  for (std::size_t idx = 0; idx < data.values.size(); ++idx) {
    const PairMatch& match = matching.matches[idx];
    out.values(match.obs, match.inc) = data.values[idx] * (k * k);
  }
  return out;
}

FarFieldMatrix add_noise(const FarFieldMatrix& ff, double delta, std::uint64_t seed) {
  if (!(delta >= 0.0)) throw DomainError("add_noise: delta must be non-negative");
  FarFieldMatrix out = ff;
  if (delta == 0.0) return out;
  Rng rng(seed);
  const double scale = delta / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < out.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.values.cols(); ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      out.values(i, j) *= Complex(1.0 + scale * re, scale * im);
    }
  }
  return out;
}

ContrastGrid rotate_contrast(const ContrastGrid& q, double phi) {
  const int n = q.size();
  ContrastGrid out(n);
  const double quarter_turns = phi / (kPi / 2.0);
  const double nearest = std::round(quarter_turns);
  if (std::fabs(quarter_turns - nearest) < 1e-12) {
    const int turns = positive_mod(static_cast<int>(nearest), 4);
    for (int row = 0; row < n; ++row) {
      for (int col = 0; col < n; ++col) {
        int r = row;
        int c = col;
        // one quarter turn: new(row, col) = old(N - 1 - col, row)
        for (int t = 0; t < turns; ++t) {
          const int next_r = n - 1 - c;
          c = r;
          r = next_r;
        }
        out(row, col) = q(r, c);
      }
    }
    return out;
  }
  const double cs = std::cos(phi);
  const double sn = std::sin(phi);
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      const Point2 p = q.centre(row, col);
      out(row, col) = q.sample({cs * p.x + sn * p.y, -sn * p.x + cs * p.y});
    }
  }
  return out;
}

ProcessedData rotate_processed(const ProcessedData& data, int steps) {
  ProcessedData out = data;
  const int n1 = data.grid.n_angular();
  for (int m = 0; m < data.grid.n_radial(); ++m) {
    for (int n = 0; n < n1; ++n) out.at(m, n) = data.at(m, positive_mod(n - steps, n1));
  }
  return out;
}

FarFieldMatrix apply_limited_aperture(const FarFieldMatrix& ff, double half_angle) {
  if (!(half_angle > 0.0 && half_angle < kPi)) throw DomainError("apply_limited_aperture: need 0 < Theta < pi");
  FarFieldMatrix out = ff;
  out.aperture = half_angle;
  for (std::size_t i = 0; i < ff.observation.size(); ++i) {
    if (!within_aperture(ff.observation.angle(i), half_angle)) out.values.row(static_cast<Eigen::Index>(i)).setZero();
  }
  for (std::size_t j = 0; j < ff.incidence.size(); ++j) {
    if (!within_aperture(ff.incidence.angle(j), half_angle)) out.values.col(static_cast<Eigen::Index>(j)).setZero();
  }
  return out;
}

std::vector<double> contrast_to_polar_image(const ContrastGrid& q, const PolarGrid& grid) {
  std::vector<double> out(grid.size());
  for (int m = 0; m < grid.n_radial(); ++m) {
    for (int n = 0; n < grid.n_angular(); ++n) out[grid.index(m, n)] = q.sample(grid.node(m, n));
  }
  return out;
}

ContrastGrid polar_image_to_contrast(std::span<const double> image, const PolarGrid& grid, int size) {
  if (image.size() != grid.size()) throw DataError("polar_image_to_contrast: image does not match the grid");
  ContrastGrid out(size);
  const auto radii = grid.radii();
  const int n1 = grid.n_angular();
  const int n2 = grid.n_radial();
  const double step = 2.0 * kPi / n1;
  const auto ring = [&](int m, double theta) {
    const double f = theta / step;
    const double base = std::floor(f);
    const double t = f - base;
    const int n0 = positive_mod(static_cast<int>(base), n1);
    return (1.0 - t) * image[grid.index(m, n0)] + t * image[grid.index(m, (n0 + 1) % n1)];
  };
  for (int row = 0; row < size; ++row) {
    for (int col = 0; col < size; ++col) {
      const Point2 p = out.centre(row, col);
      const double r = std::hypot(p.x, p.y);
      if (r > 1.0) continue;
      double theta = std::atan2(p.y, p.x);
      if (theta < 0.0) theta += 2.0 * kPi;
      if (r <= radii[n2 - 1]) {
        out(row, col) = ring(n2 - 1, theta);
        continue;
      }
      int m = 0;
      while (m + 1 < n2 && radii[m + 1] > r) ++m;
      // radii[m] >= r > radii[m + 1]
      const double t = (radii[m] - r) / (radii[m] - radii[m + 1]);
      out(row, col) = (1.0 - t) * ring(m, theta) + t * ring(m + 1, theta);
    }
  }
  return out;
}

double l2_norm(const PolarGrid& grid, std::span<const Complex> values) {
  double sum = 0.0;
  for (int m = 0; m < grid.n_radial(); ++m) {
    for (int n = 0; n < grid.n_angular(); ++n) sum += grid.weight(m) * std::norm(values[grid.index(m, n)]);
  }
  return std::sqrt(sum);
}

double l2_norm(const PolarGrid& grid, std::span<const double> values) {
  double sum = 0.0;
  for (int m = 0; m < grid.n_radial(); ++m) {
    for (int n = 0; n < grid.n_angular(); ++n) sum += grid.weight(m) * values[grid.index(m, n)] * values[grid.index(m, n)];
  }
  return std::sqrt(sum);
}

}  // namespace ulr
