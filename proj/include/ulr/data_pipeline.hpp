#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ulr/contrast.hpp"
#include "ulr/forward_solver.hpp"
#include "ulr/polar_grid.hpp"

namespace ulr {

// u(p_{m,n}; c) on the polar grid, radial-major. For limited-aperture data the
// nodes outside D_L hold exact zeros.
struct ProcessedData {
  double c;
  PolarGrid grid;
  std::vector<Complex> values;
  std::optional<double> aperture;

  ProcessedData(double bandwidth, PolarGrid polar);

  Complex& at(int m, int n) { return values[grid.index(m, n)]; }
  Complex at(int m, int n) const { return values[grid.index(m, n)]; }
};

// Wraps to (-pi, pi].
double wrap_angle(double angle);
bool within_aperture(double angle, double half_angle);

// Nearest realizable pair (x_i, theta_j) for one grid node: the argmin of
// |p - (theta_j - x_i)/2|. Distances within 1e-12 count as ties; among ties a
// pair with both directions inside the aperture wins, then the smallest angle
// of x_i and then of theta_j, both measured counterclockwise from the node angle.
// Rotations mapping the directions and the grid angles to themselves therefore
// permute the matches.
struct PairMatch {
  int obs = 0;
  int inc = 0;
  double distance = 0.0;
  bool in_aperture = true;
};

struct PairMatching {
  std::vector<PairMatch> matches;  // radial-major, one per grid node
  std::optional<double> aperture;
};

PairMatching match_pairs(const DirectionSet& obs, const DirectionSet& inc, const PolarGrid& grid,
                         std::optional<double> aperture = std::nullopt);

// u(p_{m,n}) = u_inf(x_i*; theta_j*) / k^2 with c = 2k.
ProcessedData process_far_field(const FarFieldMatrix& ff, const PolarGrid& grid);
ProcessedData process_far_field(const FarFieldMatrix& ff, const PolarGrid& grid, const PairMatching& matching);

// Far-field matrix holding k^2 u(p_{m,n}) at each node's matched pair and zero
// elsewhere; process_far_field inverts it when the matching is injective.
FarFieldMatrix embed_processed(const ProcessedData& data, const DirectionSet& obs, const DirectionSet& inc);

// u_inf (1 + delta xi), Re xi and Im xi independent N(0, 1/2). Draws run over
// observations (outer) and incidences (inner), real part first.
FarFieldMatrix add_noise(const FarFieldMatrix& ff, double delta, std::uint64_t seed);

// R_phi q(x) = q(R_{-phi} x): bilinear resampling, index permutation for
// multiples of pi/2.
ContrastGrid rotate_contrast(const ContrastGrid& q, double phi);

// Cyclic shift of the angular axis: new(m, n) = old(m, n - steps mod N1).
ProcessedData rotate_processed(const ProcessedData& data, int steps);

// Zeroes rows and columns whose direction has |wrap_angle| > half_angle.
FarFieldMatrix apply_limited_aperture(const FarFieldMatrix& ff, double half_angle);

// q sampled bilinearly at the polar nodes (radial-major).
std::vector<double> contrast_to_polar_image(const ContrastGrid& q, const PolarGrid& grid);

// Inverse resampling of a polar image to an N x N Cartesian grid: linear in r
// between rings, periodic linear in theta, zero outside the unit disk.
ContrastGrid polar_image_to_contrast(std::span<const double> image, const PolarGrid& grid, int size);

// L2(B) inner products and norms with the grid quadrature.
double l2_norm(const PolarGrid& grid, std::span<const Complex> values);
double l2_norm(const PolarGrid& grid, std::span<const double> values);

}  // namespace ulr
