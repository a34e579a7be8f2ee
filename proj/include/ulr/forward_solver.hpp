#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ulr/contrast.hpp"
#include "ulr/gmres.hpp"
#include "ulr/polar_grid.hpp"

namespace ulr {

using Complex = std::complex<double>;

// Strictly increasing angles in [0, 2 pi).
class DirectionSet {
 public:
  explicit DirectionSet(std::vector<double> angles);
  // 2 pi j / count, j = 0..count-1.
  static DirectionSet uniform(int count);

  std::size_t size() const noexcept { return angles_.size(); }
  std::span<const double> angles() const noexcept { return angles_; }
  double angle(std::size_t i) const noexcept { return angles_[i]; }
  Point2 unit(std::size_t i) const noexcept;

 private:
  std::vector<double> angles_;
};

// u_inf(x_i; theta_j): rows are observation directions, columns incidences.
struct FarFieldMatrix {
  double k = 0.0;
  DirectionSet observation;
  DirectionSet incidence;
  Eigen::MatrixXcd values;
  std::optional<double> aperture;  // limited aperture half-angle, if masked

  FarFieldMatrix(double wavenumber, DirectionSet obs, DirectionSet inc);
};

// Total scattered field u^s on the contrast grid, row-major like ContrastGrid.
struct ScatteredField {
  int size = 0;
  Eigen::VectorXcd values;
  double residual = 0.0;
  int iterations = 0;
};

struct SolverOptions {
  GmresOptions gmres{};
  int threads = 0;  // 0: hardware concurrency
};

// Discrete Lippmann-Schwinger operator
//   u^s = k^2 K[q (u^i + u^s)],  K f(x) = int (i/4) H_0^(1)(k|x - y|) f(y) dy
// on the cell-centred grid. K is applied as a convolution on the (2N)^2
// circulant embedding with FFTW; the self cell holds the integral of the
// kernel over a square cell. Thread-safe after construction.
class LippmannSchwinger {
 public:
  LippmannSchwinger(const ContrastGrid& q, double k, SolverOptions options = {});
  ~LippmannSchwinger();
  LippmannSchwinger(const LippmannSchwinger&) = delete;
  LippmannSchwinger& operator=(const LippmannSchwinger&) = delete;

  double wavenumber() const noexcept { return k_; }
  const ContrastGrid& contrast() const noexcept { return q_; }

  Eigen::VectorXcd incident(double theta) const;
  // out = K in (no k^2).
  void apply_kernel(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const;
  // k^2 K[q u^i]: the Born scattered field and the right-hand side of the solve.
  Eigen::VectorXcd born_scattered(double theta) const;
  ScatteredField solve(double theta) const;

  // Value of the kernel integral over the self cell.
  Complex self_cell() const noexcept { return self_cell_; }

 private:
  struct Fft;
  ContrastGrid q_;
  double k_;
  SolverOptions options_;
  Complex self_cell_;
  std::unique_ptr<Fft> fft_;
};

// Integral of (i/4) H_0^(1)(k|x|) over the square [-h/2, h/2]^2.
Complex square_cell_integral(double k, double h);

ScatteredField solve_scattered(const ContrastGrid& q, double k, double theta,
                               const SolverOptions& options = {});

// u_inf(x; theta) = k^2 int exp(-i k x.y) (u^s + u^i) q dy, midpoint rule.
std::vector<Complex> far_field(const ContrastGrid& q, const ScatteredField& field, double k,
                               double theta, const DirectionSet& obs);

// u_b_inf(x; theta) = k^2 int exp(i k (theta - x).y) q dy.
FarFieldMatrix born_far_field(const ContrastGrid& q, double k, const DirectionSet& inc,
                              const DirectionSet& obs);

struct Simulation {
  FarFieldMatrix full;
  FarFieldMatrix born;
  double nonlinearity = 0.0;  // rel(k)
  double max_residual = 0.0;
};

// Solves all incidences (in parallel), assembles both far-field matrices and
// rel(k) = ||U^s - U_b^s||_F / ||U^s||_F over the grid.
Simulation simulate(const ContrastGrid& q, double k, const DirectionSet& inc, const DirectionSet& obs,
                    const SolverOptions& options = {});

double degree_of_nonlinearity(const ContrastGrid& q, double k, const DirectionSet& inc,
                              const SolverOptions& options = {});

}  // namespace ulr
