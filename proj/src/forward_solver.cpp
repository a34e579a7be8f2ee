#include "ulr/forward_solver.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "parallel.hpp"
#include "ulr/errors.hpp"
#include "ulr/quadrature.hpp"
#include "ulr/special_functions.hpp"

namespace ulr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::mutex& planner_mutex() {
  static std::mutex mutex;
  return mutex;
}

struct FftwFree {
  void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex, FftwFree>;

FftwBuffer allocate(std::size_t count) {
  auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * count));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer(p);
}

Complex* as_complex(fftw_complex* p) { return reinterpret_cast<Complex*>(p); }

// Separable exponentials exp(sign i k (d_1 x_col + d_2 y_row)) for a direction set.
struct Exponentials {
  Eigen::MatrixXcd along_x;  // (direction, col)
  Eigen::MatrixXcd along_y;  // (direction, row)
};

Exponentials exponentials(const DirectionSet& dirs, const ContrastGrid& q, double k, double sign) {
  const int n = q.size();
  Exponentials e{Eigen::MatrixXcd(dirs.size(), n), Eigen::MatrixXcd(dirs.size(), n)};
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const Point2 d = dirs.unit(i);
    for (int j = 0; j < n; ++j) {
      e.along_x(i, j) = std::polar(1.0, sign * k * d.x * q.coordinate(j));
      e.along_y(i, j) = std::polar(1.0, sign * k * d.y * q.coordinate(j));
    }
  }
  return e;
}

using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// k^2 h^2 sum_y exp(-i k x.y) f(y) for every observation direction.
Eigen::VectorXcd far_field_sum(const Exponentials& e, const Eigen::VectorXcd& f, int n, double k, double h) {
  const Eigen::Map<const RowMajor> grid(f.data(), n, n);
  const Eigen::MatrixXcd partial = e.along_x * grid.transpose();  // (dir, row)
  return (partial.cwiseProduct(e.along_y)).rowwise().sum() * (k * k * h * h);
}

}  // namespace

DirectionSet::DirectionSet(std::vector<double> angles) : angles_(std::move(angles)) {
  if (angles_.empty()) throw DomainError("DirectionSet: need at least one direction");
  for (std::size_t i = 0; i < angles_.size(); ++i) {
    if (!(angles_[i] >= 0.0 && angles_[i] < kTwoPi)) throw DomainError("DirectionSet: angle outside [0, 2 pi)");
    if (i > 0 && !(angles_[i] > angles_[i - 1])) throw DomainError("DirectionSet: angles not strictly increasing");
  }
}

DirectionSet DirectionSet::uniform(int count) {
  if (count < 1) throw DomainError("DirectionSet::uniform: count must be >= 1");
  std::vector<double> angles(count);
  for (int j = 0; j < count; ++j) angles[j] = kTwoPi * j / count;
  return DirectionSet(std::move(angles));
}

Point2 DirectionSet::unit(std::size_t i) const noexcept {
  return {std::cos(angles_[i]), std::sin(angles_[i])};
}

FarFieldMatrix::FarFieldMatrix(double wavenumber, DirectionSet obs, DirectionSet inc)
    : k(wavenumber),
      observation(std::move(obs)),
      incidence(std::move(inc)),
      values(Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(observation.size()),
                                    static_cast<Eigen::Index>(incidence.size()))) {}

Complex square_cell_integral(double k, double h) {
  // -(1/2pi) ln r integrated exactly. The radial remainder g(r) behaves like
  // r^2 ln r, so it is integrated in polar coordinates over the eight
  // triangles 0 <= phi <= pi/4, r <= h / (2 cos phi).
  const double log_part = h * h * (std::log(h / 2.0) + (std::numbers::ln2 - 3.0 + std::numbers::pi / 2.0) / 2.0);
  Complex total = -log_part / kTwoPi;
  const QuadratureRule rule = gauss_legendre(16);
  const double eighth = std::numbers::pi / 8.0;
  for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
    const double phi = eighth * (rule.nodes[a] + 1.0);
    const double rmax = h / (2.0 * std::cos(phi));
    Complex inner = 0.0;
    for (std::size_t b = 0; b < rule.nodes.size(); ++b) {
      const double r = 0.5 * rmax * (rule.nodes[b] + 1.0);
      const Complex g = Complex(0.0, 0.25) * hankel1_0(k * r) + std::log(r) / kTwoPi;
      inner += g * (0.5 * rmax * rule.weights[b] * r);
    }
    total += 8.0 * eighth * rule.weights[a] * inner;
  }
  return total;
}

struct LippmannSchwinger::Fft {
  int n = 0;
  int padded = 0;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::vector<Complex> kernel_hat;

  ~Fft() {
    std::lock_guard lock(planner_mutex());
    if (forward != nullptr) fftw_destroy_plan(forward);
    if (backward != nullptr) fftw_destroy_plan(backward);
  }

  std::size_t padded_size() const { return static_cast<std::size_t>(padded) * padded; }

  // out = K in, using the caller's workspace of padded_size() entries.
  void convolve(const Complex* in, Complex* out, fftw_complex* work) const {
    Complex* w = as_complex(work);
    std::fill(w, w + padded_size(), Complex(0.0));
    for (int r = 0; r < n; ++r) {
      std::copy(in + static_cast<std::size_t>(r) * n, in + static_cast<std::size_t>(r + 1) * n,
                w + static_cast<std::size_t>(r) * padded);
    }
    fftw_execute_dft(forward, work, work);
    const double scale = 1.0 / static_cast<double>(padded_size());
    for (std::size_t i = 0; i < padded_size(); ++i) w[i] *= kernel_hat[i] * scale;
    fftw_execute_dft(backward, work, work);
    for (int r = 0; r < n; ++r) {
      std::copy(w + static_cast<std::size_t>(r) * padded, w + static_cast<std::size_t>(r) * padded + n,
                out + static_cast<std::size_t>(r) * n);
    }
  }
};

LippmannSchwinger::LippmannSchwinger(const ContrastGrid& q, double k, SolverOptions options)
    : q_(q), k_(k), options_(options), fft_(std::make_unique<Fft>()) {
  if (!(k > 0.0)) throw DomainError("LippmannSchwinger: k must be positive");
  const int n = q.size();
  const double h = q.spacing();
  self_cell_ = square_cell_integral(k, h);

  fft_->n = n;
  fft_->padded = 2 * n;
  const int p = fft_->padded;
  FftwBuffer kernel = allocate(fft_->padded_size());
  Complex* kv = as_complex(kernel.get());
  std::fill(kv, kv + fft_->padded_size(), Complex(0.0));
  for (int dr = 0; dr < n; ++dr) {
    for (int dc = 0; dc < n; ++dc) {
      const Complex value = (dr == 0 && dc == 0)
                                ? self_cell_
                                : Complex(0.0, 0.25) * hankel1_0(k * h * std::hypot(dr, dc)) * (h * h);
      const int rows[2] = {dr, (p - dr) % p};
      const int cols[2] = {dc, (p - dc) % p};
      for (int a : rows) {
        for (int b : cols) kv[static_cast<std::size_t>(a) * p + b] = value;
      }
    }
  }
  {
    std::lock_guard lock(planner_mutex());
    fft_->forward = fftw_plan_dft_2d(p, p, kernel.get(), kernel.get(), FFTW_FORWARD, FFTW_ESTIMATE);
    fft_->backward = fftw_plan_dft_2d(p, p, kernel.get(), kernel.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  if (fft_->forward == nullptr || fft_->backward == nullptr) throw NumericalError("FFTW planning failed");
  // planning with FFTW_ESTIMATE leaves the array untouched
  fftw_execute_dft(fft_->forward, kernel.get(), kernel.get());
  fft_->kernel_hat.assign(kv, kv + fft_->padded_size());
}

LippmannSchwinger::~LippmannSchwinger() = default;

Eigen::VectorXcd LippmannSchwinger::incident(double theta) const {
  const int n = q_.size();
  Eigen::VectorXcd out(static_cast<Eigen::Index>(n) * n);
  const double dx = std::cos(theta);
  const double dy = std::sin(theta);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      out[static_cast<Eigen::Index>(r) * n + c] = std::polar(1.0, k_ * (dx * q_.coordinate(c) + dy * q_.coordinate(r)));
    }
  }
  return out;
}

void LippmannSchwinger::apply_kernel(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
  const std::size_t cells = static_cast<std::size_t>(q_.size()) * q_.size();
  if (static_cast<std::size_t>(in.size()) != cells) throw DataError("apply_kernel: size mismatch");
  out.resize(in.size());
  FftwBuffer work = allocate(fft_->padded_size());
  fft_->convolve(in.data(), out.data(), work.get());
}

Eigen::VectorXcd LippmannSchwinger::born_scattered(double theta) const {
  const Eigen::Map<const Eigen::VectorXd> q(q_.values().data(), static_cast<Eigen::Index>(q_.values().size()));
  Eigen::VectorXcd source = incident(theta).cwiseProduct(q.cast<Complex>());
  Eigen::VectorXcd out;
  apply_kernel(source, out);
  return out * (k_ * k_);
}

ScatteredField LippmannSchwinger::solve(double theta) const {
  const Eigen::Index cells = static_cast<Eigen::Index>(q_.values().size());
  const Eigen::Map<const Eigen::VectorXd> qmap(q_.values().data(), cells);
  const Eigen::VectorXcd q = qmap.cast<Complex>();
  FftwBuffer work = allocate(fft_->padded_size());
  Eigen::VectorXcd scratch(cells);
  const double k2 = k_ * k_;

  // rhs = k^2 K[q u^i]
  Eigen::VectorXcd rhs(cells);
  scratch = incident(theta).cwiseProduct(q);
  fft_->convolve(scratch.data(), rhs.data(), work.get());
  rhs *= k2;

  const auto apply = [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
    scratch = x.cwiseProduct(q);
    y.resize(cells);
    fft_->convolve(scratch.data(), y.data(), work.get());
    y = x - k2 * y;
  };
  ScatteredField field;
  field.size = q_.size();
  field.values = Eigen::VectorXcd::Zero(cells);
  const GmresResult result = gmres(apply, rhs, field.values, options_.gmres);
  field.residual = result.relative_residual;
  field.iterations = result.iterations;
  return field;
}

ScatteredField solve_scattered(const ContrastGrid& q, double k, double theta, const SolverOptions& options) {
  return LippmannSchwinger(q, k, options).solve(theta);
}

std::vector<Complex> far_field(const ContrastGrid& q, const ScatteredField& field, double k, double theta,
                               const DirectionSet& obs) {
  if (field.size != q.size()) throw DataError("far_field: field and contrast grids differ");
  const int n = q.size();
  const Exponentials e = exponentials(obs, q, k, -1.0);
  Eigen::VectorXcd f(static_cast<Eigen::Index>(n) * n);
  const Point2 d{std::cos(theta), std::sin(theta)};
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const Eigen::Index i = static_cast<Eigen::Index>(r) * n + c;
      const Complex ui = std::polar(1.0, k * (d.x * q.coordinate(c) + d.y * q.coordinate(r)));
      f[i] = (field.values[i] + ui) * q(r, c);
    }
  }
  const Eigen::VectorXcd values = far_field_sum(e, f, n, k, q.spacing());
  return {values.data(), values.data() + values.size()};
}

FarFieldMatrix born_far_field(const ContrastGrid& q, double k, const DirectionSet& inc, const DirectionSet& obs) {
  if (!(k > 0.0)) throw DomainError("born_far_field: k must be positive");
  FarFieldMatrix out(k, obs, inc);
  const int n = q.size();
  const Exponentials e_obs = exponentials(obs, q, k, -1.0);
  const Exponentials e_inc = exponentials(inc, q, k, 1.0);
  Eigen::VectorXcd f(static_cast<Eigen::Index>(n) * n);
  for (std::size_t j = 0; j < inc.size(); ++j) {
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        f[static_cast<Eigen::Index>(r) * n + c] = e_inc.along_x(j, c) * e_inc.along_y(j, r) * q(r, c);
      }
    }
    out.values.col(static_cast<Eigen::Index>(j)) = far_field_sum(e_obs, f, n, k, q.spacing());
  }
  return out;
}

Simulation simulate(const ContrastGrid& q, double k, const DirectionSet& inc, const DirectionSet& obs,
                    const SolverOptions& options) {
  const LippmannSchwinger solver(q, k, options);
  Simulation sim{FarFieldMatrix(k, obs, inc), born_far_field(q, k, inc, obs), 0.0, 0.0};
  const Exponentials e_obs = exponentials(obs, q, k, -1.0);
  const int n = q.size();
  const Eigen::Index cells = static_cast<Eigen::Index>(n) * n;
  std::vector<double> diff_sq(inc.size(), 0.0);
  std::vector<double> field_sq(inc.size(), 0.0);
  std::vector<double> residuals(inc.size(), 0.0);

  detail::parallel_for(inc.size(), options.threads, [&](std::size_t j) {
    const double theta = inc.angle(j);
    ScatteredField field;
    try {
      field = solver.solve(theta);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError("incidence " + std::to_string(j) + ": " + e.what(), e.residual(), e.iterations());
    }
    const Eigen::VectorXcd born = solver.born_scattered(theta);
    diff_sq[j] = (field.values - born).squaredNorm();
    field_sq[j] = field.values.squaredNorm();
    residuals[j] = field.residual;
    Eigen::VectorXcd f = field.values + solver.incident(theta);
    for (Eigen::Index i = 0; i < cells; ++i) f[i] *= q.values()[static_cast<std::size_t>(i)];
    sim.full.values.col(static_cast<Eigen::Index>(j)) = far_field_sum(e_obs, f, n, k, q.spacing());
  });

  double diff = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < inc.size(); ++j) {
    diff += diff_sq[j];
    total += field_sq[j];
    sim.max_residual = std::max(sim.max_residual, residuals[j]);
  }
  sim.nonlinearity = total > 0.0 ? std::sqrt(diff / total) : std::numeric_limits<double>::quiet_NaN();
  return sim;
}

double degree_of_nonlinearity(const ContrastGrid& q, double k, const DirectionSet& inc, const SolverOptions& options) {
  const double rel = simulate(q, k, inc, DirectionSet::uniform(1), options).nonlinearity;
  if (std::isnan(rel)) throw NumericalError("degree_of_nonlinearity: scattered field is identically zero");
  return rel;
}

}  // namespace ulr
