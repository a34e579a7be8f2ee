#include "ulr/pswf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string>

#include "ulr/binary_io.hpp"
#include "ulr/errors.hpp"
#include "ulr/special_functions.hpp"

namespace ulr {

namespace {

constexpr double kOffBandTolerance = 1e-8;
// roundoff in the second-derivative terms grows like J^4
constexpr double kOffBandRelative = 1e-12;
constexpr double kTruncationTolerance = 1e-8;
constexpr double kEigenResidualTolerance = 1e-6;

std::complex<double> i_power(int m) {
  switch (m % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

std::vector<double> sorted_eigenvalues(const Eigen::MatrixXd& matrix) {
  const Eigen::Index size = matrix.rows();
  Eigen::VectorXd diag = matrix.diagonal();
  Eigen::VectorXd sub(size - 1);
  for (Eigen::Index i = 0; i + 1 < size; ++i) sub[i] = 0.5 * (matrix(i + 1, i) + matrix(i, i + 1));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& values = solver.eigenvalues();
  return {values.data(), values.data() + values.size()};
}

// Values of the radial profiles of all pairs at the projection nodes, and the
// kernel 2 pi J_m(c rho r) w(r) on those nodes.
struct RadialProjection {
  std::vector<double> weights;  // r dr = d eta / 4 already folded in
  std::vector<double> radii;
  Eigen::MatrixXd kernel;       // (rho, r), real part without i^m
};

RadialProjection make_projection(int m, double c, const QuadratureRule& eta_rule) {
  RadialProjection out;
  const std::size_t count = eta_rule.nodes.size();
  out.weights.resize(count);
  out.radii.resize(count);
  for (std::size_t q = 0; q < count; ++q) {
    out.radii[q] = std::sqrt(std::max(0.0, (eta_rule.nodes[q] + 1.0) / 2.0));
    out.weights[q] = eta_rule.weights[q] / 4.0;
  }
  out.kernel.resize(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(count));
  for (std::size_t p = 0; p < count; ++p) {
    for (std::size_t q = 0; q <= p; ++q) {
      const double value = 2.0 * std::numbers::pi * bessel_j(m, c * out.radii[p] * out.radii[q]);
      out.kernel(p, q) = value * out.weights[q];
      out.kernel(q, p) = value * out.weights[p];
    }
  }
  return out;
}

ProlateEigenvalue project_alpha(const RadialEigenpair& pair, const RadialProjection& projection) {
  const Eigen::Index count = projection.kernel.rows();
  Eigen::VectorXd profile(count);
  for (Eigen::Index q = 0; q < count; ++q) profile[q] = radial_profile(pair, projection.radii[q]);
  const Eigen::VectorXd transformed = projection.kernel * profile;
  double alpha_real = 0.0;
  for (Eigen::Index q = 0; q < count; ++q) alpha_real += transformed[q] * profile[q] * projection.weights[q];
  double residual_sq = 0.0;
  for (Eigen::Index q = 0; q < count; ++q) {
    const double diff = transformed[q] - alpha_real * profile[q];
    residual_sq += diff * diff * projection.weights[q];
  }
  ProlateEigenvalue out{i_power(pair.m) * alpha_real, std::sqrt(residual_sq)};
  if (!(out.residual <= kEigenResidualTolerance)) {
    throw EigenResidualError("prolate eigenvalue (m=" + std::to_string(pair.m) + ", n=" +
                             std::to_string(pair.n) + "): residual " + std::to_string(out.residual));
  }
  return out;
}

}  // namespace

int default_truncation(int m, double c) {
  return static_cast<int>(std::ceil(std::max(2.0 * c, 30.0))) + m;
}

Eigen::MatrixXd assemble_radial_operator(int m, double c, int truncation) {
  if (m < 0) throw DomainError("assemble_radial_operator: m must be non-negative");
  if (!(c >= 0.0)) throw DomainError("assemble_radial_operator: c must be non-negative");
  if (truncation < 2 + static_cast<int>(std::ceil(c)) + m) {
    throw DomainError("assemble_radial_operator: truncation J=" + std::to_string(truncation) +
                      " below 2 + ceil(c) + m");
  }
  const int size = truncation + 1;
  // Integrand is ((1 + eta)/2)^m times a polynomial of degree <= 2J + 1.
  const QuadratureRule rule = gauss_legendre(truncation + m / 2 + 8);
  const Eigen::Index nodes = static_cast<Eigen::Index>(rule.nodes.size());

  // basis(j, q) = sqrt(w_q / 4) r^m P_j; applied(j, q) = sqrt(w_q / 4) r^-m (D r^m P_j)
  // scaled by r^{2m} so the product integrates against r dr.
  Eigen::MatrixXd basis(size, nodes);
  Eigen::MatrixXd applied(size, nodes);
  const JacobiParams params{m, truncation};
  const double c2 = c * c;
  for (Eigen::Index q = 0; q < nodes; ++q) {
    const double eta = rule.nodes[q];
    const double r2 = (eta + 1.0) / 2.0;
    const double scale = std::sqrt(rule.weights[q] / 4.0) * std::pow(r2, 0.5 * m);
    const JacobiDerivatives p = jacobi_normalized_closed(params, eta);
    // D(r^m g) = r^m { [m(m+2) + c^2 r^2] g + [12 r^2 - 4 - 4(2m+1)(1 - r^2)] g' - 16 (1 - r^2) r^2 g'' }
    const double g_coeff = m * (m + 2.0) + c2 * r2;
    const double dg_coeff = 12.0 * r2 - 4.0 - 4.0 * (2.0 * m + 1.0) * (1.0 - r2);
    const double d2g_coeff = -16.0 * (1.0 - r2) * r2;
    for (int j = 0; j < size; ++j) {
      basis(j, q) = scale * p.value[j];
      applied(j, q) = scale * (g_coeff * p.value[j] + dg_coeff * p.first[j] + d2g_coeff * p.second[j]);
    }
  }
  Eigen::MatrixXd matrix = basis * applied.transpose();

  double worst = 0.0;
  const double tolerance = std::max(kOffBandTolerance, kOffBandRelative * matrix.cwiseAbs().maxCoeff());
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      if (std::abs(i - j) > 1) worst = std::max(worst, std::fabs(matrix(i, j)));
    }
  }
  if (worst > tolerance) {
    throw AssemblyError("assemble_radial_operator: off-band entry " + std::to_string(worst) +
                        " (m=" + std::to_string(m) + ")");
  }
  return matrix;
}

std::vector<RadialEigenpair> compute_radial_eigenpairs(int m, double c, int count, int truncation) {
  if (count < 1) throw DomainError("compute_radial_eigenpairs: count must be >= 1");
  if (count > truncation - 5) {
    throw DomainError("compute_radial_eigenpairs: count must be <= J - 5");
  }
  const Eigen::MatrixXd matrix = assemble_radial_operator(m, c, truncation);
  const int size = truncation + 1;
  Eigen::VectorXd diag = matrix.diagonal();
  Eigen::VectorXd sub(size - 1);
  for (int i = 0; i + 1 < size; ++i) sub[i] = 0.5 * (matrix(i + 1, i) + matrix(i, i + 1));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("compute_radial_eigenpairs: tridiagonal eigensolver failed");
  }

  const std::vector<double> doubled = sorted_eigenvalues(assemble_radial_operator(m, c, 2 * truncation));
  std::vector<RadialEigenpair> pairs;
  pairs.reserve(count);
  for (int n = 0; n < count; ++n) {
    const double chi = solver.eigenvalues()[n];
    const double drift = std::fabs(doubled[n] - chi) / std::max(1.0, std::fabs(chi));
    if (drift > kTruncationTolerance) {
      throw TruncationError("compute_radial_eigenpairs: chi_{" + std::to_string(m) + "," +
                            std::to_string(n) + "} moved by " + std::to_string(drift) +
                            " when doubling J=" + std::to_string(truncation));
    }
    RadialEigenpair pair;
    pair.m = m;
    pair.n = n;
    pair.chi = chi;
    Eigen::VectorXd v = solver.eigenvectors().col(n);
    v.normalize();
    double at_one = 0.0;
    for (int j = 0; j < size; ++j) at_one += v[j] * std::sqrt(2.0 * (2.0 * j + m + 1.0));
    if (at_one < 0.0) v = -v;
    pair.beta.assign(v.data(), v.data() + size);
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

double radial_profile(const RadialEigenpair& pair, double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("radial_profile: r outside [0, 1]");
  const double eta = 2.0 * r * r - 1.0;
  const JacobiDerivatives p = jacobi_normalized_closed({pair.m, pair.truncation()}, eta);
  double phi = 0.0;
  for (std::size_t j = 0; j < pair.beta.size(); ++j) phi += pair.beta[j] * p.value[j];
  return std::pow(r, pair.m) * phi;
}

std::vector<double> radial_profile(const RadialEigenpair& pair, std::span<const double> radii) {
  std::vector<double> out(radii.size());
  std::transform(radii.begin(), radii.end(), out.begin(),
                 [&pair](double r) { return radial_profile(pair, r); });
  return out;
}

QuadratureRule radial_projection_rule(const RadialEigenpair& pair, double c) {
  return gauss_legendre(pair.truncation() + static_cast<int>(std::ceil(c)) / 2 + 32);
}

ProlateEigenvalue compute_prolate_eigenvalue(const RadialEigenpair& pair, double c) {
  return compute_prolate_eigenvalue(pair, c, radial_projection_rule(pair, c));
}

ProlateEigenvalue compute_prolate_eigenvalue(const RadialEigenpair& pair, double c,
                                             const QuadratureRule& eta_rule) {
  return project_alpha(pair, make_projection(pair.m, c, eta_rule));
}

PswfBasis::PswfBasis(double c, int max_m, int max_n, std::vector<RadialEigenpair> radial,
                     std::vector<std::complex<double>> alpha)
    : c_(c), max_m_(max_m), max_n_(max_n), radial_(std::move(radial)), alpha_(std::move(alpha)) {
  if (!(c > 0.0)) throw DomainError("PswfBasis: bandwidth must be positive");
  if (max_m < 0 || max_n < 0) throw DomainError("PswfBasis: index bounds must be non-negative");
  const std::size_t expected = static_cast<std::size_t>(max_m + 1) * (max_n + 1);
  if (radial_.size() != expected || alpha_.size() != expected) {
    throw DataError("PswfBasis: expected " + std::to_string(expected) + " radial pairs");
  }
  for (int m = 0; m <= max_m; ++m) {
    for (int n = 0; n <= max_n; ++n) {
      const RadialEigenpair& pair = radial_[radial_index(m, n)];
      if (pair.m != m || pair.n != n || pair.beta.empty()) {
        throw DataError("PswfBasis: radial pairs out of order");
      }
      for (int l = 1; l <= harmonic_multiplicity(m); ++l) entries_.push_back({m, n, l});
    }
  }
}

std::size_t PswfBasis::radial_index(int m, int n) const {
  if (m < 0 || m > max_m_ || n < 0 || n > max_n_) {
    throw BasisBoundError("PswfBasis: (m=" + std::to_string(m) + ", n=" + std::to_string(n) +
                          ") outside basis bounds");
  }
  return static_cast<std::size_t>(m) * (max_n_ + 1) + n;
}

const RadialEigenpair& PswfBasis::radial(int m, int n) const { return radial_[radial_index(m, n)]; }

std::complex<double> PswfBasis::alpha(int m, int n) const { return alpha_[radial_index(m, n)]; }

std::size_t PswfBasis::entry_index(int m, int n, int l) const {
  if (l < 1 || l > harmonic_multiplicity(m)) throw InvalidIndexError("PswfBasis: invalid l");
  radial_index(m, n);
  // entries before order m: (max_n + 1) for m = 0, 2 (max_n + 1) for each later order
  const std::size_t per_n = static_cast<std::size_t>(max_n_ + 1);
  const std::size_t before = m == 0 ? 0 : per_n + 2 * per_n * (m - 1);
  return before + static_cast<std::size_t>(n) * harmonic_multiplicity(m) + (l - 1);
}

double PswfBasis::evaluate(const PswfEntry& entry, Point2 point) const {
  const double r = std::hypot(point.x, point.y);
  if (r > 1.0 + 1e-12) throw DomainError("PswfBasis::evaluate: point outside the unit disk");
  const double theta = std::atan2(point.y, point.x);
  return radial_profile(radial(entry.m, entry.n), std::min(r, 1.0)) *
         spherical_harmonic(entry.m, entry.l, theta);
}

std::vector<double> PswfBasis::evaluate(const PswfEntry& entry, std::span<const Point2> points) const {
  std::vector<double> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = evaluate(entry, points[i]);
  return out;
}

std::vector<double> PswfBasis::sample(const PswfEntry& entry, const PolarGrid& grid) const {
  const std::vector<double> profile = radial_profile(radial(entry.m, entry.n), grid.radii());
  std::vector<double> angular(grid.n_angular());
  for (int n = 0; n < grid.n_angular(); ++n) {
    angular[n] = spherical_harmonic(entry.m, entry.l, grid.angles()[n]);
  }
  std::vector<double> out(grid.size());
  for (int m = 0; m < grid.n_radial(); ++m) {
    for (int n = 0; n < grid.n_angular(); ++n) out[grid.index(m, n)] = profile[m] * angular[n];
  }
  return out;
}

std::vector<double> evaluate_expansion(const PswfBasis& basis, std::span<const std::complex<double>> coefficients,
                                       std::span<const Point2> points) {
  if (coefficients.size() != basis.size()) throw DataError("evaluate_expansion: coefficient count mismatch");
  std::vector<int> active_orders;
  for (int m = 0; m <= basis.max_m(); ++m) {
    for (int n = 0; n <= basis.max_n(); ++n) {
      for (int l = 1; l <= harmonic_multiplicity(m); ++l) {
        if (coefficients[basis.entry_index(m, n, l)] != 0.0 &&
            (active_orders.empty() || active_orders.back() != m)) {
          active_orders.push_back(m);
        }
      }
    }
  }
  std::vector<double> out(points.size(), 0.0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double r = std::hypot(points[i].x, points[i].y);
    if (r > 1.0) continue;
    const double theta = std::atan2(points[i].y, points[i].x);
    const double eta = 2.0 * r * r - 1.0;
    double value = 0.0;
    for (int m : active_orders) {
      const std::vector<double> jac = jacobi_normalized_closed({m, basis.radial(m, 0).truncation()}, eta).value;
      const double rm = std::pow(r, m);
      for (int n = 0; n <= basis.max_n(); ++n) {
        const RadialEigenpair& pair = basis.radial(m, n);
        double phi = 0.0;
        bool evaluated = false;
        for (int l = 1; l <= harmonic_multiplicity(m); ++l) {
          const double coeff = coefficients[basis.entry_index(m, n, l)].real();
          if (coeff == 0.0) continue;
          if (!evaluated) {
            for (std::size_t j = 0; j < pair.beta.size(); ++j) phi += pair.beta[j] * jac[j];
            evaluated = true;
          }
          value += coeff * rm * phi * spherical_harmonic(m, l, theta);
        }
      }
    }
    out[i] = value;
  }
  return out;
}

PswfBasis build_basis(double c, int max_m, int max_n) {
  if (!(c > 0.0)) throw DomainError("build_basis: bandwidth c must be positive");
  if (max_m < 0 || max_n < 0) throw DomainError("build_basis: index bounds must be non-negative");
  std::vector<RadialEigenpair> radial;
  std::vector<std::complex<double>> alpha;
  for (int m = 0; m <= max_m; ++m) {
    const int truncation = std::max(default_truncation(m, c), max_n + 6);
    std::vector<RadialEigenpair> pairs = compute_radial_eigenpairs(m, c, max_n + 1, truncation);
    for (std::size_t n = 1; n < pairs.size(); ++n) {
      if (!(pairs[n].chi > pairs[n - 1].chi)) {
        throw OrderingError("build_basis: chi not strictly increasing at m=" + std::to_string(m));
      }
    }
    const RadialProjection projection =
        make_projection(m, c, radial_projection_rule(pairs.front(), c));
    for (RadialEigenpair& pair : pairs) {
      const ProlateEigenvalue value = project_alpha(pair, projection);
      if (value.alpha == 0.0) throw NumericalError("build_basis: zero prolate eigenvalue");
      alpha.push_back(value.alpha);
      radial.push_back(std::move(pair));
    }
  }
  PswfBasis basis(c, max_m, max_n, std::move(radial), std::move(alpha));
  assert_basis_ordering(basis);
  return basis;
}

void save_basis(const PswfBasis& basis, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("save_basis: cannot open " + path.string());
  binary::Writer writer(out);
  writer.magic("PSWF1");
  writer.f64(basis.bandwidth());
  writer.u64(static_cast<std::uint64_t>(basis.max_m()));
  writer.u64(static_cast<std::uint64_t>(basis.max_n()));
  writer.u64(static_cast<std::uint64_t>(basis.radial(0, 0).truncation()));
  for (const PswfEntry& entry : basis.entries()) {
    const RadialEigenpair& pair = basis.radial(entry.m, entry.n);
    const std::complex<double> alpha = basis.alpha(entry.m, entry.n);
    writer.f64(pair.chi);
    writer.f64(alpha.real());
    writer.f64(alpha.imag());
    writer.u64(pair.beta.size());
    writer.f64s(pair.beta);
  }
  if (!out) throw DataError("save_basis: write failed for " + path.string());
}

PswfBasis load_basis(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("load_basis: cannot open " + path.string());
  binary::Reader reader(in, path.string());
  reader.expect_magic("PSWF1");
  const double c = reader.f64();
  const auto max_m = static_cast<int>(reader.count(100000, "max_m"));
  const auto max_n = static_cast<int>(reader.count(100000, "max_n"));
  reader.count(10000000, "J");
  std::vector<RadialEigenpair> radial;
  std::vector<std::complex<double>> alpha;
  for (int m = 0; m <= max_m; ++m) {
    for (int n = 0; n <= max_n; ++n) {
      for (int l = 1; l <= harmonic_multiplicity(m); ++l) {
        RadialEigenpair pair;
        pair.m = m;
        pair.n = n;
        pair.chi = reader.f64();
        const double re = reader.f64();
        const double im = reader.f64();
        pair.beta.resize(reader.count(10000000, "beta length"));
        reader.f64s(pair.beta);
        if (l == 1) {
          radial.push_back(std::move(pair));
          alpha.emplace_back(re, im);
        } else if (pair.chi != radial.back().chi || re != alpha.back().real() ||
                   im != alpha.back().imag() || pair.beta != radial.back().beta) {
          throw FormatError("load_basis: l=1 and l=2 records differ at (m=" + std::to_string(m) +
                            ", n=" + std::to_string(n) + ")");
        }
      }
    }
  }
  reader.expect_end();
  return PswfBasis(c, max_m, max_n, std::move(radial), std::move(alpha));
}

}  // namespace ulr
