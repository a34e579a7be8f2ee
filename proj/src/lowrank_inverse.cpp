#include "ulr/lowrank_inverse.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <string>

#include "ulr/errors.hpp"

namespace ulr {

bool Cutoff::keeps(std::complex<double> alpha, double chi) const {
  if (kind == CutoffKind::Eta) return std::abs(alpha) > value;
  return chi < 1.0 / value;
}

SpectralProjector::SpectralProjector(const PswfBasis& basis, const PolarGrid& grid)
    : basis_(basis), grid_(grid) {
  const auto entries = basis.entries();
  samples_.resize(static_cast<Eigen::Index>(entries.size()), static_cast<Eigen::Index>(grid.size()));
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const std::vector<double> values = basis.sample(entries[e], grid);
    samples_.row(static_cast<Eigen::Index>(e)) = Eigen::Map<const Eigen::RowVectorXd>(values.data(), values.size());
  }
  weights_.resize(static_cast<Eigen::Index>(grid.size()));
  for (int m = 0; m < grid.n_radial(); ++m) {
    for (int n = 0; n < grid.n_angular(); ++n) weights_[static_cast<Eigen::Index>(grid.index(m, n))] = grid.weight(m);
  }
}

std::vector<Complex> SpectralProjector::project(const ProcessedData& u) const {
  const double c = basis_.bandwidth();
  if (std::fabs(u.c - c) > 1e-12 * c) {
    throw BandwidthMismatchError("project: data bandwidth " + std::to_string(u.c) + " differs from basis bandwidth " +
                                 std::to_string(c));
  }
  if (!(u.grid == grid_)) throw DataError("project: data grid differs from the projector grid");
  const Eigen::Map<const Eigen::VectorXcd> values(u.values.data(), static_cast<Eigen::Index>(u.values.size()));
  const Eigen::VectorXcd weighted = values.cwiseProduct(weights_.cast<Complex>());
  const Eigen::VectorXcd coeffs = samples_.cast<Complex>() * weighted;
  return {coeffs.data(), coeffs.data() + coeffs.size()};
}

std::vector<Complex> SpectralProjector::synthesize(std::span<const Complex> coefficients) const {
  if (coefficients.size() != static_cast<std::size_t>(samples_.rows())) {
    throw DataError("synthesize: coefficient count does not match the basis");
  }
  const Eigen::Map<const Eigen::VectorXcd> coeffs(coefficients.data(), samples_.rows());
  const Eigen::VectorXcd values = samples_.transpose().cast<Complex>() * coeffs;
  return {values.data(), values.data() + values.size()};
}

ProcessedData SpectralProjector::born_data(std::span<const Complex> coefficients) const {
  std::vector<Complex> scaled(coefficients.begin(), coefficients.end());
  const auto entries = basis_.entries();
  for (std::size_t e = 0; e < entries.size(); ++e) scaled[e] *= basis_.alpha(entries[e].m, entries[e].n);
  ProcessedData out(basis_.bandwidth(), grid_);
  out.values = synthesize(scaled);
  return out;
}

std::vector<Complex> project(const ProcessedData& u, const PswfBasis& basis) {
  return SpectralProjector(basis, u.grid).project(u);
}

Reconstruction invert(const ProcessedData& u, const SpectralProjector& projector, const Cutoff& cutoff) {
  if (!(cutoff.value > 0.0)) throw DomainError("invert: cutoff parameter must be positive");
  const PswfBasis& basis = projector.basis();
  const std::vector<Complex> u_coeffs = projector.project(u);
  const auto entries = basis.entries();
  Reconstruction rec;
  rec.coefficients.cutoff = cutoff;
  std::vector<Complex> q_coeffs(entries.size(), Complex(0.0));
  double beta = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const Complex alpha = basis.alpha(entries[e].m, entries[e].n);
    const double chi = basis.chi(entries[e].m, entries[e].n);
    if (!cutoff.keeps(alpha, chi)) continue;
    q_coeffs[e] = u_coeffs[e] / alpha;
    beta = std::min(beta, std::abs(alpha));
    rec.coefficients.entries.push_back({entries[e], u_coeffs[e], q_coeffs[e], std::abs(alpha), chi});
  }
  if (rec.coefficients.entries.empty()) {
    throw EmptyCutoffError(cutoff.kind == CutoffKind::Eta
                               ? "invert: no |alpha| exceeds eta=" + std::to_string(cutoff.value)
                               : "invert: no chi below 1/alpha=" + std::to_string(1.0 / cutoff.value));
  }
  rec.beta = beta;
  rec.polar = projector.synthesize(q_coeffs);
  return rec;
}

Reconstruction invert_eta(const ProcessedData& u, const SpectralProjector& projector, double eta) {
  return invert(u, projector, {CutoffKind::Eta, eta});
}

Reconstruction invert_sl(const ProcessedData& u, const SpectralProjector& projector, double alpha_reg) {
  return invert(u, projector, {CutoffKind::SturmLiouville, alpha_reg});
}

ContrastGrid reconstruct_cartesian(const Reconstruction& rec, const PswfBasis& basis, int size) {
  std::vector<Complex> coefficients(basis.size(), Complex(0.0));
  for (const SpectralEntry& e : rec.coefficients.entries) {
    coefficients[basis.entry_index(e.index.m, e.index.n, e.index.l)] = e.q;
  }
  ContrastGrid out(size);
  std::vector<Point2> centres;
  centres.reserve(out.values().size());
  for (int row = 0; row < size; ++row) {
    for (int col = 0; col < size; ++col) centres.push_back(out.centre(row, col));
  }
  const std::vector<double> values = evaluate_expansion(basis, coefficients, centres);
  std::copy(values.begin(), values.end(), out.values().begin());
  return out;
}

double imaginary_ratio(const Reconstruction& rec, const PolarGrid& grid) {
  std::vector<double> re(rec.polar.size());
  std::vector<double> im(rec.polar.size());
  for (std::size_t i = 0; i < rec.polar.size(); ++i) {
    re[i] = rec.polar[i].real();
    im[i] = rec.polar[i].imag();
  }
  return l2_norm(grid, std::span<const double>(im)) / l2_norm(grid, std::span<const double>(re));
}

std::vector<FilterRow> filter_profile(const PswfBasis& basis, double eta) {
  std::vector<FilterRow> rows;
  for (const PswfEntry& e : basis.entries()) {
    const double magnitude = std::abs(basis.alpha(e.m, e.n));
    if (magnitude > eta) rows.push_back({e, magnitude, basis.chi(e.m, e.n)});
  }
  return rows;
}

void write_coefficients_csv(const SpectralCoefficients& coefficients, std::ostream& out) {
  out << "m,n,l,re_u,im_u,abs_alpha,chi,re_q,im_q\n";
  out << std::setprecision(17);
  for (const SpectralEntry& e : coefficients.entries) {
    out << e.index.m << ',' << e.index.n << ',' << e.index.l << ',' << e.u.real() << ',' << e.u.imag() << ','
        << e.alpha_abs << ',' << e.chi << ',' << e.q.real() << ',' << e.q.imag() << '\n';
  }
}

}  // namespace ulr
