#pragma once

#include <complex>
#include <ostream>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ulr/contrast.hpp"
#include "ulr/data_pipeline.hpp"
#include "ulr/pswf.hpp"

namespace ulr {

enum class CutoffKind { Eta, SturmLiouville };

struct Cutoff {
  CutoffKind kind = CutoffKind::Eta;
  double value = 0.0;  // eta, or the regularization parameter alpha (chi < 1/alpha)

  bool keeps(std::complex<double> alpha, double chi) const;
};

struct SpectralEntry {
  PswfEntry index;
  Complex u;           // <u, psi>
  Complex q;           // u / alpha
  double alpha_abs = 0.0;
  double chi = 0.0;
};

// Retained entries only, in basis order.
struct SpectralCoefficients {
  Cutoff cutoff;
  std::vector<SpectralEntry> entries;
};

// Basis sampled on a polar grid, weighted by the grid quadrature.
class SpectralProjector {
 public:
  SpectralProjector(const PswfBasis& basis, const PolarGrid& grid);

  const PswfBasis& basis() const noexcept { return basis_; }
  const PolarGrid& grid() const noexcept { return grid_; }

  // <u, psi_e> for every basis entry. Throws BandwidthMismatchError when the
  // bandwidths differ and DataError when the grids differ.
  std::vector<Complex> project(const ProcessedData& u) const;
  // sum_e coeffs_e psi_e on the grid nodes.
  std::vector<Complex> synthesize(std::span<const Complex> coefficients) const;
  // F_b applied to sum_e coeffs_e psi_e, i.e. sum_e alpha_e coeffs_e psi_e.
  ProcessedData born_data(std::span<const Complex> coefficients) const;

 private:
  const PswfBasis& basis_;
  PolarGrid grid_;
  Eigen::MatrixXd samples_;  // (entry, node), unweighted
  Eigen::VectorXd weights_;  // per node
};

std::vector<Complex> project(const ProcessedData& u, const PswfBasis& basis);

struct Reconstruction {
  SpectralCoefficients coefficients;
  std::vector<Complex> polar;  // q on the polar grid nodes
  double beta = 0.0;           // min retained |alpha|
};

Reconstruction invert_eta(const ProcessedData& u, const SpectralProjector& projector, double eta);
Reconstruction invert_sl(const ProcessedData& u, const SpectralProjector& projector, double alpha_reg);
Reconstruction invert(const ProcessedData& u, const SpectralProjector& projector, const Cutoff& cutoff);

// Real part of sum q_e psi_e evaluated at the cell centres inside the unit disk.
ContrastGrid reconstruct_cartesian(const Reconstruction& rec, const PswfBasis& basis, int size);
// Imaginary-to-real norm ratio of the polar reconstruction.
double imaginary_ratio(const Reconstruction& rec, const PolarGrid& grid);

struct FilterRow {
  PswfEntry index;
  double alpha_abs = 0.0;
  double chi = 0.0;
};
std::vector<FilterRow> filter_profile(const PswfBasis& basis, double eta);

// m,n,l,re(u),im(u),|alpha|,chi,re(q),im(q)
void write_coefficients_csv(const SpectralCoefficients& coefficients, std::ostream& out);

}  // namespace ulr
