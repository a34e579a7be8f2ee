#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ulr/contrast.hpp"
#include "ulr/forward_solver.hpp"
#include "ulr/polar_grid.hpp"
#include "ulr/pswf.hpp"

namespace ulr {

// All generators draw from Rng(seed) in sample order; the per-sample draw
// order is listed with each generator.

// n ~ {1,2,3}; per disk: radius ~ U(0.1, 0.3), centre ~ U(-0.4, 0.4)^2,
// amplitude ~ U(0.5, 1); then target max|q| ~ U(0.1, 0.8) and the sum is
// rescaled to it.
std::vector<ContrastGrid> gen_disks(std::uint64_t seed, int count, int size);

// n ~ {1,2,3}; per bump: a, b ~ U(16, 66), centre ~ U(-0.4, 0.4)^2, r ~ U(-1, 1);
// then target ||q||_inf ~ U(0.5, 0.8). Values outside the unit disk are set to 0.
std::vector<ContrastGrid> gen_gaussians(std::uint64_t seed, int count, int size);

// q = R sum_{m, n < max_index, l} xi / sqrt(chi_{m,n}) psi_{m,n,l}: xi ~ N(0, 1) in
// basis order, then target ||q||_inf ~ U(0.5, 0.8).
struct PswfCombination {
  ContrastGrid contrast;
  std::vector<std::complex<double>> coefficients;  // basis order, R included
};
std::vector<PswfCombination> gen_pswf_combo(std::uint64_t seed, int count, int max_index, const PswfBasis& basis,
                                            int size);

// Three disks of common amplitude at a fixed configuration inside B.
ContrastGrid preset_three_disks(double amplitude, int size);
// 25 Gaussian bumps on a 5 x 5 lattice with random jitter and signs, ||q||_inf = 0.7.
ContrastGrid preset_gaussian_lattice(std::uint64_t seed, int size);
// 0.6 (1 - |x|^2) cos x_1 sin x_2 inside B.
ContrastGrid preset_smooth(int size);

struct ArchiveOptions {
  double k = 16.0;
  int n_inc = 104;
  int n_obs = 104;
  int n1 = 104;
  int n2 = 56;
  std::string recipe;
  std::uint64_t seed = 0;
  std::optional<double> noise;  // delta for the full far field
  std::uint64_t noise_seed = 0;
  SolverOptions solver{};
};

struct ArchiveRecord {
  std::string id;
  double nonlinearity = 0.0;
};

// Writes one directory: per sample <id>_q.cgr1, <id>_full.ffm1, <id>_born.ffm1,
// <id>_u.prc1, <id>_ub.prc1, <id>_qpolar.prc1, plus manifest.json listing every
// file with its CRC-32.
std::vector<ArchiveRecord> build_samples(const std::vector<ContrastGrid>& contrasts, const ArchiveOptions& options,
                                         const std::filesystem::path& directory);

struct ManifestSample {
  std::string id;
  double nonlinearity = 0.0;
  std::vector<std::pair<std::string, std::string>> files;  // role, relative path
};

struct Manifest {
  std::string recipe;
  std::uint64_t seed = 0;
  double k = 0.0;
  int n1 = 0;
  int n2 = 0;
  std::vector<ManifestSample> samples;
};

// Parses manifest.json and checks that every record exists, parses and
// matches its checksum. Throws DataError otherwise.
Manifest verify_archive(const std::filesystem::path& directory);

}  // namespace ulr
