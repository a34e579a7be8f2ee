#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "oracles/disk_oracle.hpp"
#include "oracles/fourier_oracle.hpp"
#include "ulr/data_pipeline.hpp"
#include "ulr/dataset_gen.hpp"
#include "ulr/errors.hpp"
#include "ulr/forward_solver.hpp"
#include "ulr/lowrank_inverse.hpp"
#include "ulr/pswf.hpp"
#include "ulr/rng.hpp"

using namespace ulr;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

const PswfBasis& basis10() {
  static const PswfBasis b = build_basis(32.0, 10, 10);
  return b;
}

double frobenius_rel(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).norm() / b.norm(); }

double relative_l2(const PolarGrid& grid, const std::vector<Complex>& a, const std::vector<Complex>& b) {
  std::vector<Complex> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  return l2_norm(grid, std::span<const Complex>(diff)) / l2_norm(grid, std::span<const Complex>(b));
}

Outcome orthonormality() {
  const auto start = std::chrono::steady_clock::now();
  const PswfBasis basis = build_basis(32.0, 10, 10);
  const PolarGrid grid(104, 56);
  const auto entries = basis.entries();
  Eigen::MatrixXd samples(static_cast<Eigen::Index>(entries.size()), static_cast<Eigen::Index>(grid.size()));
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const auto v = basis.sample(entries[e], grid);
    for (std::size_t i = 0; i < v.size(); ++i) samples(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(i)) = v[i];
  }
  Eigen::VectorXd w(static_cast<Eigen::Index>(grid.size()));
  for (int m = 0; m < grid.n_radial(); ++m) {
    for (int n = 0; n < grid.n_angular(); ++n) w[static_cast<Eigen::Index>(grid.index(m, n))] = grid.weight(m);
  }
  const Eigen::MatrixXd gram = samples * w.asDiagonal() * samples.transpose();
  const double err = (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {err < 1e-8 && seconds < 60.0,
          fmt("%zu entries, max|G - I| = %.2e (< 1e-8), %.1f s (< 60 s)", entries.size(), err, seconds)};
}

Outcome eigen_relation() {
  const PswfBasis& basis = basis10();
  const oracle::DenseFourier fourier(32.0, basis.max_m());
  double worst = 0.0;
  for (int m = 0; m <= basis.max_m(); ++m) {
    for (int n = 0; n <= basis.max_n(); ++n) {
      worst = std::max(worst, fourier.residual(m, basis.radial(m, n).beta, basis.alpha(m, n)));
    }
  }
  return {worst <= 1e-6, fmt("max ||F psi - alpha psi|| = %.2e over %zu entries (<= 1e-6)", worst, basis.size())};
}

Outcome ordering() {
  const PswfBasis basis = build_basis(32.0, 40, 10);
  bool ok = true;
  for (int m = 0; m <= basis.max_m(); ++m) {
    for (int n = 1; n <= basis.max_n(); ++n) ok = ok && basis.chi(m, n) > basis.chi(m, n - 1);
    ok = ok && verify_alpha_ordering(basis, m).strictly_decreasing;
  }
  try {
    assert_basis_ordering(basis);
  } catch (const OrderingError&) {
    ok = false;
  }
  const double tail = std::abs(basis.alpha(basis.max_m(), basis.max_n()));
  const double head = std::abs(basis.alpha(0, 0));
  ok = ok && tail < 1e-12 * head;
  return {ok, fmt("c = 32, m <= 40, n <= 10: chi increasing, |alpha| decreasing, |alpha_{40,10}|/|alpha_{0,0}| = %.1e",
                  tail / head)};
}

Outcome disk_oracle() {
  const ContrastGrid q = disk_contrast(208, {0.0, 0.0}, 0.5, 0.3);
  const DirectionSet d = DirectionSet::uniform(104);
  const Simulation sim = simulate(q, 16.0, d, d);
  const oracle::PenetrableDisk disk(16.0, 0.5, 0.3);
  Eigen::MatrixXcd want(104, 104);
  for (int i = 0; i < 104; ++i) {
    for (int j = 0; j < 104; ++j) want(i, j) = disk.far_field(d.angle(i), d.angle(j));
  }
  const double err = frobenius_rel(sim.full.values, want);
  return {err < 1e-3, fmt("k = 16, q = 0.3, radius 0.5, N = 208, 104 x 104: relative Frobenius error %.2e (< 1e-3)", err)};
}

Outcome reciprocity() {
  const auto qs = gen_disks(2024, 3, 128);
  const DirectionSet d = DirectionSet::uniform(104);
  double worst = 0.0;
  for (const ContrastGrid& q : qs) {
    const FarFieldMatrix ff = simulate(q, 16.0, d, d).full;
    const double scale = ff.values.cwiseAbs().maxCoeff();
    for (int i = 0; i < 104; ++i) {
      for (int j = 0; j < 104; ++j) {
        worst = std::max(worst, std::abs(ff.values(i, j) - ff.values((j + 52) % 104, (i + 52) % 104)) / scale);
      }
    }
  }
  return {worst < 1e-5, fmt("3 random disk contrasts, 104 x 104: max violation / max|u| = %.2e (< 1e-5)", worst)};
}

Outcome rotation() {
  const ContrastGrid q = gen_disks(77, 1, 128)[0];
  const int steps = 7;
  const double phi = 2 * kPi * steps / 104;
  const DirectionSet d = DirectionSet::uniform(104);
  const PolarGrid grid(104, 56);
  const PairMatching matching = match_pairs(d, d, grid);
  const Simulation plain = simulate(q, 16.0, d, d);
  const Simulation turned = simulate(rotate_contrast(q, phi), 16.0, d, d);
  const auto defect = [&](const FarFieldMatrix& a, const FarFieldMatrix& b) {
    const ProcessedData lhs = process_far_field(b, grid, matching);
    const ProcessedData rhs = rotate_processed(process_far_field(a, grid, matching), steps);
    return relative_l2(grid, lhs.values, rhs.values);
  };
  const double born = defect(plain.born, turned.born);
  const double full = defect(plain.full, turned.full);

  ProcessedData u(32.0, grid);
  Rng rng(5);
  for (Complex& v : u.values) v = Complex(rng.normal(), rng.normal());
  double shift = 0.0;
  const ProcessedData composed = rotate_processed(rotate_processed(u, 30), 74);
  for (std::size_t i = 0; i < u.values.size(); ++i) shift = std::max(shift, std::abs(composed.values[i] - u.values[i]));
  const ProcessedData one = rotate_processed(u, 1);
  for (int m = 0; m < grid.n_radial(); ++m) {
    for (int n = 0; n < grid.n_angular(); ++n) {
      shift = std::max(shift, std::abs(one.at(m, (n + 1) % 104) - u.at(m, n)));
    }
  }
  return {born < 2e-2 && full < 2e-2 && shift < 1e-12,
          fmt("phi = 2 pi 7/104: Born %.2e, full %.2e (< 2e-2); cyclic shifts %.1e (< 1e-12)", born, full, shift)};
}

Outcome lipschitz() {
  const PswfBasis& basis = basis10();
  const PolarGrid grid(104, 56);
  const SpectralProjector projector(basis, grid);
  double peak = 0.0;
  for (const PswfEntry& e : basis.entries()) peak = std::max(peak, std::abs(basis.alpha(e.m, e.n)));
  const double eta = 1e-2 * peak;
  double worst = -1.0;
  int trials = 0;
  bool ok = true;
  for (const double delta : {0.0, 0.01, 0.1}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng rng(1000 * seed + 17);
      std::vector<Complex> coeffs(basis.size(), Complex(0.0));
      for (const PswfEntry& e : basis.entries()) {
        if (std::abs(basis.alpha(e.m, e.n)) > eta) {
          coeffs[basis.entry_index(e.m, e.n, e.l)] = rng.normal() / std::sqrt(basis.chi(e.m, e.n));
        }
      }
      ProcessedData u = projector.born_data(coeffs);
      std::vector<Complex> noise(grid.size());
      for (Complex& v : noise) v = Complex(rng.normal(), rng.normal());
      const double norm = l2_norm(grid, std::span<const Complex>(noise));
      for (std::size_t i = 0; i < noise.size(); ++i) u.values[i] += noise[i] * (delta / norm);
      const Reconstruction rec = invert_eta(u, projector, eta);
      const std::vector<Complex> truth = projector.synthesize(coeffs);
      std::vector<Complex> diff(truth.size());
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = rec.polar[i] - truth[i];
      const double err = l2_norm(grid, std::span<const Complex>(diff));
      ok = ok && err <= delta / eta + 1e-5;
      worst = std::max(worst, err / (delta / eta + 1e-5));
      ++trials;
    }
  }
  return {ok, fmt("eta = 1e-2 max|alpha|, delta in {0, 0.01, 0.1}, %d trials: max err / (delta/eta + 1e-5) = %.3f",
                  trials, worst)};
}

Outcome noise_model() {
  const ContrastGrid q = gen_disks(3, 1, 64)[0];
  const DirectionSet d = DirectionSet::uniform(104);
  const FarFieldMatrix clean = born_far_field(q, 16.0, d, d);
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    total += (add_noise(clean, 0.2, seed).values - clean.values).norm() / clean.values.norm();
  }
  const double mean = total / 100;
  return {mean >= 0.17 && mean <= 0.23, fmt("delta = 0.2, 100 seeds: mean relative perturbation %.4f (in [0.17, 0.23])", mean)};
}

Outcome nonlinearity() {
  const DirectionSet obs = DirectionSet::uniform(104);
  const DirectionSet inc = DirectionSet::uniform(16);
  const auto qs = gen_disks(1, 20, 128);
  int inside = 0;
  for (const ContrastGrid& q : qs) {
    const double rel = degree_of_nonlinearity(q, 16.0, inc);
    inside += rel >= 0.2 && rel <= 1.6 ? 1 : 0;
  }
  const DirectionSet few = DirectionSet::uniform(8);
  std::vector<double> rel;
  for (const double amplitude : {0.35, 0.7, 1.0}) {
    rel.push_back(simulate(preset_three_disks(amplitude, 208), 16.0, few, obs).nonlinearity);
  }
  const bool monotone = rel[0] < rel[1] && rel[1] < rel[2];
  const bool range = rel[1] >= 1.5 && rel[1] <= 4.5 && rel[2] >= 1.5 && rel[2] <= 4.5;
  return {inside >= 16 && monotone && range,
          fmt("random disks: %d/20 in [0.2, 1.6] (>= 80%%); three disks 0.35/0.7/1.0: %.2f < %.2f < %.2f, last two in "
              "[1.5, 4.5]",
              inside, rel[0], rel[1], rel[2])};
}

Outcome limited_aperture() {
  const ContrastGrid q = gen_disks(8, 1, 64)[0];
  const DirectionSet d = DirectionSet::uniform(104);
  const double theta = kPi / 2;
  const FarFieldMatrix full = born_far_field(q, 16.0, d, d);
  const FarFieldMatrix masked = apply_limited_aperture(full, theta);
  bool ok = true;
  for (int i = 0; i < 104; ++i) {
    for (int j = 0; j < 104; ++j) {
      const bool keep = within_aperture(d.angle(i), theta) && within_aperture(d.angle(j), theta);
      ok = ok && (keep ? masked.values(i, j) == full.values(i, j) : masked.values(i, j) == Complex(0.0));
    }
  }
  const PolarGrid grid(104, 56);
  const PairMatching matching = match_pairs(d, d, grid, theta);
  const ProcessedData limited = process_far_field(masked, grid, matching);
  const ProcessedData unmasked = process_far_field(full, grid, matching);
  int support = 0;
  for (std::size_t i = 0; i < limited.values.size(); ++i) {
    if (matching.matches[i].in_aperture) {
      ++support;
      ok = ok && limited.values[i] == unmasked.values[i];
    } else {
      ok = ok && limited.values[i] == Complex(0.0);
    }
  }
  ok = ok && limited.aperture && *limited.aperture == theta;
  return {ok, fmt("Theta = pi/2: %d of %zu nodes in D_L carry data, all others exactly zero", support, grid.size())};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string only = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"PSWF orthonormality", orthonormality},
      {"Eigen-relation", eigen_relation},
      {"Ordering", ordering},
      {"Forward-solver disk oracle", disk_oracle},
      {"Reciprocity", reciprocity},
      {"Rotation-equivariance", rotation},
      {"Lipschitz recovery", lipschitz},
      {"Noise model", noise_model},
      {"rel(k) regime", nonlinearity},
      {"Limited aperture", limited_aperture},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    if (name.find(only) == std::string::npos) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += outcome.pass ? 0 : 1;
    std::printf("%s  %s: %s [%.1f s]\n", outcome.pass ? "PASS" : "FAIL", name.c_str(), outcome.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
