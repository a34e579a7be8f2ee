#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "ulr/errors.hpp"
#include "ulr/forward_solver.hpp"
#include "ulr/lowrank_inverse.hpp"
#include "ulr/rng.hpp"

using namespace ulr;

namespace {

const PswfBasis& basis() {
  static const PswfBasis b = build_basis(32.0, 10, 8);
  return b;
}

const PolarGrid& grid() {
  static const PolarGrid g(104, 56);
  return g;
}

const SpectralProjector& projector() {
  static const SpectralProjector p(basis(), grid());
  return p;
}

double max_alpha() {
  double out = 0.0;
  for (const PswfEntry& e : basis().entries()) out = std::max(out, std::abs(basis().alpha(e.m, e.n)));
  return out;
}

// Random real coefficients on the entries with |alpha| > eta, decaying like 1/sqrt(chi).
std::vector<Complex> in_span(std::uint64_t seed, double eta) {
  Rng rng(seed);
  std::vector<Complex> coeffs(basis().size(), Complex(0.0));
  for (const PswfEntry& e : basis().entries()) {
    if (std::abs(basis().alpha(e.m, e.n)) <= eta) continue;
    coeffs[basis().entry_index(e.m, e.n, e.l)] = rng.normal() / std::sqrt(basis().chi(e.m, e.n));
  }
  return coeffs;
}

std::vector<Complex> perturbation(std::uint64_t seed, double norm) {
  Rng rng(seed);
  std::vector<Complex> out(grid().size());
  for (Complex& v : out) v = Complex(rng.normal(), rng.normal());
  const double scale = norm / l2_norm(grid(), std::span<const Complex>(out));
  for (Complex& v : out) v *= scale;
  return out;
}

double polar_error(const Reconstruction& rec, std::span<const Complex> coefficients) {
  const std::vector<Complex> truth = projector().synthesize(coefficients);
  std::vector<Complex> diff(truth.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = rec.polar[i] - truth[i];
  return l2_norm(grid(), std::span<const Complex>(diff));
}

double coefficient_norm(std::span<const Complex> coefficients) {
  double s = 0.0;
  for (Complex c : coefficients) s += std::norm(c);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("projection of a basis function is a unit vector") {
  for (const std::size_t target : {std::size_t{0}, std::size_t{17}, basis().size() - 1}) {
    std::vector<Complex> coeffs(basis().size(), Complex(0.0));
    coeffs[target] = Complex(0.3, -0.7);
    ProcessedData u(32.0, grid());
    u.values = projector().synthesize(coeffs);
    const std::vector<Complex> back = projector().project(u);
    for (std::size_t e = 0; e < back.size(); ++e) CHECK(std::abs(back[e] - coeffs[e]) < 1e-8);
  }
  ProcessedData zero(32.0, grid());
  for (Complex c : projector().project(zero)) CHECK(c == Complex(0.0));
}

TEST_CASE("projection preserves the norm of in-span data") {
  const std::vector<Complex> coeffs = in_span(3, 0.0);
  ProcessedData u(32.0, grid());
  u.values = projector().synthesize(coeffs);
  CHECK(l2_norm(grid(), std::span<const Complex>(u.values)) == doctest::Approx(coefficient_norm(coeffs)).epsilon(1e-8));
  CHECK(coefficient_norm(projector().project(u)) == doctest::Approx(coefficient_norm(coeffs)).epsilon(1e-8));
  const std::vector<Complex> free = project(u, basis());
  const std::vector<Complex> bound = projector().project(u);
  for (std::size_t e = 0; e < free.size(); ++e) CHECK(free[e] == bound[e]);
}

TEST_CASE("clean in-span Born data is recovered") {
  const double eta = 1e-2 * max_alpha();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const std::vector<Complex> coeffs = in_span(seed, eta);
    const Reconstruction rec = invert_eta(projector().born_data(coeffs), projector(), eta);
    CHECK(polar_error(rec, coeffs) < 1e-5);
    CHECK(polar_error(rec, coeffs) / coefficient_norm(coeffs) < 1e-6);
    CHECK(imaginary_ratio(rec, grid()) < 1e-6);
    for (const SpectralEntry& e : rec.coefficients.entries) {
      CHECK(e.alpha_abs > eta);
      CHECK(std::abs(e.q - coeffs[basis().entry_index(e.index.m, e.index.n, e.index.l)]) < 1e-6);
    }
  }
}

TEST_CASE("noisy reconstructions obey the delta over eta bound") {
  const double eta = 1e-2 * max_alpha();
  for (const double delta : {0.0, 0.01, 0.1}) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const std::vector<Complex> coeffs = in_span(100 + seed, eta);
      ProcessedData u = projector().born_data(coeffs);
      const std::vector<Complex> noise = perturbation(200 + seed, delta);
      for (std::size_t i = 0; i < noise.size(); ++i) u.values[i] += noise[i];
      const double err = polar_error(invert_eta(u, projector(), eta), coeffs);
      worst = std::max(worst, err - delta / eta);
      CHECK(err <= delta / eta + 1e-5);
    }
    MESSAGE("delta " << delta << ": max(err - delta/eta) = " << worst);
  }
}

TEST_CASE("real contrasts give predominantly real reconstructions") {
  ContrastGrid q(64);
  add_disk(q, {0.2, -0.1}, 0.35, 0.1);
  add_disk(q, {-0.4, 0.3}, 0.2, 0.05);
  const DirectionSet d = DirectionSet::uniform(104);
  const ProcessedData u = process_far_field(born_far_field(q, 16.0, d, d), grid());
  const Reconstruction rec = invert_eta(u, projector(), 1e-2 * max_alpha());
  MESSAGE("imaginary ratio " << imaginary_ratio(rec, grid()));
  CHECK(imaginary_ratio(rec, grid()) < 0.05);
}

TEST_CASE("encoder and decoder are inverse on the retained span") {
  const double eta = 0.05;
  const std::vector<Complex> coeffs = in_span(9, eta);
  const Reconstruction rec = invert_eta(projector().born_data(coeffs), projector(), eta);
  std::vector<Complex> q(basis().size(), Complex(0.0));
  for (const SpectralEntry& e : rec.coefficients.entries) q[basis().entry_index(e.index.m, e.index.n, e.index.l)] = e.q;
  const Reconstruction again = invert_eta(projector().born_data(q), projector(), eta);
  for (std::size_t i = 0; i < rec.polar.size(); ++i) CHECK(std::abs(again.polar[i] - rec.polar[i]) < 1e-6);
}

TEST_CASE("entries below the cutoff are filtered exactly") {
  const double eta = 1e-2 * max_alpha();
  const std::vector<Complex> coeffs = in_span(4, eta);
  const ProcessedData u = projector().born_data(coeffs);
  const Reconstruction base = invert_eta(u, projector(), eta);
  int filtered = 0;
  for (const PswfEntry& e : basis().entries()) {
    if (std::abs(basis().alpha(e.m, e.n)) > eta) continue;
    ++filtered;
    std::vector<Complex> bump(basis().size(), Complex(0.0));
    bump[basis().entry_index(e.m, e.n, e.l)] = Complex(0.5, 0.25);
    ProcessedData v = u;
    const std::vector<Complex> extra = projector().synthesize(bump);
    for (std::size_t i = 0; i < extra.size(); ++i) v.values[i] += extra[i];
    const Reconstruction rec = invert_eta(v, projector(), eta);
    double change = 0.0;
    for (std::size_t i = 0; i < rec.polar.size(); ++i) change = std::max(change, std::abs(rec.polar[i] - base.polar[i]));
    CHECK(change < 1e-10);
  }
  CHECK(filtered > 0);
}

TEST_CASE("inversion is linear") {
  const double eta = 1e-2 * max_alpha();
  ProcessedData u1(32.0, grid());
  ProcessedData u2(32.0, grid());
  u1.values = perturbation(1, 1.0);
  u2.values = perturbation(2, 3.0);
  const Complex a(0.7, -1.2);
  const Complex b(-2.0, 0.4);
  ProcessedData mix(32.0, grid());
  for (std::size_t i = 0; i < mix.values.size(); ++i) mix.values[i] = a * u1.values[i] + b * u2.values[i];
  const Reconstruction r1 = invert_eta(u1, projector(), eta);
  const Reconstruction r2 = invert_eta(u2, projector(), eta);
  const Reconstruction rm = invert_eta(mix, projector(), eta);
  double scale = 0.0;
  for (Complex v : rm.polar) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < rm.polar.size(); ++i) {
    CHECK(std::abs(rm.polar[i] - (a * r1.polar[i] + b * r2.polar[i])) < 1e-12 * scale);
  }
}

TEST_CASE("Sturm-Liouville cutoff") {
  std::vector<double> chis;
  for (const PswfEntry& e : basis().entries()) chis.push_back(basis().chi(e.m, e.n));
  std::sort(chis.begin(), chis.end());
  chis.erase(std::unique(chis.begin(), chis.end()), chis.end());
  const std::vector<Complex> coeffs = in_span(5, 0.0);
  const ProcessedData u = projector().born_data(coeffs);

  // between the two smallest eigenvalues only psi_{0,0} survives
  const Reconstruction one = invert_sl(u, projector(), 2.0 / (chis[0] + chis[1]));
  REQUIRE(one.coefficients.entries.size() == 1);
  CHECK(one.coefficients.entries[0].index.m == 0);
  CHECK(one.coefficients.entries[0].index.n == 0);
  CHECK(one.beta == doctest::Approx(std::abs(basis().alpha(0, 0))));
  CHECK_THROWS_AS(invert_sl(u, projector(), 2.0 / chis[0]), EmptyCutoffError);

  double previous = std::numeric_limits<double>::infinity();
  std::size_t count = 0;
  for (double chi_max = chis[0] * 1.01; chi_max < chis.back() * 1.5; chi_max *= 1.3) {
    const Reconstruction rec = invert_sl(u, projector(), 1.0 / chi_max);
    CHECK(rec.beta <= previous);
    CHECK(rec.coefficients.entries.size() >= count);
    for (const SpectralEntry& e : rec.coefficients.entries) CHECK(e.chi < chi_max);
    previous = rec.beta;
    count = rec.coefficients.entries.size();
  }
  CHECK(count == basis().size());
}

TEST_CASE("regularization trade-off is U-shaped under noise") {
  std::vector<double> chis;
  for (const PswfEntry& e : basis().entries()) chis.push_back(basis().chi(e.m, e.n));
  std::sort(chis.begin(), chis.end());
  const double lo = chis.front();
  const double hi = chis.back() * 1.01;
  std::vector<double> sweep;
  for (int i = 0; i <= 24; ++i) sweep.push_back(1.0 / (lo * std::pow(hi / lo, (i + 0.5) / 24.5)));

  std::vector<double> mean(sweep.size(), 0.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::vector<Complex> coeffs = in_span(300 + seed, 0.0);
    ProcessedData u = projector().born_data(coeffs);
    const std::vector<Complex> noise = perturbation(400 + seed, 0.2 * l2_norm(grid(), std::span<const Complex>(u.values)));
    for (std::size_t i = 0; i < noise.size(); ++i) u.values[i] += noise[i];
    for (std::size_t i = 0; i < sweep.size(); ++i) {
      mean[i] += polar_error(invert_sl(u, projector(), sweep[i]), coeffs) / coefficient_norm(coeffs) / 10;
    }
  }
  const auto best = std::min_element(mean.begin(), mean.end()) - mean.begin();
  std::ostringstream curve;
  for (double e : mean) curve << ' ' << e;
  MESSAGE("relative error along decreasing alpha_reg:" << curve.str());
  CHECK(best > 0);
  CHECK(best < static_cast<long>(mean.size()) - 1);
  CHECK(mean.front() > 1.2 * mean[best]);
  CHECK(mean.back() > 1.2 * mean[best]);
}

TEST_CASE("cutoff errors and data validation") {
  ProcessedData u(32.0, grid());
  CHECK_THROWS_AS(invert_eta(u, projector(), 2 * max_alpha()), EmptyCutoffError);
  CHECK_THROWS_AS(invert_eta(u, projector(), 0.0), DomainError);
  CHECK_THROWS_AS(invert_sl(u, projector(), -1.0), DomainError);
  ProcessedData other(30.0, grid());
  CHECK_THROWS_AS(invert_eta(other, projector(), 0.01), BandwidthMismatchError);
  ProcessedData coarse(32.0, PolarGrid(64, 32));
  CHECK_THROWS_AS(invert_eta(coarse, projector(), 0.01), DataError);
}

TEST_CASE("filter profile agrees with the inversion") {
  CHECK(filter_profile(basis(), 2 * max_alpha()).empty());
  std::size_t previous = basis().size() + 1;
  for (double eta = 1e-8; eta < 1.0; eta *= 3) {
    const auto rows = filter_profile(basis(), eta);
    CHECK(rows.size() <= previous);
    previous = rows.size();
  }
  ProcessedData u(32.0, grid());
  u.values = perturbation(7, 1.0);
  for (const double eta : {1e-6, 1e-3, 0.05, 0.15}) {
    const auto rows = filter_profile(basis(), eta);
    const Reconstruction rec = invert_eta(u, projector(), eta);
    REQUIRE(rows.size() == rec.coefficients.entries.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const PswfEntry& a = rows[i].index;
      const PswfEntry& b = rec.coefficients.entries[i].index;
      CHECK((a.m == b.m && a.n == b.n && a.l == b.l));
      CHECK(rows[i].alpha_abs == rec.coefficients.entries[i].alpha_abs);
      CHECK(rows[i].chi == rec.coefficients.entries[i].chi);
    }
  }
}

TEST_CASE("coefficient table") {
  ProcessedData u(32.0, grid());
  u.values = perturbation(8, 1.0);
  const Reconstruction rec = invert_eta(u, projector(), 0.1);
  std::ostringstream out;
  write_coefficients_csv(rec.coefficients, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "m,n,l,re_u,im_u,abs_alpha,chi,re_q,im_q");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 8);
  }
  CHECK(rows == rec.coefficients.entries.size());
}

TEST_CASE("Cartesian display of a reconstruction") {
  const std::vector<Complex> coeffs = in_span(12, 0.01);
  const Reconstruction rec = invert_eta(projector().born_data(coeffs), projector(), 0.01);
  const ContrastGrid q = reconstruct_cartesian(rec, basis(), 40);
  for (int row = 0; row < 40; row += 3) {
    for (int col = 0; col < 40; col += 3) {
      const Point2 p = q.centre(row, col);
      if (p.x * p.x + p.y * p.y > 1.0) {
        CHECK(q(row, col) == 0.0);
        continue;
      }
      double want = 0.0;
      for (const PswfEntry& e : basis().entries()) {
        want += (coeffs[basis().entry_index(e.m, e.n, e.l)] * basis().evaluate(e, p)).real();
      }
      CHECK(q(row, col) == doctest::Approx(want).epsilon(1e-6).scale(1e-6));
    }
  }
}
