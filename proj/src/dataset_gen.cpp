#include "ulr/dataset_gen.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "ulr/data_pipeline.hpp"
#include "ulr/errors.hpp"
#include "ulr/io.hpp"
#include "ulr/rng.hpp"

namespace ulr {

namespace {

void rescale_to(ContrastGrid& q, double target) {
  const double peak = q.max_abs();
  if (peak == 0.0) return;
  const double scale = target / peak;
  for (double& v : q.values()) v *= scale;
}

std::string sample_id(int index) {
  char buffer[16];
  std::snprintf(buffer, sizeof buffer, "s%06d", index);
  return buffer;
}

void check_count(int count) {
  if (count < 1) throw DomainError("dataset generator: count must be >= 1");
}

}  // namespace

std::vector<ContrastGrid> gen_disks(std::uint64_t seed, int count, int size) {
  check_count(count);
  Rng rng(seed);
  std::vector<ContrastGrid> out;
  out.reserve(count);
  for (int s = 0; s < count; ++s) {
    ContrastGrid q(size);
    const int disks = rng.uniform_int(1, 3);
    for (int d = 0; d < disks; ++d) {
      const double radius = rng.uniform(0.1, 0.3);
      const double cx = rng.uniform(-0.4, 0.4);
      const double cy = rng.uniform(-0.4, 0.4);
      const double amplitude = rng.uniform(0.5, 1.0);
      add_disk(q, {cx, cy}, radius, amplitude);
    }
    rescale_to(q, rng.uniform(0.1, 0.8));
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<ContrastGrid> gen_gaussians(std::uint64_t seed, int count, int size) {
  check_count(count);
  Rng rng(seed);
  std::vector<ContrastGrid> out;
  out.reserve(count);
  struct Bump {
    double a, b, x, y, r;
  };
  for (int s = 0; s < count; ++s) {
    const int n = rng.uniform_int(1, 3);
    std::vector<Bump> bumps;
    for (int i = 0; i < n; ++i) {
      Bump bump{};
      bump.a = rng.uniform(16.0, 66.0);
      bump.b = rng.uniform(16.0, 66.0);
      bump.x = rng.uniform(-0.4, 0.4);
      bump.y = rng.uniform(-0.4, 0.4);
      bump.r = rng.uniform(-1.0, 1.0);
      bumps.push_back(bump);
    }
    ContrastGrid q(size);
    for (int row = 0; row < size; ++row) {
      for (int col = 0; col < size; ++col) {
        const Point2 p = q.centre(row, col);
        if (std::hypot(p.x, p.y) > 1.0) continue;
        double value = 0.0;
        for (const Bump& b : bumps) {
          value += b.r * std::exp(-b.a * (p.x - b.x) * (p.x - b.x) - b.b * (p.y - b.y) * (p.y - b.y));
        }
        q(row, col) = value;
      }
    }
    rescale_to(q, rng.uniform(0.5, 0.8));
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<PswfCombination> gen_pswf_combo(std::uint64_t seed, int count, int max_index, const PswfBasis& basis,
                                            int size) {
  check_count(count);
  if (max_index < 1) throw DomainError("gen_pswf_combo: max_index must be >= 1");
  if (basis.max_m() < max_index - 1 || basis.max_n() < max_index - 1) {
    throw BasisBoundError("gen_pswf_combo: basis does not cover m, n < " + std::to_string(max_index));
  }
  Rng rng(seed);
  ContrastGrid scratch(size);
  std::vector<Point2> centres;
  for (int row = 0; row < size; ++row) {
    for (int col = 0; col < size; ++col) centres.push_back(scratch.centre(row, col));
  }
  std::vector<PswfCombination> out;
  out.reserve(count);
  for (int s = 0; s < count; ++s) {
    std::vector<std::complex<double>> coeffs(basis.size(), 0.0);
    for (const PswfEntry& e : basis.entries()) {
      if (e.m >= max_index || e.n >= max_index) continue;
      coeffs[basis.entry_index(e.m, e.n, e.l)] = rng.normal() / std::sqrt(basis.chi(e.m, e.n));
    }
    const double target = rng.uniform(0.5, 0.8);
    ContrastGrid q(size, evaluate_expansion(basis, coeffs, centres));
    const double peak = q.max_abs();
    const double scale = peak > 0.0 ? target / peak : 0.0;
    for (double& v : q.values()) v *= scale;
    for (auto& c : coeffs) c *= scale;
    out.push_back({std::move(q), std::move(coeffs)});
  }
  return out;
}

ContrastGrid preset_three_disks(double amplitude, int size) {
  ContrastGrid q(size);
  add_disk(q, {-0.35, 0.25}, 0.3, amplitude);
  add_disk(q, {0.35, 0.2}, 0.27, amplitude);
  add_disk(q, {0.0, -0.38}, 0.28, amplitude);
  return q;
}

ContrastGrid preset_gaussian_lattice(std::uint64_t seed, int size) {
  Rng rng(seed);
  struct Bump {
    double x, y, r;
  };
  std::vector<Bump> bumps;
  for (int j = 1; j <= 25; ++j) {
    const double a = 0.25 * (j % 5) - 0.5;
    const double b = -0.25 * (j / 5) + 0.5;
    const double n = rng.uniform(-0.005, 0.015);
    const double m = rng.uniform(-0.005, 0.015);
    const double r = rng.uniform(-1.0, 1.0);
    bumps.push_back({a + n, b + m, r});
  }
  ContrastGrid q(size);
  for (int row = 0; row < size; ++row) {
    for (int col = 0; col < size; ++col) {
      const Point2 p = q.centre(row, col);
      if (std::hypot(p.x, p.y) > 1.0) continue;
      double value = 0.0;
      for (const Bump& bump : bumps) {
        value += bump.r * std::exp(-45.0 * (p.x - bump.x) * (p.x - bump.x) - 60.0 * (p.y - bump.y) * (p.y - bump.y));
      }
      q(row, col) = value;
    }
  }
  rescale_to(q, 0.7);
  return q;
}

ContrastGrid preset_smooth(int size) {
  ContrastGrid q(size);
  for (int row = 0; row < size; ++row) {
    for (int col = 0; col < size; ++col) {
      const Point2 p = q.centre(row, col);
      const double r2 = p.x * p.x + p.y * p.y;
      if (r2 > 1.0) continue;
      q(row, col) = 0.6 * (1.0 - r2) * std::cos(p.x) * std::sin(p.y);
    }
  }
  return q;
}

std::vector<ArchiveRecord> build_samples(const std::vector<ContrastGrid>& contrasts, const ArchiveOptions& options,
                                         const std::filesystem::path& directory) {
  std::filesystem::create_directories(directory);
  const DirectionSet inc = DirectionSet::uniform(options.n_inc);
  const DirectionSet obs = DirectionSet::uniform(options.n_obs);
  const PolarGrid grid(options.n1, options.n2);
  const PairMatching matching = match_pairs(obs, inc, grid);

  nlohmann::json manifest;
  manifest["format"] = "ulr-archive-1";
  manifest["recipe"] = options.recipe;
  manifest["seed"] = options.seed;
  manifest["k"] = options.k;
  manifest["c"] = 2.0 * options.k;
  manifest["n_inc"] = options.n_inc;
  manifest["n_obs"] = options.n_obs;
  manifest["N1"] = options.n1;
  manifest["N2"] = options.n2;
  manifest["noise"] = options.noise ? nlohmann::json(*options.noise) : nlohmann::json(nullptr);
  manifest["noise_seed"] = options.noise_seed;
  manifest["samples"] = nlohmann::json::array();

  std::vector<ArchiveRecord> records;
  for (std::size_t s = 0; s < contrasts.size(); ++s) {
    const std::string id = sample_id(static_cast<int>(s));
    const ContrastGrid& q = contrasts[s];
    Simulation sim = [&] {
      try {
        return simulate(q, options.k, inc, obs, options.solver);
      } catch (const ConvergenceError& e) {
        throw ConvergenceError("sample " + id + ": " + e.what(), e.residual(), e.iterations());
      }
    }();
    FarFieldMatrix full = options.noise ? add_noise(sim.full, *options.noise, options.noise_seed + s) : sim.full;
    const ProcessedData u = process_far_field(full, grid, matching);
    const ProcessedData ub = process_far_field(sim.born, grid, matching);
    ProcessedData q_polar(2.0 * options.k, grid);
    const std::vector<double> image = contrast_to_polar_image(q, grid);
    for (std::size_t i = 0; i < image.size(); ++i) q_polar.values[i] = image[i];

    const std::vector<std::pair<std::string, std::string>> files = {
        {"q", id + "_q.cgr1"},       {"full", id + "_full.ffm1"}, {"born", id + "_born.ffm1"},
        {"u", id + "_u.prc1"},       {"ub", id + "_ub.prc1"},     {"qpolar", id + "_qpolar.prc1"}};
    save_contrast(q, directory / files[0].second);
    save_far_field(full, directory / files[1].second);
    save_far_field(sim.born, directory / files[2].second);
    save_processed(u, directory / files[3].second);
    save_processed(ub, directory / files[4].second);
    save_processed(q_polar, directory / files[5].second);

    nlohmann::json entry;
    entry["id"] = id;
    entry["rel"] = sim.nonlinearity;
    entry["max_residual"] = sim.max_residual;
    for (const auto& [role, name] : files) {
      entry["files"][role] = {{"path", name}, {"crc32", file_crc32(directory / name)}};
    }
    manifest["samples"].push_back(entry);
    records.push_back({id, sim.nonlinearity});
  }
  std::ofstream out(directory / "manifest.json");
  if (!out) throw DataError("build_samples: cannot write manifest in " + directory.string());
  out << manifest.dump(2) << '\n';
  return records;
}

Manifest verify_archive(const std::filesystem::path& directory) {
  std::ifstream in(directory / "manifest.json");
  if (!in) throw DataError("verify_archive: no manifest.json in " + directory.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("verify_archive: manifest does not parse: ") + e.what());
  }
  Manifest manifest;
  try {
    manifest.recipe = doc.at("recipe").get<std::string>();
    manifest.seed = doc.at("seed").get<std::uint64_t>();
    manifest.k = doc.at("k").get<double>();
    manifest.n1 = doc.at("N1").get<int>();
    manifest.n2 = doc.at("N2").get<int>();
    for (const auto& entry : doc.at("samples")) {
      ManifestSample sample;
      sample.id = entry.at("id").get<std::string>();
      sample.nonlinearity = entry.at("rel").is_null() ? std::nan("") : entry.at("rel").get<double>();
      for (const auto& [role, file] : entry.at("files").items()) {
        const std::string name = file.at("path").get<std::string>();
        const std::filesystem::path path = directory / name;
        if (!std::filesystem::exists(path)) throw DataError("verify_archive: missing record " + name);
        if (file_crc32(path) != file.at("crc32").get<std::uint32_t>()) {
          throw DataError("verify_archive: checksum mismatch for " + name);
        }
        const std::string ext = path.extension().string();
        if (ext == ".cgr1") {
          load_contrast(path);
        } else if (ext == ".ffm1") {
          load_far_field(path);
        } else if (ext == ".prc1") {
          const ProcessedData data = load_processed(path);
          if (data.grid.n_angular() != manifest.n1 || data.grid.n_radial() != manifest.n2) {
            throw DataError("verify_archive: grid of " + name + " differs from the manifest");
          }
        }
        sample.files.emplace_back(role, name);
      }
      manifest.samples.push_back(std::move(sample));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("verify_archive: malformed manifest: ") + e.what());
  }
  return manifest;
}

}  // namespace ulr
