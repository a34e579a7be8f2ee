#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ulr/data_pipeline.hpp"
#include "ulr/dataset_gen.hpp"
#include "ulr/errors.hpp"
#include "ulr/forward_solver.hpp"
#include "ulr/io.hpp"
#include "ulr/lowrank_inverse.hpp"
#include "ulr/pswf.hpp"
#include "ulr/raster.hpp"

namespace fs = std::filesystem;
using namespace ulr;

namespace {

constexpr int kExitUser = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  double k = 16.0;
  int grid = 208;
  int n_inc = 104;
  int n_obs = 104;
  int n1 = 104;
  int n2 = 56;
  std::optional<double> eta;
  std::optional<double> alpha_reg;
  std::optional<double> noise;
  std::uint64_t seed = 0;
  std::optional<double> aperture;
  std::string recipe = "disks";
  int count = 2000;
  std::string out;
  int threads = 0;
  int max_m = 40;
  int max_n = 10;
  std::string basis_path;
};

SolverOptions solver_options(const Config& cfg) {
  SolverOptions options;
  options.threads = cfg.threads;
  return options;
}

std::string ext_of(const fs::path& path) {
  std::string e = path.extension().string();
  for (char& ch : e) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return e;
}

ContrastGrid load_any_contrast(const fs::path& path, const Config& cfg) {
  const std::string e = ext_of(path);
  if (e == ".csv") {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return read_contrast_csv(in);
  }
  if (e == ".png" || e == ".pgm") {
    RasterImportOptions options;
    options.size = cfg.grid;
    return import_raster(path, options);
  }
  return load_contrast(path);
}

ContrastGrid preset(const std::string& name, const Config& cfg) {
  if (name == "three-disks-0.35") return preset_three_disks(0.35, cfg.grid);
  if (name == "three-disks-0.7") return preset_three_disks(0.7, cfg.grid);
  if (name == "three-disks-1.0") return preset_three_disks(1.0, cfg.grid);
  if (name == "gaussian-lattice") return preset_gaussian_lattice(cfg.seed, cfg.grid);
  if (name == "smooth") return preset_smooth(cfg.grid);
  if (name == "disk") return disk_contrast(cfg.grid, {0.0, 0.0}, 0.5, 0.3);
  throw UsageError("unknown preset '" + name + "'");
}

double bandwidth(const Config& cfg) { return 2.0 * cfg.k; }

void print_basis_tables(const PswfBasis& basis, std::ostream& out) {
  out << std::setprecision(10);
  out << "m,n,chi,abs_alpha\n";
  for (int m = 0; m <= basis.max_m(); ++m) {
    for (int n = 0; n <= basis.max_n(); ++n) {
      out << m << ',' << n << ',' << basis.chi(m, n) << ',' << std::abs(basis.alpha(m, n)) << '\n';
    }
  }
}

bool basis_matches(const PswfBasis& basis, double c, int max_m, int max_n) {
  return std::fabs(basis.bandwidth() - c) <= 1e-12 * c && basis.max_m() == max_m && basis.max_n() == max_n;
}

PswfBasis obtain_basis(const Config& cfg, int max_m, int max_n) {
  const double c = bandwidth(cfg);
  if (!cfg.basis_path.empty() && fs::exists(cfg.basis_path)) {
    PswfBasis basis = load_basis(cfg.basis_path);
    if (std::fabs(basis.bandwidth() - c) > 1e-12 * c) {
      throw BandwidthMismatchError("basis cache " + cfg.basis_path + " has c=" + std::to_string(basis.bandwidth()) +
                                   ", expected " + std::to_string(c));
    }
    return basis;
  }
  PswfBasis basis = build_basis(c, max_m, max_n);
  if (!cfg.basis_path.empty()) save_basis(basis, cfg.basis_path);
  return basis;
}

// Default eta is 1e-2 max|alpha| of the basis.
Cutoff cutoff_from(const Config& cfg, const PswfBasis& basis) {
  if (cfg.eta && cfg.alpha_reg) throw UsageError("give either --eta or --alpha-reg, not both");
  if (cfg.alpha_reg) return {CutoffKind::SturmLiouville, *cfg.alpha_reg};
  if (cfg.eta) return {CutoffKind::Eta, *cfg.eta};
  double peak = 0.0;
  for (const PswfEntry& e : basis.entries()) peak = std::max(peak, std::abs(basis.alpha(e.m, e.n)));
  return {CutoffKind::Eta, 1e-2 * peak};
}

fs::path require_out(const Config& cfg) {
  if (cfg.out.empty()) throw UsageError("--out is required");
  return cfg.out;
}

fs::path with_suffix(const fs::path& prefix, const std::string& suffix) { return prefix.string() + suffix; }

double relative_error(const ContrastGrid& rec, const ContrastGrid& truth) {
  if (rec.size() != truth.size()) throw DataError("reconstruction and reference grids differ in size");
  double num = 0.0;
  double den = 0.0;
  for (int row = 0; row < truth.size(); ++row) {
    for (int col = 0; col < truth.size(); ++col) {
      const Point2 p = truth.centre(row, col);
      if (p.x * p.x + p.y * p.y > 1.0) continue;
      const double d = rec(row, col) - truth(row, col);
      num += d * d;
      den += truth(row, col) * truth(row, col);
    }
  }
  if (den == 0.0) throw DataError("reference contrast is zero inside B");
  return std::sqrt(num / den);
}

// ---- basis

void cmd_basis(const Config& cfg) {
  const double c = bandwidth(cfg);
  const fs::path out = cfg.basis_path.empty() ? require_out(cfg) : fs::path(cfg.basis_path);
  if (fs::exists(out)) {
    const PswfBasis cached = load_basis(out);
    if (basis_matches(cached, c, cfg.max_m, cfg.max_n)) {
      std::cerr << "basis cache " << out.string() << " is up to date (crc32 " << file_crc32(out) << ")\n";
      return;
    }
  }
  const PswfBasis basis = build_basis(c, cfg.max_m, cfg.max_n);
  save_basis(basis, out);
  print_basis_tables(basis, std::cout);
  std::cerr << "wrote " << out.string() << " (" << basis.size() << " entries)\n";
}

// ---- simulate

void cmd_simulate(const Config& cfg, const std::string& contrast_path, const std::string& preset_name) {
  const fs::path out = require_out(cfg);
  if (contrast_path.empty() == preset_name.empty()) throw UsageError("give exactly one of --contrast or --preset");
  const ContrastGrid q = preset_name.empty() ? load_any_contrast(contrast_path, cfg) : preset(preset_name, cfg);
  if (q.max_abs() == 0.0) throw DataError("contrast is identically zero; rel(k) is undefined");
  const DirectionSet inc = DirectionSet::uniform(cfg.n_inc);
  const DirectionSet obs = DirectionSet::uniform(cfg.n_obs);
  const Simulation sim = simulate(q, cfg.k, inc, obs, solver_options(cfg));
  save_far_field(sim.full, with_suffix(out, "_full.ffm1"));
  save_far_field(sim.born, with_suffix(out, "_born.ffm1"));
  if (!preset_name.empty()) save_contrast(q, with_suffix(out, "_q.cgr1"));
  if (cfg.noise) {
    save_far_field(add_noise(sim.full, *cfg.noise, cfg.seed), with_suffix(out, "_noisy.ffm1"));
  }
  std::cout << std::setprecision(10) << "rel(k)=" << sim.nonlinearity << " max_residual=" << sim.max_residual << '\n';
}

// ---- process

void cmd_process(const Config& cfg, const std::string& input, bool csv) {
  const fs::path out = require_out(cfg);
  FarFieldMatrix ff = load_far_field(input);
  if (std::fabs(ff.k - cfg.k) > 1e-12 * cfg.k) {
    throw BandwidthMismatchError("far field has k=" + std::to_string(ff.k) + ", expected " + std::to_string(cfg.k));
  }
  if (cfg.aperture) ff = apply_limited_aperture(ff, *cfg.aperture);
  const PolarGrid grid(cfg.n1, cfg.n2);
  const ProcessedData data = process_far_field(ff, grid);
  save_processed(data, out);
  if (csv) {
    std::ofstream text(with_suffix(out, ".csv"));
    write_processed_csv(data, text);
  }
}

// ---- invert

struct InvertResult {
  Reconstruction rec;
  ContrastGrid cartesian;
};

InvertResult run_invert(const Config& cfg, const ProcessedData& data, const PswfBasis& basis) {
  const SpectralProjector projector(basis, data.grid);
  Reconstruction rec = invert(data, projector, cutoff_from(cfg, basis));
  ContrastGrid cartesian = reconstruct_cartesian(rec, basis, cfg.grid);
  return {std::move(rec), std::move(cartesian)};
}

void write_invert_outputs(const InvertResult& result, const PolarGrid& grid, const fs::path& out) {
  save_contrast(result.cartesian, with_suffix(out, "_rec.cgr1"));
  std::ofstream csv(with_suffix(out, "_coefficients.csv"));
  write_coefficients_csv(result.rec.coefficients, csv);
  std::cout << std::setprecision(10) << "retained=" << result.rec.coefficients.entries.size()
            << " beta=" << result.rec.beta << " imag_ratio=" << imaginary_ratio(result.rec, grid) << '\n';
}

void cmd_invert(const Config& cfg, const std::string& input, const std::string& truth) {
  const fs::path out = require_out(cfg);
  const ProcessedData data = load_processed(input);
  if (std::fabs(data.c - bandwidth(cfg)) > 1e-12 * data.c) {
    throw BandwidthMismatchError("data has c=" + std::to_string(data.c) + ", expected 2k=" +
                                 std::to_string(bandwidth(cfg)));
  }
  const PswfBasis basis = obtain_basis(cfg, cfg.max_m, cfg.max_n);
  const InvertResult result = run_invert(cfg, data, basis);
  write_invert_outputs(result, data.grid, out);
  if (!truth.empty()) {
    std::cout << std::setprecision(10) << "error=" << relative_error(result.cartesian, load_any_contrast(truth, cfg))
              << '\n';
  }
}

// ---- dataset

void cmd_dataset(const Config& cfg, const std::vector<std::string>& images) {
  const fs::path out = require_out(cfg);
  if (cfg.count < 1) throw UsageError("--count must be >= 1");
  std::vector<ContrastGrid> contrasts;
  if (cfg.recipe == "disks") {
    contrasts = gen_disks(cfg.seed, cfg.count, cfg.grid);
  } else if (cfg.recipe == "gaussians") {
    contrasts = gen_gaussians(cfg.seed, cfg.count, cfg.grid);
  } else if (cfg.recipe == "pswf5" || cfg.recipe == "pswf10") {
    const int max_index = cfg.recipe == "pswf5" ? 5 : 10;
    const PswfBasis basis = obtain_basis(cfg, max_index - 1, max_index - 1);
    for (auto& combo : gen_pswf_combo(cfg.seed, cfg.count, max_index, basis, cfg.grid)) {
      contrasts.push_back(std::move(combo.contrast));
    }
  } else if (cfg.recipe == "raster") {
    if (images.empty()) throw UsageError("recipe raster needs image files");
    RasterImportOptions options;
    options.size = cfg.grid;
    for (int i = 0; i < cfg.count && i < static_cast<int>(images.size()); ++i) {
      contrasts.push_back(import_raster(images[i], options));
    }
  } else {
    throw UsageError("unknown recipe '" + cfg.recipe + "' (disks, gaussians, pswf5, pswf10, raster)");
  }
  ArchiveOptions options;
  options.k = cfg.k;
  options.n_inc = cfg.n_inc;
  options.n_obs = cfg.n_obs;
  options.n1 = cfg.n1;
  options.n2 = cfg.n2;
  options.recipe = cfg.recipe;
  options.seed = cfg.seed;
  options.noise = cfg.noise;
  options.noise_seed = cfg.seed;
  options.solver = solver_options(cfg);
  const auto records = build_samples(contrasts, options, out);
  for (const auto& r : records) std::cout << r.id << ',' << std::setprecision(10) << r.nonlinearity << '\n';
}

// ---- eval

void cmd_eval(const Config& cfg, const std::string& dataset, const std::string& role, int figures) {
  const fs::path out = require_out(cfg);
  const Manifest manifest = verify_archive(dataset);
  if (std::fabs(2.0 * manifest.k - bandwidth(cfg)) > 1e-12 * manifest.k) {
    throw BandwidthMismatchError("dataset has k=" + std::to_string(manifest.k) + ", expected " + std::to_string(cfg.k));
  }
  fs::create_directories(out);
  const PswfBasis basis = obtain_basis(cfg, cfg.max_m, cfg.max_n);
  std::ofstream summary(out / "summary.csv");
  summary << "id,rel,error\n" << std::setprecision(10);
  int drawn = 0;
  for (const ManifestSample& sample : manifest.samples) {
    std::string data_file;
    std::string q_file;
    for (const auto& [r, name] : sample.files) {
      if (r == role) data_file = name;
      if (r == "q") q_file = name;
    }
    if (data_file.empty() || q_file.empty()) throw DataError("sample " + sample.id + " lacks role " + role + " or q");
    const ProcessedData data = load_processed(fs::path(dataset) / data_file);
    const ContrastGrid truth = load_contrast(fs::path(dataset) / q_file);
    Config local = cfg;
    local.grid = truth.size();
    const InvertResult result = run_invert(local, data, basis);
    const double error = relative_error(result.cartesian, truth);
    summary << sample.id << ',' << sample.nonlinearity << ',' << error << '\n';
    if (drawn < figures) {
      ++drawn;
      write_contrast_heatmap(truth, out / (sample.id + "_q.png"));
      write_contrast_heatmap(result.cartesian, out / (sample.id + "_rec.png"));
      std::vector<double> re(data.values.size());
      std::vector<double> im(data.values.size());
      for (std::size_t i = 0; i < re.size(); ++i) {
        re[i] = data.values[i].real();
        im[i] = data.values[i].imag();
      }
      write_heatmap_png(re, data.grid.n_radial(), data.grid.n_angular(), out / (sample.id + "_" + role + "_re.png"));
      write_heatmap_png(im, data.grid.n_radial(), data.grid.n_angular(), out / (sample.id + "_" + role + "_im.png"));
    }
  }
}

// ---- correct

void check_compatible(const ProcessedData& data, const ProcessedData& reference, const std::string& name) {
  if (!(data.grid == reference.grid)) {
    throw DataError(name + ": grid " + std::to_string(data.grid.n_radial()) + "x" +
                    std::to_string(data.grid.n_angular()) + " differs from the reference");
  }
  if (std::fabs(data.c - reference.c) > 1e-12 * reference.c) {
    throw BandwidthMismatchError(name + ": bandwidth differs from the reference");
  }
}

void cmd_correct(const Config& cfg, const std::string& input, const std::string& corrected, const std::string& command,
                 const std::string& truth) {
  const fs::path out = require_out(cfg);
  const ProcessedData raw = load_processed(input);
  if (!command.empty()) {
    std::string line = command;
    for (const auto& [key, value] : {std::pair<std::string, std::string>{"{input}", input}, {"{output}", corrected}}) {
      for (std::size_t pos; (pos = line.find(key)) != std::string::npos;) line.replace(pos, key.size(), value);
    }
    if (std::system(line.c_str()) != 0) throw DataError("corrector command failed: " + line);
  }
  if (!fs::exists(corrected)) throw DataError("corrected data " + corrected + " does not exist");
  const ProcessedData data = load_processed(corrected);
  check_compatible(data, raw, corrected);
  cmd_invert(cfg, corrected, truth);
}

// ---- profile

void cmd_profile(const Config& cfg) {
  const PswfBasis basis = obtain_basis(cfg, cfg.max_m, cfg.max_n);
  std::ostream* sink = &std::cout;
  std::ofstream file;
  if (!cfg.out.empty()) {
    file.open(cfg.out);
    if (!file) throw DataError("cannot write " + cfg.out);
    sink = &file;
  }
  *sink << "m,n,l,abs_alpha,chi\n" << std::setprecision(10);
  const Cutoff cutoff = cutoff_from(cfg, basis);
  for (const PswfEntry& e : basis.entries()) {
    if (!cutoff.keeps(basis.alpha(e.m, e.n), basis.chi(e.m, e.n))) continue;
    *sink << e.m << ',' << e.n << ',' << e.l << ',' << std::abs(basis.alpha(e.m, e.n)) << ',' << basis.chi(e.m, e.n)
          << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank inverse scattering pipeline"};
  app.set_config("--config", "", "flat key=value configuration file");
  app.fallthrough();
  app.require_subcommand(1);

  Config cfg;
  app.add_option("--k", cfg.k, "wavenumber")->check(CLI::PositiveNumber);
  app.add_option("--grid", cfg.grid, "contrast grid size N")->check(CLI::Range(32, 4096));
  app.add_option("--ninc", cfg.n_inc, "number of incident directions")->check(CLI::PositiveNumber);
  app.add_option("--nobs", cfg.n_obs, "number of observation directions")->check(CLI::PositiveNumber);
  app.add_option("--n1", cfg.n1, "angular nodes of the polar grid")->check(CLI::PositiveNumber);
  app.add_option("--n2", cfg.n2, "radial nodes of the polar grid")->check(CLI::Range(2, 100000));
  app.add_option("--eta", cfg.eta, "spectral cutoff: keep |alpha| > eta")->check(CLI::PositiveNumber);
  app.add_option("--alpha-reg", cfg.alpha_reg, "Sturm-Liouville cutoff: keep chi < 1/alpha")
      ->check(CLI::PositiveNumber);
  app.add_option("--noise", cfg.noise, "relative noise level delta")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--aperture", cfg.aperture, "aperture half-angle Theta in (0, pi)")
      ->check(CLI::Range(0.0, M_PI));
  app.add_option("--recipe", cfg.recipe, "dataset recipe: disks, gaussians, pswf5, pswf10, raster");
  app.add_option("--count", cfg.count, "number of samples");
  app.add_option("--out", cfg.out, "output path or prefix");
  app.add_option("--threads", cfg.threads, "worker threads (0: hardware concurrency)")->check(CLI::NonNegativeNumber);
  app.add_option("--max-m", cfg.max_m, "largest angular index of the basis")->check(CLI::NonNegativeNumber);
  app.add_option("--max-n", cfg.max_n, "largest radial index of the basis")->check(CLI::NonNegativeNumber);
  app.add_option("--basis", cfg.basis_path, "basis cache file (PSWF1)");

  auto* basis = app.add_subcommand("basis", "build the PSWF basis cache and print chi, |alpha| tables");

  std::string contrast_path;
  std::string preset_name;
  auto* simulate_cmd = app.add_subcommand("simulate", "solve the forward problem; writes <out>_full/_born.ffm1");
  simulate_cmd->add_option("--contrast", contrast_path, "contrast file (CGR1, CSV, PNG or PGM)");
  simulate_cmd->add_option("--preset", preset_name,
                           "three-disks-0.35, three-disks-0.7, three-disks-1.0, gaussian-lattice, smooth, disk");

  std::string input;
  bool csv = false;
  auto* process = app.add_subcommand("process", "map a far-field matrix to processed data on the polar grid");
  process->add_option("--input", input, "FFM1 far field")->required()->check(CLI::ExistingFile);
  process->add_flag("--csv", csv, "also write <out>.csv");

  std::string truth;
  auto* invert_cmd = app.add_subcommand("invert", "low-rank inversion of processed data");
  invert_cmd->add_option("--input", input, "PRC1 processed data")->required()->check(CLI::ExistingFile);
  invert_cmd->add_option("--truth", truth, "reference contrast for the L2(B) error")->check(CLI::ExistingFile);

  std::vector<std::string> images;
  auto* dataset = app.add_subcommand("dataset", "generate a sample archive");
  dataset->add_option("images", images, "raster images for --recipe raster")->check(CLI::ExistingFile);

  std::string dataset_dir;
  std::string role = "ub";
  int figures = 1;
  auto* eval = app.add_subcommand("eval", "invert every sample of an archive and report L2(B) errors");
  eval->add_option("--dataset", dataset_dir, "archive directory")->required()->check(CLI::ExistingDirectory);
  eval->add_option("--role", role, "processed record to invert: u or ub");
  eval->add_option("--figures", figures, "number of samples drawn as PNG heatmaps");

  std::string corrected;
  std::string command;
  auto* correct = app.add_subcommand("correct", "validate corrected data and invert it");
  correct->add_option("--input", input, "PRC1 data fed to the corrector")->required()->check(CLI::ExistingFile);
  correct->add_option("--corrected", corrected, "PRC1 produced by the corrector")->required();
  correct->add_option("--command", command, "external corrector; {input} and {output} are substituted");
  correct->add_option("--truth", truth, "reference contrast for the L2(B) error")->check(CLI::ExistingFile);

  auto* profile = app.add_subcommand("profile", "list the basis entries retained by the cutoff");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUser;
  }

  try {
    if (*basis) cmd_basis(cfg);
    if (*simulate_cmd) cmd_simulate(cfg, contrast_path, preset_name);
    if (*process) cmd_process(cfg, input, csv);
    if (*invert_cmd) cmd_invert(cfg, input, truth);
    if (*dataset) cmd_dataset(cfg, images);
    if (*eval) cmd_eval(cfg, dataset_dir, role, figures);
    if (*correct) cmd_correct(cfg, input, corrected, command, truth);
    if (*profile) cmd_profile(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUser;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUser;
  } catch (const InvalidIndexError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUser;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
