#include "ulr/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <zlib.h>

#include "ulr/binary_io.hpp"
#include "ulr/errors.hpp"

namespace ulr {

namespace binary {

namespace {

std::uint64_t to_little(std::uint64_t value) {
  if constexpr (std::endian::native == std::endian::little) {
    return value;
  } else {
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i) out |= ((value >> (8 * i)) & 0xFFu) << (8 * (7 - i));
    return out;
  }
}

}  // namespace

void Writer::magic(std::string_view tag) { out_.write(tag.data(), static_cast<std::streamsize>(tag.size())); }

void Writer::u64(std::uint64_t value) {
  const std::uint64_t le = to_little(value);
  char bytes[8];
  std::memcpy(bytes, &le, 8);
  out_.write(bytes, 8);
}

void Writer::f64(double value) { u64(std::bit_cast<std::uint64_t>(value)); }

void Writer::f64s(std::span<const double> values) {
  for (double v : values) f64(v);
}

void Reader::read_raw(char* data, std::size_t size) {
  in_.read(data, static_cast<std::streamsize>(size));
  if (static_cast<std::size_t>(in_.gcount()) != size) throw FormatError(context_ + ": truncated record");
}

void Reader::expect_magic(std::string_view tag) {
  std::string buffer(tag.size(), '\0');
  in_.read(buffer.data(), static_cast<std::streamsize>(tag.size()));
  if (static_cast<std::size_t>(in_.gcount()) != tag.size() || buffer != tag) {
    throw FormatError(context_ + ": bad magic, expected " + std::string(tag));
  }
}

std::uint64_t Reader::u64() {
  char bytes[8];
  read_raw(bytes, 8);
  std::uint64_t le = 0;
  std::memcpy(&le, bytes, 8);
  return to_little(le);
}

double Reader::f64() { return std::bit_cast<double>(u64()); }

void Reader::f64s(std::span<double> values) {
  for (double& v : values) v = f64();
}

std::uint64_t Reader::count(std::uint64_t limit, std::string_view what) {
  const std::uint64_t value = u64();
  if (value > limit) throw FormatError(context_ + ": implausible " + std::string(what) + " " + std::to_string(value));
  return value;
}

void Reader::expect_end() {
  if (in_.peek() != std::char_traits<char>::eof()) throw FormatError(context_ + ": trailing bytes");
}

}  // namespace binary

namespace {

constexpr std::uint64_t kMaxCount = 1u << 20;

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw DataError("write failed for " + path.string());
}

}  // namespace

void write_contrast(const ContrastGrid& q, std::ostream& out) {
  binary::Writer w(out);
  w.magic("CGR1");
  w.u64(static_cast<std::uint64_t>(q.size()));
  w.f64s(q.values());
}

ContrastGrid read_contrast(std::istream& in, const std::string& context) {
  binary::Reader r(in, context);
  r.expect_magic("CGR1");
  const auto n = static_cast<int>(r.count(1u << 14, "grid size"));
  if (n < ContrastGrid::kMinSize) throw FormatError(context + ": grid size " + std::to_string(n) + " too small");
  std::vector<double> values(static_cast<std::size_t>(n) * n);
  r.f64s(values);
  return ContrastGrid(n, std::move(values));
}

void save_contrast(const ContrastGrid& q, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  write_contrast(q, out);
  finish(out, path);
}

ContrastGrid load_contrast(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  ContrastGrid q = read_contrast(in, path.string());
  binary::Reader(in, path.string()).expect_end();
  return q;
}

void write_far_field(const FarFieldMatrix& ff, std::ostream& out) {
  binary::Writer w(out);
  w.magic("FFM1");
  w.f64(ff.k);
  w.u64(ff.observation.size());
  w.u64(ff.incidence.size());
  w.f64s(ff.observation.angles());
  w.f64s(ff.incidence.angles());
  for (Eigen::Index i = 0; i < ff.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < ff.values.cols(); ++j) {
      w.f64(ff.values(i, j).real());
      w.f64(ff.values(i, j).imag());
    }
  }
}

FarFieldMatrix read_far_field(std::istream& in, const std::string& context) {
  binary::Reader r(in, context);
  r.expect_magic("FFM1");
  const double k = r.f64();
  const std::uint64_t n_obs = r.count(kMaxCount, "N_obs");
  const std::uint64_t n_inc = r.count(kMaxCount, "N_inc");
  std::vector<double> obs(n_obs);
  std::vector<double> inc(n_inc);
  r.f64s(obs);
  r.f64s(inc);
  FarFieldMatrix ff(k, DirectionSet(std::move(obs)), DirectionSet(std::move(inc)));
  for (Eigen::Index i = 0; i < ff.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < ff.values.cols(); ++j) {
      const double re = r.f64();
      const double im = r.f64();
      ff.values(i, j) = {re, im};
    }
  }
  return ff;
}

void save_far_field(const FarFieldMatrix& ff, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  write_far_field(ff, out);
  finish(out, path);
}

FarFieldMatrix load_far_field(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  FarFieldMatrix ff = read_far_field(in, path.string());
  binary::Reader(in, path.string()).expect_end();
  return ff;
}

void write_processed(const ProcessedData& data, std::ostream& out) {
  binary::Writer w(out);
  w.magic("PRC1");
  w.f64(data.c);
  w.u64(static_cast<std::uint64_t>(data.grid.n_angular()));
  w.u64(static_cast<std::uint64_t>(data.grid.n_radial()));
  w.f64(data.aperture.value_or(-1.0));
  for (const Complex& v : data.values) {
    w.f64(v.real());
    w.f64(v.imag());
  }
}

ProcessedData read_processed(std::istream& in, const std::string& context) {
  binary::Reader r(in, context);
  r.expect_magic("PRC1");
  const double c = r.f64();
  const auto n1 = static_cast<int>(r.count(kMaxCount, "N1"));
  const auto n2 = static_cast<int>(r.count(kMaxCount, "N2"));
  const double aperture = r.f64();
  if (!(c > 0.0)) throw FormatError(context + ": bandwidth must be positive");
  if (n1 < 1 || n2 < 2) throw FormatError(context + ": grid dimensions too small");
  if (!(aperture == -1.0 || (aperture > 0.0 && aperture < 3.14159265358979324))) {
    throw FormatError(context + ": invalid aperture field");
  }
  ProcessedData data(c, PolarGrid(n1, n2));
  if (aperture > 0.0) data.aperture = aperture;
  for (Complex& v : data.values) {
    const double re = r.f64();
    const double im = r.f64();
    if (!std::isfinite(re) || !std::isfinite(im)) throw FormatError(context + ": non-finite value");
    v = {re, im};
  }
  return data;
}

void save_processed(const ProcessedData& data, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  write_processed(data, out);
  finish(out, path);
}

ProcessedData load_processed(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  ProcessedData data = read_processed(in, path.string());
  binary::Reader(in, path.string()).expect_end();
  return data;
}

void write_contrast_csv(const ContrastGrid& q, std::ostream& out) {
  out << std::setprecision(17);
  for (int row = 0; row < q.size(); ++row) {
    for (int col = 0; col < q.size(); ++col) {
      if (col > 0) out << ',';
      out << q(row, col);
    }
    out << '\n';
  }
}

ContrastGrid read_contrast_csv(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t rows = 0;
  std::size_t cols = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t count = 0;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw FormatError("contrast CSV: bad number '" + cell + "' on row " + std::to_string(rows));
      }
      ++count;
    }
    if (rows == 0) cols = count;
    if (count != cols) throw FormatError("contrast CSV: ragged row " + std::to_string(rows));
    ++rows;
  }
  if (rows != cols) throw FormatError("contrast CSV: grid is not square");
  if (rows < static_cast<std::size_t>(ContrastGrid::kMinSize)) throw FormatError("contrast CSV: grid is too small");
  return ContrastGrid(static_cast<int>(rows), std::move(values));
}

void write_processed_csv(const ProcessedData& data, std::ostream& out) {
  out << "m,n,r,theta,re,im\n" << std::setprecision(17);
  for (int m = 0; m < data.grid.n_radial(); ++m) {
    for (int n = 0; n < data.grid.n_angular(); ++n) {
      const Complex v = data.at(m, n);
      out << m << ',' << n << ',' << data.grid.radii()[m] << ',' << data.grid.angles()[n] << ',' << v.real() << ','
          << v.imag() << '\n';
    }
  }
}

std::uint32_t file_crc32(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  uLong crc = crc32(0L, Z_NULL, 0);
  std::vector<char> buffer(1 << 16);
  while (in) {
    in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    const std::streamsize got = in.gcount();
    if (got > 0) crc = crc32(crc, reinterpret_cast<const Bytef*>(buffer.data()), static_cast<uInt>(got));
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace ulr
