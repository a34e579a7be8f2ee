#include "ulr/raster.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "ulr/errors.hpp"

namespace ulr {

namespace {

std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open image " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

GrayImage parse_pgm(const std::vector<unsigned char>& bytes, const std::string& name) {
  std::size_t pos = 2;
  auto skip = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto number = [&] {
    skip();
    if (pos >= bytes.size() || !std::isdigit(bytes[pos])) throw FormatError(name + ": malformed PGM header");
    long value = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      value = value * 10 + (bytes[pos++] - '0');
      if (value > 1'000'000'000) throw FormatError(name + ": PGM field out of range");
    }
    return static_cast<int>(value);
  };
  const bool ascii = bytes[1] == '2';
  GrayImage image;
  image.width = number();
  image.height = number();
  image.max_value = number();
  if (image.width < 1 || image.height < 1) throw DataError(name + ": empty image");
  if (image.max_value < 1 || image.max_value > 65535) throw FormatError(name + ": PGM maxval out of range");
  const std::size_t count = static_cast<std::size_t>(image.width) * image.height;
  image.pixels.resize(count);
  if (ascii) {
    for (auto& p : image.pixels) p = number();
  } else {
    ++pos;
    const std::size_t depth = image.max_value > 255 ? 2 : 1;
    if (bytes.size() < pos + count * depth) throw FormatError(name + ": truncated PGM data");
    for (std::size_t i = 0; i < count; ++i) {
      image.pixels[i] = depth == 1 ? bytes[pos + i] : (bytes[pos + 2 * i] << 8) | bytes[pos + 2 * i + 1];
    }
  }
  for (int p : image.pixels) {
    if (p > image.max_value) throw FormatError(name + ": pixel exceeds maxval");
  }
  return image;
}

GrayImage parse_png(const std::filesystem::path& path) {
  png_image png;
  std::memset(&png, 0, sizeof png);
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    throw FormatError(path.string() + ": " + png.message);
  }
  png.format = PNG_FORMAT_GRAY;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, buffer.data(), 0, nullptr)) {
    png_image_free(&png);
    throw FormatError(path.string() + ": " + png.message);
  }
  GrayImage image;
  image.width = static_cast<int>(png.width);
  image.height = static_cast<int>(png.height);
  image.max_value = 255;
  image.pixels.assign(buffer.begin(), buffer.end());
  return image;
}

void write_png(const std::filesystem::path& path, int width, int height, std::uint32_t format,
               const std::vector<png_byte>& buffer) {
  png_image png;
  std::memset(&png, 0, sizeof png);
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(width);
  png.height = static_cast<png_uint_32>(height);
  png.format = format;
  if (!png_image_write_to_file(&png, path.c_str(), 0, buffer.data(), 0, nullptr)) {
    throw DataError("cannot write " + path.string() + ": " + png.message);
  }
}

// Bilinear in pixel-centre coordinates with clamping at the borders.
double sample_image(const GrayImage& image, double row, double col) {
  row = std::clamp(row, 0.0, image.height - 1.0);
  col = std::clamp(col, 0.0, image.width - 1.0);
  const int r0 = std::min(static_cast<int>(row), image.height - 1);
  const int c0 = std::min(static_cast<int>(col), image.width - 1);
  const int r1 = std::min(r0 + 1, image.height - 1);
  const int c1 = std::min(c0 + 1, image.width - 1);
  const double fr = row - r0;
  const double fc = col - c0;
  return (1 - fr) * ((1 - fc) * image(r0, c0) + fc * image(r0, c1)) + fr * ((1 - fc) * image(r1, c0) + fc * image(r1, c1));
}

std::array<png_byte, 3> colour(double t) {
  static constexpr std::array<std::array<double, 3>, 5> anchors{{
      {68, 1, 84},
      {59, 82, 139},
      {33, 145, 140},
      {94, 201, 98},
      {253, 231, 37},
  }};
  t = std::clamp(t, 0.0, 1.0) * (anchors.size() - 1);
  const std::size_t i = std::min(static_cast<std::size_t>(t), anchors.size() - 2);
  const double f = t - static_cast<double>(i);
  std::array<png_byte, 3> out{};
  for (int ch = 0; ch < 3; ++ch) {
    out[ch] = static_cast<png_byte>(std::lround((1 - f) * anchors[i][ch] + f * anchors[i + 1][ch]));
  }
  return out;
}

}  // namespace

GrayImage read_gray_image(const std::filesystem::path& path) {
  const std::vector<unsigned char> bytes = read_bytes(path);
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '2' || bytes[1] == '5')) return parse_pgm(bytes, path.string());
  static constexpr unsigned char png_signature[] = {0x89, 'P', 'N', 'G'};
  if (bytes.size() >= 8 && std::equal(std::begin(png_signature), std::end(png_signature), bytes.begin())) {
    return parse_png(path);
  }
  throw FormatError(path.string() + ": not a PGM or PNG image");
}

void write_pgm(const GrayImage& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << "P5\n" << image.width << ' ' << image.height << '\n' << image.max_value << '\n';
  for (int p : image.pixels) {
    if (image.max_value > 255) out.put(static_cast<char>(p >> 8));
    out.put(static_cast<char>(p & 0xff));
  }
}

void write_gray_png(const GrayImage& image, const std::filesystem::path& path) {
  std::vector<png_byte> buffer(image.pixels.size());
  for (std::size_t i = 0; i < buffer.size(); ++i) {
    buffer[i] = static_cast<png_byte>(std::lround(255.0 * image.pixels[i] / image.max_value));
  }
  write_png(path, image.width, image.height, PNG_FORMAT_GRAY, buffer);
}

ContrastGrid raster_to_contrast(const GrayImage& image, const RasterImportOptions& options) {
  if (!(options.half_width > 0.0 && options.half_width <= 1.0 / std::sqrt(2.0))) {
    throw DomainError("import_raster: half_width must lie in (0, 1/sqrt(2)]");
  }
  if (!(options.max_amplitude >= 0.0)) throw DomainError("import_raster: max_amplitude must be non-negative");
  if (image.width < 1 || image.height < 1) throw DataError("import_raster: empty image");
  const double w = options.half_width;
  const double cut = options.threshold * image.max_value;
  ContrastGrid q(options.size);
  for (int row = 0; row < q.size(); ++row) {
    for (int col = 0; col < q.size(); ++col) {
      const Point2 p = q.centre(row, col);
      if (std::fabs(p.x) > w || std::fabs(p.y) > w) continue;
      const double pr = (w - p.y) / (2 * w) * image.height - 0.5;
      const double pc = (p.x + w) / (2 * w) * image.width - 0.5;
      const double intensity = sample_image(image, pr, pc);
      q(row, col) = intensity < cut ? 0.0 : options.max_amplitude * intensity / image.max_value;
    }
  }
  return q;
}

ContrastGrid import_raster(const std::filesystem::path& path, const RasterImportOptions& options) {
  return raster_to_contrast(read_gray_image(path), options);
}

GrayImage contrast_to_raster(const ContrastGrid& q, int width, double max_amplitude, double half_width) {
  if (width < 1) throw DomainError("contrast_to_raster: width must be positive");
  if (!(max_amplitude > 0.0)) throw DomainError("contrast_to_raster: max_amplitude must be positive");
  GrayImage image;
  image.width = width;
  image.height = width;
  image.max_value = 255;
  image.pixels.resize(static_cast<std::size_t>(width) * width);
  const double h = q.spacing();
  for (int row = 0; row < width; ++row) {
    for (int col = 0; col < width; ++col) {
      const double x = -half_width + (col + 0.5) * 2 * half_width / width;
      const double y = half_width - (row + 0.5) * 2 * half_width / width;
      // clamp inside the square so the zero cells beyond it are not mixed in
      const double lim = half_width - 0.5 * h;
      const double v = q.sample({std::clamp(x, -lim, lim), std::clamp(y, -lim, lim)});
      image.pixels[static_cast<std::size_t>(row) * width + col] =
          static_cast<int>(std::lround(std::clamp(v / max_amplitude, 0.0, 1.0) * 255.0));
    }
  }
  return image;
}

void write_heatmap_png(std::span<const double> values, int rows, int cols, const std::filesystem::path& path) {
  if (rows < 1 || cols < 1 || values.size() != static_cast<std::size_t>(rows) * cols) {
    throw DataError("write_heatmap_png: shape does not match the data");
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double min = *lo;
  const double max = *hi;
  const double span = max > min ? max - min : 1.0;
  std::vector<png_byte> buffer(values.size() * 3);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto rgb = colour((values[i] - min) / span);
    std::copy(rgb.begin(), rgb.end(), buffer.begin() + 3 * i);
  }
  write_png(path, cols, rows, PNG_FORMAT_RGB, buffer);
  std::ofstream side(path.string() + ".txt");
  if (!side) throw DataError("cannot write " + path.string() + ".txt");
  side.precision(17);
  side << "min " << min << "\nmax " << max << '\n';
}

void write_contrast_heatmap(const ContrastGrid& q, const std::filesystem::path& path) {
  const int n = q.size();
  std::vector<double> flipped(static_cast<std::size_t>(n) * n);
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) flipped[static_cast<std::size_t>(n - 1 - row) * n + col] = q(row, col);
  }
  write_heatmap_png(flipped, n, n, path);
}

}  // namespace ulr
