#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "ulr/contrast.hpp"

namespace ulr {

// 8- or 16-bit grayscale image, row 0 at the top.
struct GrayImage {
  int width = 0;
  int height = 0;
  int max_value = 255;
  std::vector<int> pixels;  // row-major

  int operator()(int row, int col) const { return pixels[static_cast<std::size_t>(row) * width + col]; }
};

// PGM (P2 or P5) or PNG, chosen by content. Colour PNGs are converted to gray.
GrayImage read_gray_image(const std::filesystem::path& path);
void write_pgm(const GrayImage& image, const std::filesystem::path& path);
void write_gray_png(const GrayImage& image, const std::filesystem::path& path);

struct RasterImportOptions {
  int size = 208;
  double max_amplitude = 0.5;
  double half_width = 0.6;  // the image fills [-w, w]^2, top row at y = w
  double threshold = 0.0;   // intensities below this fraction of max_value become 0
};

// q = max_amplitude * intensity / max_value, bilinearly resampled at the cell
// centres inside the square; q = 0 elsewhere. Requires half_width <= 1/sqrt(2).
ContrastGrid import_raster(const std::filesystem::path& path, const RasterImportOptions& options = {});
ContrastGrid raster_to_contrast(const GrayImage& image, const RasterImportOptions& options = {});

// Inverse of raster_to_contrast: q sampled at the pixel centres of a width x width
// 8-bit image over the embedded square, quantized against max_amplitude.
GrayImage contrast_to_raster(const ContrastGrid& q, int width, double max_amplitude, double half_width = 0.6);

// Heatmap of a rows x cols array (row 0 drawn at the top) with a fixed
// colormap, scaled to [min, max] of the data; writes "<path>.txt" with the range.
void write_heatmap_png(std::span<const double> values, int rows, int cols, const std::filesystem::path& path);
// Contrast grid drawn with y increasing upwards.
void write_contrast_heatmap(const ContrastGrid& q, const std::filesystem::path& path);

}  // namespace ulr
