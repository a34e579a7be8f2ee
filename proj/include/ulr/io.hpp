#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>

#include "ulr/contrast.hpp"
#include "ulr/data_pipeline.hpp"
#include "ulr/forward_solver.hpp"

namespace ulr {

// Record formats. All integers are little-endian u64 and all reals f64.
//   CGR1: "CGR1", N, N^2 values (row-major, row <-> y).
//   FFM1: "FFM1", k, N_obs, N_inc, obs angles, inc angles, re/im pairs in [obs][inc] order.
//   PRC1: "PRC1", c, N1, N2, Theta (-1 for full aperture), re/im pairs in [m][n] order.
void write_contrast(const ContrastGrid& q, std::ostream& out);
ContrastGrid read_contrast(std::istream& in, const std::string& context = "CGR1");
void save_contrast(const ContrastGrid& q, const std::filesystem::path& path);
ContrastGrid load_contrast(const std::filesystem::path& path);

void write_far_field(const FarFieldMatrix& ff, std::ostream& out);
FarFieldMatrix read_far_field(std::istream& in, const std::string& context = "FFM1");
void save_far_field(const FarFieldMatrix& ff, const std::filesystem::path& path);
FarFieldMatrix load_far_field(const std::filesystem::path& path);

void write_processed(const ProcessedData& data, std::ostream& out);
ProcessedData read_processed(std::istream& in, const std::string& context = "PRC1");
void save_processed(const ProcessedData& data, const std::filesystem::path& path);
ProcessedData load_processed(const std::filesystem::path& path);

// Plain comma-separated N x N matrix, first line is row 0.
void write_contrast_csv(const ContrastGrid& q, std::ostream& out);
ContrastGrid read_contrast_csv(std::istream& in);
// m,n,r,theta,re,im
void write_processed_csv(const ProcessedData& data, std::ostream& out);

std::uint32_t file_crc32(const std::filesystem::path& path);

}  // namespace ulr
