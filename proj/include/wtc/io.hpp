// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "wtc/sampling.hpp"
#include "wtc/tensor.hpp"
#include "wtc/weights.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace wtc {

// All binary formats are little-endian.
//
// TEN1: "TEN1" | u32 n | n x u64 dims | numel x f64 values (mode 0 fastest)
// PAT1: "PAT1" | u32 n | n x u64 dims | u64 count | count x n x u64 indices
//       (multi-indices in lexicographic order, mode 0 most significant)
// W8T1: "W8T1" | u32 n | n x (u64 len | len x f64) | f64 floor

std::string encode_tensor(const DenseTensor& t);
DenseTensor decode_tensor(std::string_view bytes);

std::string encode_pattern(const SamplingPattern& p);
SamplingPattern decode_pattern(std::string_view bytes);

std::string encode_weight(const Rank1Weight& w);
Rank1Weight decode_weight(std::string_view bytes);

void save_tensor(const std::filesystem::path& path, const DenseTensor& t);
DenseTensor load_tensor(const std::filesystem::path& path);

void save_pattern(const std::filesystem::path& path, const SamplingPattern& p);
SamplingPattern load_pattern(const std::filesystem::path& path);

void save_weight(const std::filesystem::path& path, const Rank1Weight& w);
Rank1Weight load_weight(const std::filesystem::path& path);

struct VideoTensorSource {
  std::filesystem::path directory;
  /// Number of frames to read in filename order; 0 reads all.
  Index frames = 0;
  /// Block-average each frame by this factor in both spatial modes.
  Index downscale = 1;
};

/// One binary PPM (P6, maxval 255) image as a height x width x 3 tensor in [0, 1].
DenseTensor decode_ppm(std::string_view bytes);

/// Every *.ppm in the directory as a height x width x 3 x frames tensor.
DenseTensor load_ppm_stack(const VideoTensorSource& src);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace wtc
