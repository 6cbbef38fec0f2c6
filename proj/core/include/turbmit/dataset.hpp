#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "turbmit/subsample.hpp"
#include "turbmit/tensor_file.hpp"
#include "turbmit/turbulence.hpp"

namespace turbmit {

struct DatasetConfig {
  std::filesystem::path input_dir;
  std::filesystem::path output_dir;
  int image_size = 256;
  int sequences_per_image = 100;
  int frames_per_sequence = 20;
  std::uint64_t seed = 0;
  double split = 0.8;  // train share
  bool color = false;
  SimRanges sim;

  void validate() const;

  // Reads the flat keys input_dir, output_dir, image_size,
  // sequences_per_image, frames_per_sequence, seed, split and color, plus the
  // optional simulator keys strength_min, strength_max, blur_min, blur_max,
  // iterations, patch_half, smooth_sigma and noise_mode. Unknown keys are
  // rejected.
  static DatasetConfig from_toml(const std::filesystem::path& path);
  static DatasetConfig from_toml_string(const std::string& text);
};

struct ManifestEntry {
  std::string sequence_path;  // relative to the manifest directory
  std::string target_path;
  bool train = true;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct Manifest {
  std::filesystem::path path;
  std::vector<ManifestEntry> entries;
  std::vector<std::string> skipped;  // "<file>: <reason>" for unreadable inputs
};

inline constexpr const char* kManifestName = "manifest.tsv";

// Resizes every readable PNG of input_dir to image_size^2, writes
// sequences_per_image distorted (frames, C, H, W) stacks per image plus one
// (1, C, H, W) clean target per image, and a tab-separated manifest
// `seq_path<TAB>target_path<TAB>train|test`.
Manifest build_dataset(const DatasetConfig& cfg);

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

// Frames handed to the restoration network: the min(|J|, m_cap) lowest-cost
// selected frames in ascending index order, padded to m_cap by cycling
// through them from the lowest cost upward.
std::vector<std::size_t> network_input_indices(const SubsampleResult& result,
                                               std::size_t m_cap);

Tensor subsample_to_tensor(const FrameSequence& seq, const SubsampleParams& p,
                           std::size_t m_cap);

}  // namespace turbmit
