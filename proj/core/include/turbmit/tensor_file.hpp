#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "turbmit/image.hpp"

namespace turbmit {

// Dense float32 tensor in row-major order.
//
// On-disk layout (all integers little-endian, regardless of host):
//   bytes 0..3   magic "TRNT"
//   bytes 4..7   u32 version = 1
//   bytes 8..11  u32 rank
//   then         rank x u32 dims
//   then         product(dims) x IEEE-754 float32 payload
// Rank-4 frame stacks use (frame, channel, row, column) order.
struct Tensor {
  std::vector<std::uint32_t> dims;
  std::vector<float> data;

  std::uint64_t element_count() const noexcept;
  friend bool operator==(const Tensor&, const Tensor&) = default;
};

inline constexpr std::uint32_t kTensorVersion = 1;

// Throws ParameterError on a dims/data mismatch or non-finite values.
std::vector<std::uint8_t> encode_tensor(const Tensor& t);
// Throws FormatError carrying the offending byte offset.
Tensor decode_tensor(std::span<const std::uint8_t> bytes);

// Written to a temporary sibling and renamed into place.
void write_tensor(const Tensor& t, const std::filesystem::path& path);
Tensor read_tensor(const std::filesystem::path& path);

// (n, C, H, W) stack of the given frames.
Tensor stack_frames(std::span<const Image> frames);
Tensor stack_frames(std::span<const Image* const> frames);

// Inverse of stack_frames for rank-4 tensors.
std::vector<Image> unstack_frames(const Tensor& t);

}  // namespace turbmit
