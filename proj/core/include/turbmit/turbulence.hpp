#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "turbmit/image.hpp"

namespace turbmit {

enum class NoiseMode {
  per_pixel,         // fresh normal draw for every pixel of the patch
  per_patch_scalar,  // one normal draw added to the whole patch
};

std::string_view to_string(NoiseMode mode) noexcept;
// Throws ParameterError for unknown names.
NoiseMode parse_noise_mode(std::string_view name);

// Knobs of one randomized turbulence frame.
struct SimParams {
  double strength = 0.25;         // S
  double blur = 0.5;              // B, std-dev of the final Gaussian blur
  int iterations = 1000;          // M random patch centers
  int patch_half = 32;            // N, patches span (2N+1) x (2N+1)
  double smooth_sigma = 8.0;      // sigma of the field smoothing kernel
  double kernel_mean_offset = -0.9;  // recorded for reproducibility only
  std::uint64_t seed = 0;
  NoiseMode noise_mode = NoiseMode::per_pixel;

  // Throws ParameterError if a knob is out of range. Strength 0 is allowed
  // and yields a zero displacement field.
  void validate() const;
};

// Ranges the randomized knobs are drawn from when a sequence is sampled.
struct SimRanges {
  double strength_min = 0.1;
  double strength_max = 0.4;
  double blur_min = 0.1;
  double blur_max = 1.0;
  int iterations = 1000;
  int patch_half = 32;
  double smooth_sigma = 8.0;
  NoiseMode noise_mode = NoiseMode::per_pixel;
};

struct SequenceSpec {
  std::vector<SimParams> per_frame;

  std::size_t n_frames() const noexcept { return per_frame.size(); }

  // Draws S ~ U[strength range], B ~ U[blur range], a kernel mean offset in
  // [-1, -0.8] and a distinct derived seed for every frame, all from `seed`.
  static SequenceSpec sample(std::size_t n_frames, const SimRanges& ranges,
                             std::uint64_t seed);
};

// Accumulates M random patches of normal noise into (u, v), smooths both with
// a Gaussian of smooth_sigma and scales by strength. The random stream does
// not depend on strength, so the field is exactly linear in it.
VectorField gen_vector_field(int width, int height, const SimParams& p);

// warp(img, gen_vector_field) followed by a Gaussian blur of std-dev `blur`.
Image distort_blur(const Image& img, const SimParams& p);

FrameSequence gen_sequence(const Image& img, const SequenceSpec& spec);

// splitmix64 mix of (seed, stream); used to give every frame, sequence and
// image an independent seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

}  // namespace turbmit
