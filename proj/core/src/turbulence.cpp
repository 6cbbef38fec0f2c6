#include "turbmit/turbulence.hpp"

#include <cmath>
#include <random>
#include <string>

#include "turbmit/error.hpp"
#include "turbmit/kernels.hpp"

namespace turbmit {

std::string_view to_string(NoiseMode mode) noexcept {
  switch (mode) {
    case NoiseMode::per_pixel:
      return "per_pixel";
    case NoiseMode::per_patch_scalar:
      return "per_patch_scalar";
  }
  return "per_pixel";
}

NoiseMode parse_noise_mode(std::string_view name) {
  if (name == "per_pixel") return NoiseMode::per_pixel;
  if (name == "per_patch_scalar") return NoiseMode::per_patch_scalar;
  throw ParameterError("unknown noise mode '" + std::string(name) + "'");
}

void SimParams::validate() const {
  if (!(strength >= 0.0) || !std::isfinite(strength)) {
    throw ParameterError("distortion strength must be finite and >= 0");
  }
  if (!(blur > 0.0) || !std::isfinite(blur)) throw ParameterError("blur must be > 0");
  if (iterations < 1) throw ParameterError("iterations must be >= 1");
  if (patch_half < 1) throw ParameterError("patch_half must be >= 1");
  if (!(smooth_sigma > 0.0) || !std::isfinite(smooth_sigma)) {
    throw ParameterError("smooth_sigma must be > 0");
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SequenceSpec SequenceSpec::sample(std::size_t n_frames, const SimRanges& ranges,
                                  std::uint64_t seed) {
  if (n_frames < 1) throw ParameterError("a sequence needs at least one frame");
  if (!(ranges.strength_min >= 0.0) || ranges.strength_max < ranges.strength_min) {
    throw ParameterError("invalid strength range");
  }
  if (!(ranges.blur_min > 0.0) || ranges.blur_max < ranges.blur_min) {
    throw ParameterError("invalid blur range");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SequenceSpec spec;
  spec.per_frame.reserve(n_frames);
  for (std::size_t i = 0; i < n_frames; ++i) {
    SimParams p;
    p.strength = ranges.strength_min + (ranges.strength_max - ranges.strength_min) * unit(rng);
    p.blur = ranges.blur_min + (ranges.blur_max - ranges.blur_min) * unit(rng);
    p.kernel_mean_offset = 0.2 * unit(rng) - 1.0;
    p.iterations = ranges.iterations;
    p.patch_half = ranges.patch_half;
    p.smooth_sigma = ranges.smooth_sigma;
    p.noise_mode = ranges.noise_mode;
    p.seed = derive_seed(seed, i);
    p.validate();
    spec.per_frame.push_back(p);
  }
  return spec;
}

VectorField gen_vector_field(int width, int height, const SimParams& p) {
  p.validate();
  const int n = p.patch_half;
  if (width <= 2 * n || height <= 2 * n) {
    throw ParameterError("image " + std::to_string(width) + "x" + std::to_string(height) +
                         " too small for patch_half " + std::to_string(n) +
                         " (needs > " + std::to_string(2 * n) + " per side)");
  }

  VectorField field(width, height);
  std::mt19937_64 rng(p.seed);
  std::uniform_int_distribution<int> cx(n, width - 1 - n);
  std::uniform_int_distribution<int> cy(n, height - 1 - n);
  std::normal_distribution<double> normal(0.0, 1.0);

  for (int it = 0; it < p.iterations; ++it) {
    const int x = cx(rng);
    const int y = cy(rng);
    if (p.noise_mode == NoiseMode::per_patch_scalar) {
      const double du = normal(rng);
      const double dv = normal(rng);
      for (int py = y - n; py <= y + n; ++py) {
        for (int px = x - n; px <= x + n; ++px) {
          const std::size_t i = field.index(px, py);
          field.u[i] += du;
          field.v[i] += dv;
        }
      }
    } else {
      for (int py = y - n; py <= y + n; ++py) {
        for (int px = x - n; px <= x + n; ++px) {
          const std::size_t i = field.index(px, py);
          field.u[i] += normal(rng);
          field.v[i] += normal(rng);
        }
      }
    }
  }

  const Kernel1D smooth = gaussian_kernel(p.smooth_sigma);
  field.u = convolve_separable(field.u, width, height, smooth);
  field.v = convolve_separable(field.v, width, height, smooth);
  for (double& value : field.u) value *= p.strength;
  for (double& value : field.v) value *= p.strength;
  return field;
}

Image distort_blur(const Image& img, const SimParams& p) {
  const VectorField field = gen_vector_field(img.width(), img.height(), p);
  const Image distorted = warp(img, field);
  return convolve_separable(distorted, gaussian_kernel(p.blur));
}

FrameSequence gen_sequence(const Image& img, const SequenceSpec& spec) {
  if (spec.per_frame.empty()) throw ParameterError("sequence spec has no frames");
  std::vector<Image> frames;
  frames.reserve(spec.per_frame.size());
  for (const SimParams& p : spec.per_frame) frames.push_back(distort_blur(img, p));
  return FrameSequence(std::move(frames));
}

}  // namespace turbmit
