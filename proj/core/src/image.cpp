#include "turbmit/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "turbmit/error.hpp"

namespace turbmit {

namespace {

void check_dims(int width, int height, int channels) {
  if (width < 1 || height < 1) {
    throw ParameterError("image dimensions must be positive, got " +
                         std::to_string(width) + "x" + std::to_string(height));
  }
  if (channels != 1 && channels != 3) {
    throw ParameterError("image must have 1 or 3 channels, got " +
                         std::to_string(channels));
  }
}

}  // namespace

Image::Image(int width, int height, int channels)
    : Image(width, height, channels, 0.0) {}

Image::Image(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels) {
  check_dims(width, height, channels);
  if (!std::isfinite(fill)) throw ParameterError("image fill value is not finite");
  samples_.assign(pixel_count() * static_cast<std::size_t>(channels), fill);
}

Image::Image(int width, int height, int channels, std::vector<double> samples)
    : width_(width), height_(height), channels_(channels), samples_(std::move(samples)) {
  check_dims(width, height, channels);
  if (samples_.size() != pixel_count() * static_cast<std::size_t>(channels)) {
    throw ParameterError("sample count " + std::to_string(samples_.size()) +
                         " does not match " + std::to_string(width) + "x" +
                         std::to_string(height) + "x" + std::to_string(channels));
  }
  if (!all_finite(samples_)) throw ParameterError("image contains non-finite samples");
}

FrameSequence::FrameSequence(std::vector<Image> frames) : frames_(std::move(frames)) {
  if (frames_.empty()) throw ParameterError("frame sequence is empty");
  for (std::size_t i = 1; i < frames_.size(); ++i) {
    if (!frames_[i].same_shape(frames_[0])) {
      throw ParameterError("frame " + std::to_string(i) +
                           " differs in shape from frame 0");
    }
  }
}

VectorField::VectorField(int w, int h) : width(w), height(h) {
  if (w < 1 || h < 1) throw ParameterError("vector field dimensions must be positive");
  u.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0.0);
  v.assign(u.size(), 0.0);
}

double mean_squared_difference(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw ParameterError("image shapes differ");
  auto sa = a.samples();
  auto sb = b.samples();
  double acc = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const double d = sa[i] - sb[i];
    acc += d * d;
  }
  return acc / static_cast<double>(sa.size());
}

bool all_finite(std::span<const double> values) noexcept {
  return std::all_of(values.begin(), values.end(),
                     [](double v) { return std::isfinite(v); });
}

}  // namespace turbmit
