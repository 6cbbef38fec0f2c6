#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace turbmit {

// Float-sample raster. Samples are row-major and channel-interleaved with a
// nominal range of [0, 1]; channels is 1 (gray) or 3 (RGB).
class Image {
 public:
  Image() = default;

  // Zero-filled image. Throws ParameterError on invalid dimensions.
  Image(int width, int height, int channels);
  Image(int width, int height, int channels, double fill);

  // Takes ownership of `samples`; throws ParameterError if the length does
  // not match or any sample is non-finite.
  Image(int width, int height, int channels, std::vector<double> samples);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }

  std::span<const double> samples() const noexcept { return samples_; }
  std::span<double> samples() noexcept { return samples_; }

  double at(int x, int y, int c = 0) const noexcept {
    return samples_[index(x, y, c)];
  }
  double& at(int x, int y, int c = 0) noexcept { return samples_[index(x, y, c)]; }

  bool same_shape(const Image& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_ &&
           channels_ == other.channels_;
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int x, int y, int c) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) *
               static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(c);
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> samples_;
};

// Non-empty ordered list of dimension-identical frames.
class FrameSequence {
 public:
  explicit FrameSequence(std::vector<Image> frames);

  std::size_t size() const noexcept { return frames_.size(); }
  const Image& operator[](std::size_t i) const { return frames_[i]; }
  const Image& front() const noexcept { return frames_.front(); }
  std::span<const Image> frames() const noexcept { return frames_; }
  auto begin() const noexcept { return frames_.begin(); }
  auto end() const noexcept { return frames_.end(); }

  int width() const noexcept { return frames_.front().width(); }
  int height() const noexcept { return frames_.front().height(); }
  int channels() const noexcept { return frames_.front().channels(); }

 private:
  std::vector<Image> frames_;
};

// Per-pixel displacement in pixel units, row-major.
struct VectorField {
  VectorField() = default;
  VectorField(int width, int height);

  int width = 0;
  int height = 0;
  std::vector<double> u;
  std::vector<double> v;

  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(x);
  }
};

// Mean squared sample difference. Throws ParameterError on shape mismatch.
double mean_squared_difference(const Image& a, const Image& b);

bool all_finite(std::span<const double> values) noexcept;

}  // namespace turbmit
