#pragma once

#include <span>
#include <vector>

#include "turbmit/image.hpp"

namespace turbmit {

// Symmetric 1D filter of 2*radius+1 taps, normalized to unit sum on
// construction.
class Kernel1D {
 public:
  // Throws ParameterError for negative radius, wrong tap count, negative
  // taps or a zero sum.
  Kernel1D(int radius, std::vector<double> weights);

  static Kernel1D identity() { return Kernel1D(0, {1.0}); }

  int radius() const noexcept { return radius_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double operator[](int offset) const noexcept { return weights_[offset + radius_]; }

 private:
  int radius_;
  std::vector<double> weights_;
};

// max(1, ceil(3 * sigma)).
int default_kernel_radius(double sigma);

// Sampled Gaussian exp(-n^2 / (2 sigma^2)) for n in [-radius, radius].
Kernel1D gaussian_kernel(double sigma, int radius);
Kernel1D gaussian_kernel(double sigma);

// Horizontal then vertical pass per channel, clamp-to-edge boundary.
Image convolve_separable(const Image& img, const Kernel1D& k);

// Same as above for a single row-major plane of `width` x `height` values.
std::vector<double> convolve_separable(std::span<const double> plane, int width,
                                       int height, const Kernel1D& k);

// 5-point Laplacian [[0,1,0],[1,-4,1],[0,1,0]] with clamp-to-edge boundary.
// Requires a single-channel image.
Image laplacian(const Image& img);

// Backward bilinear warp: out(x, y) = img(x + u(x, y), y + v(x, y)), with the
// sample position clamped to the image.
Image warp(const Image& img, const VectorField& field);

// Rec.601 luma for RGB input; gray input is returned unchanged.
Image to_grayscale(const Image& img);

// Bilinear resampling with pixel-center alignment and edge clamping.
Image resize(const Image& img, int new_width, int new_height);

}  // namespace turbmit
