#include "turbmit/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "turbmit/error.hpp"

namespace turbmit {

namespace {

inline int clamp_index(int i, int n) noexcept { return std::clamp(i, 0, n - 1); }

// One horizontal + one vertical pass over a strided plane. `stride` is the
// channel count and `offset` the channel index, so interleaved images are
// filtered in place of a copy per channel.
void convolve_plane(std::span<const double> src, std::span<double> dst, int width,
                    int height, int stride, int offset, const Kernel1D& k) {
  const int r = k.radius();
  const auto at = [&](int x, int y) {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
            static_cast<std::size_t>(x)) *
               static_cast<std::size_t>(stride) +
           static_cast<std::size_t>(offset);
  };

  std::vector<double> tmp(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double acc = 0.0;
      for (int t = -r; t <= r; ++t) acc += k[t] * src[at(clamp_index(x + t, width), y)];
      tmp[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
          static_cast<std::size_t>(x)] = acc;
    }
  }
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double acc = 0.0;
      for (int t = -r; t <= r; ++t) {
        acc += k[t] * tmp[static_cast<std::size_t>(clamp_index(y + t, height)) *
                              static_cast<std::size_t>(width) +
                          static_cast<std::size_t>(x)];
      }
      dst[at(x, y)] = acc;
    }
  }
}

double bilinear(const Image& img, double sx, double sy, int c) noexcept {
  const int w = img.width();
  const int h = img.height();
  sx = std::clamp(sx, 0.0, static_cast<double>(w - 1));
  sy = std::clamp(sy, 0.0, static_cast<double>(h - 1));
  const int x0 = static_cast<int>(std::floor(sx));
  const int y0 = static_cast<int>(std::floor(sy));
  const int x1 = std::min(x0 + 1, w - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  const double fx = sx - x0;
  const double fy = sy - y0;
  const double top = img.at(x0, y0, c) + fx * (img.at(x1, y0, c) - img.at(x0, y0, c));
  const double bottom = img.at(x0, y1, c) + fx * (img.at(x1, y1, c) - img.at(x0, y1, c));
  return top + fy * (bottom - top);
}

}  // namespace

Kernel1D::Kernel1D(int radius, std::vector<double> weights)
    : radius_(radius), weights_(std::move(weights)) {
  if (radius < 0) throw ParameterError("kernel radius must be >= 0");
  if (weights_.size() != static_cast<std::size_t>(2 * radius + 1)) {
    throw ParameterError("kernel of radius " + std::to_string(radius) + " needs " +
                         std::to_string(2 * radius + 1) + " weights");
  }
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ParameterError("kernel weights must be finite and nonnegative");
    }
  }
  const double sum = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (!(sum > 0.0)) throw ParameterError("kernel weights sum to zero");
  for (double& w : weights_) w /= sum;
}

int default_kernel_radius(double sigma) {
  return std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
}

Kernel1D gaussian_kernel(double sigma, int radius) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ParameterError("gaussian sigma must be positive, got " + std::to_string(sigma));
  }
  if (radius < 0) throw ParameterError("gaussian radius must be >= 0");
  std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
  for (int i = 0; i <= radius; ++i) {
    const double n = static_cast<double>(i);
    const double value = std::exp(-(n * n) / (2.0 * sigma * sigma));
    w[static_cast<std::size_t>(radius + i)] = value;
    w[static_cast<std::size_t>(radius - i)] = value;
  }
  return Kernel1D(radius, std::move(w));
}

Kernel1D gaussian_kernel(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ParameterError("gaussian sigma must be positive, got " + std::to_string(sigma));
  }
  return gaussian_kernel(sigma, default_kernel_radius(sigma));
}

Image convolve_separable(const Image& img, const Kernel1D& k) {
  Image out(img.width(), img.height(), img.channels());
  for (int c = 0; c < img.channels(); ++c) {
    convolve_plane(img.samples(), out.samples(), img.width(), img.height(), img.channels(),
                   c, k);
  }
  return out;
}

std::vector<double> convolve_separable(std::span<const double> plane, int width, int height,
                                       const Kernel1D& k) {
  if (width < 1 || height < 1 ||
      plane.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw ParameterError("plane size does not match its dimensions");
  }
  std::vector<double> out(plane.size());
  convolve_plane(plane, out, width, height, 1, 0, k);
  return out;
}

Image laplacian(const Image& img) {
  if (img.channels() != 1) {
    throw ParameterError("laplacian requires a single-channel image, got " +
                         std::to_string(img.channels()) + " channels");
  }
  const int w = img.width();
  const int h = img.height();
  Image out(w, h, 1);
  for (int y = 0; y < h; ++y) {
    const int ym = clamp_index(y - 1, h);
    const int yp = clamp_index(y + 1, h);
    for (int x = 0; x < w; ++x) {
      const int xm = clamp_index(x - 1, w);
      const int xp = clamp_index(x + 1, w);
      out.at(x, y) = img.at(xm, y) + img.at(xp, y) + img.at(x, ym) + img.at(x, yp) -
                     4.0 * img.at(x, y);
    }
  }
  return out;
}

Image warp(const Image& img, const VectorField& field) {
  if (field.width != img.width() || field.height != img.height()) {
    throw ParameterError("vector field " + std::to_string(field.width) + "x" +
                         std::to_string(field.height) + " does not match image " +
                         std::to_string(img.width()) + "x" + std::to_string(img.height()));
  }
  if (field.u.size() != img.pixel_count() || field.v.size() != img.pixel_count()) {
    throw ParameterError("vector field component length mismatch");
  }
  Image out(img.width(), img.height(), img.channels());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const std::size_t i = field.index(x, y);
      const double sx = x + field.u[i];
      const double sy = y + field.v[i];
      for (int c = 0; c < img.channels(); ++c) out.at(x, y, c) = bilinear(img, sx, sy, c);
    }
  }
  return out;
}

Image to_grayscale(const Image& img) {
  if (img.channels() == 1) return img;
  Image out(img.width(), img.height(), 1);
  auto src = img.samples();
  auto dst = out.samples();
  for (std::size_t p = 0; p < dst.size(); ++p) {
    dst[p] = 0.299 * src[3 * p] + 0.587 * src[3 * p + 1] + 0.114 * src[3 * p + 2];
  }
  return out;
}

Image resize(const Image& img, int new_width, int new_height) {
  if (new_width < 1 || new_height < 1) {
    throw ParameterError("resize target must be at least 1x1, got " +
                         std::to_string(new_width) + "x" + std::to_string(new_height));
  }
  const double scale_x = static_cast<double>(img.width()) / new_width;
  const double scale_y = static_cast<double>(img.height()) / new_height;
  Image out(new_width, new_height, img.channels());
  for (int y = 0; y < new_height; ++y) {
    const double sy = (y + 0.5) * scale_y - 0.5;
    for (int x = 0; x < new_width; ++x) {
      const double sx = (x + 0.5) * scale_x - 0.5;
      for (int c = 0; c < img.channels(); ++c) out.at(x, y, c) = bilinear(img, sx, sy, c);
    }
  }
  return out;
}

}  // namespace turbmit
