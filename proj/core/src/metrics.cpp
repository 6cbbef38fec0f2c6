#include "turbmit/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "turbmit/error.hpp"
#include "turbmit/kernels.hpp"
#include "turbmit/subsample.hpp"

namespace turbmit {

namespace {

constexpr int kWindow = 11;
constexpr int kRadius = kWindow / 2;
constexpr double kSigma = 1.5;
constexpr double kC1 = (0.01 * 1.0) * (0.01 * 1.0);
constexpr double kC2 = (0.03 * 1.0) * (0.03 * 1.0);

// Separable Gaussian filtering restricted to the valid region: output is
// (w - 10) x (h - 10).
std::vector<double> filter_valid(const std::vector<double>& src, int w, int h,
                                 const Kernel1D& k) {
  const int ow = w - 2 * kRadius;
  const int oh = h - 2 * kRadius;
  std::vector<double> rows(static_cast<std::size_t>(ow) * static_cast<std::size_t>(h));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int t = -kRadius; t <= kRadius; ++t) {
        acc += k[t] * src[static_cast<std::size_t>(y) * w + (x + kRadius + t)];
      }
      rows[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(ow) * static_cast<std::size_t>(oh));
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int t = -kRadius; t <= kRadius; ++t) {
        acc += k[t] * rows[static_cast<std::size_t>(y + kRadius + t) * ow + x];
      }
      out[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  }
  return out;
}

}  // namespace

double psnr(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw ParameterError("psnr: image shapes differ");
  const double mse = mean_squared_difference(a, b);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

double ssim(const Image& a, const Image& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw ParameterError("ssim: image dimensions differ");
  }
  if (a.width() < kWindow || a.height() < kWindow) {
    throw ParameterError("ssim: image " + std::to_string(a.width()) + "x" +
                         std::to_string(a.height()) + " is smaller than the " +
                         std::to_string(kWindow) + "x" + std::to_string(kWindow) + " window");
  }
  const Image ga = to_grayscale(a);
  const Image gb = to_grayscale(b);
  const int w = ga.width();
  const int h = ga.height();
  const std::size_t n = ga.size();

  std::vector<double> x(ga.samples().begin(), ga.samples().end());
  std::vector<double> y(gb.samples().begin(), gb.samples().end());
  std::vector<double> xx(n), yy(n), xy(n);
  for (std::size_t i = 0; i < n; ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }

  const Kernel1D k = gaussian_kernel(kSigma, kRadius);
  const auto mu_x = filter_valid(x, w, h, k);
  const auto mu_y = filter_valid(y, w, h, k);
  const auto e_xx = filter_valid(xx, w, h, k);
  const auto e_yy = filter_valid(yy, w, h, k);
  const auto e_xy = filter_valid(xy, w, h, k);

  double acc = 0.0;
  for (std::size_t i = 0; i < mu_x.size(); ++i) {
    const double mx = mu_x[i];
    const double my = mu_y[i];
    const double var_x = e_xx[i] - mx * mx;
    const double var_y = e_yy[i] - my * my;
    const double cov = e_xy[i] - mx * my;
    acc += ((2.0 * mx * my + kC1) * (2.0 * cov + kC2)) /
           ((mx * mx + my * my + kC1) * (var_x + var_y + kC2));
  }
  return acc / static_cast<double>(mu_x.size());
}

MetricReport report(const Image& restored, const Image& reference) {
  MetricReport r;
  r.psnr = psnr(restored, reference);
  r.ssim = ssim(restored, reference);
  r.sharpness = laplacian_l1(restored);
  return r;
}

}  // namespace turbmit
