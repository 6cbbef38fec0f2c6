#pragma once

#include "turbmit/image.hpp"

namespace turbmit {

// Full-reference quality of a restored image against ground truth.
struct MetricReport {
  double psnr = 0.0;       // dB, +infinity for identical images
  double ssim = 0.0;
  double sharpness = 0.0;  // Laplacian l1 norm of the restored luma
};

// 10 log10(1 / mse) over all samples and channels, peak 1.0.
double psnr(const Image& a, const Image& b);

// Mean SSIM over all valid 11x11 Gaussian windows (sigma 1.5, K1 = 0.01,
// K2 = 0.03, data range 1). Color input is converted to luma first. Both
// sides must be at least 11 pixels.
double ssim(const Image& a, const Image& b);

MetricReport report(const Image& restored, const Image& reference);

}  // namespace turbmit
