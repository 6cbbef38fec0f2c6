#include "turbmit/subsample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "turbmit/error.hpp"
#include "turbmit/kernels.hpp"

namespace turbmit {

namespace {

void check_indices(std::span<const std::size_t> indices, std::size_t n) {
  if (indices.empty()) throw ParameterError("index set is empty");
  for (std::size_t k : indices) {
    if (k >= n) {
      throw ParameterError("frame index " + std::to_string(k) + " out of range for " +
                           std::to_string(n) + " frames");
    }
  }
}

void check_costs(std::span<const double> costs) {
  if (costs.empty()) throw ParameterError("no per-frame costs");
  if (!std::all_of(costs.begin(), costs.end(), [](double c) { return std::isfinite(c); })) {
    throw ParameterError("per-frame costs must be finite");
  }
}

std::vector<double> per_frame_costs(const Image& reference, const FrameSequence& seq,
                                    std::span<const double> quality, double lambda) {
  std::vector<double> costs(seq.size());
  for (std::size_t k = 0; k < seq.size(); ++k) {
    costs[k] = mean_squared_difference(reference, seq[k]) + lambda * quality[k];
  }
  return costs;
}

}  // namespace

void SubsampleParams::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ParameterError("lambda must be >= 0");
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw ParameterError("tau must be >= 0");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw ParameterError("rho must be > 0");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ParameterError("epsilon must be > 0");
  if (max_iter < 1) throw ParameterError("max_iter must be >= 1");
}

double laplacian_l1(const Image& img) {
  const Image lap = laplacian(to_grayscale(img));
  double acc = 0.0;
  for (double v : lap.samples()) acc += std::abs(v);
  return acc;
}

std::vector<double> normalized_quality(std::span<const double> sharpness) {
  std::vector<double> q(sharpness.size(), 0.0);
  if (sharpness.empty()) return q;
  const auto [lo, hi] = std::minmax_element(sharpness.begin(), sharpness.end());
  const double max_s = *hi;
  const double min_s = *lo;
  if (max_s == min_s) return q;
  for (std::size_t k = 0; k < sharpness.size(); ++k) {
    q[k] = std::clamp((max_s - sharpness[k]) / (max_s - min_s), 0.0, 1.0);
  }
  return q;
}

std::vector<double> quality_measure(const FrameSequence& seq) {
  std::vector<double> sharpness(seq.size());
  for (std::size_t k = 0; k < seq.size(); ++k) sharpness[k] = laplacian_l1(seq[k]);
  return normalized_quality(sharpness);
}

double size_reward(std::size_t j, const SubsampleParams& p) {
  return p.tau * (1.0 - std::exp(-p.rho * static_cast<double>(j)));
}

double energy(const Image& reference, std::span<const std::size_t> indices,
              const FrameSequence& seq, std::span<const double> quality,
              const SubsampleParams& p) {
  check_indices(indices, seq.size());
  if (quality.size() != seq.size()) {
    throw ParameterError("quality list length does not match the sequence");
  }
  double acc = 0.0;
  for (std::size_t k : indices) {
    acc += mean_squared_difference(reference, seq[k]) + p.lambda * quality[k];
  }
  return acc / static_cast<double>(indices.size()) - size_reward(indices.size(), p);
}

IndexSet select_subset(std::span<const double> per_frame_cost, const SubsampleParams& p) {
  check_costs(per_frame_cost);
  const std::size_t n = per_frame_cost.size();
  IndexSet order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return per_frame_cost[a] < per_frame_cost[b];
  });

  double prefix = 0.0;
  double best = 0.0;
  std::size_t best_j = 0;
  for (std::size_t j = 1; j <= n; ++j) {
    prefix += per_frame_cost[order[j - 1]];
    const double s = prefix / static_cast<double>(j) - size_reward(j, p);
    if (best_j == 0 || s < best) {
      best = s;
      best_j = j;
    }
  }
  IndexSet chosen(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(best_j));
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

IndexSet brute_force_subsample_step(std::span<const double> per_frame_cost,
                                    const SubsampleParams& p) {
  check_costs(per_frame_cost);
  const std::size_t n = per_frame_cost.size();
  if (n > 20) {
    throw ParameterError("brute-force enumeration is limited to 20 frames, got " +
                         std::to_string(n));
  }
  IndexSet best;
  double best_value = 0.0;
  IndexSet current;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    current.clear();
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (mask & (1u << k)) {
        current.push_back(k);
        sum += per_frame_cost[k];
      }
    }
    const double value = sum / static_cast<double>(current.size()) -
                         size_reward(current.size(), p);
    const bool better =
        best.empty() || value < best_value ||
        (value == best_value &&
         (current.size() < best.size() || (current.size() == best.size() && current < best)));
    if (better) {
      best = current;
      best_value = value;
    }
  }
  return best;
}

Image fuse(const FrameSequence& seq, std::span<const std::size_t> indices) {
  check_indices(indices, seq.size());
  const Image& first = seq[indices.front()];
  Image out(first.width(), first.height(), first.channels());
  auto dst = out.samples();
  for (std::size_t k : indices) {
    auto src = seq[k].samples();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  }
  const double count = static_cast<double>(indices.size());
  for (double& v : dst) v /= count;
  return out;
}

SubsampleResult subsample(const FrameSequence& seq, const SubsampleParams& p) {
  p.validate();
  SubsampleResult result;
  result.quality = quality_measure(seq);

  IndexSet all(seq.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  result.indices = all;
  result.reference = fuse(seq, all);
  result.initial_energy = energy(result.reference, all, seq, result.quality, p);

  double previous = result.initial_energy;
  for (int it = 0; it < p.max_iter; ++it) {
    result.costs = per_frame_costs(result.reference, seq, result.quality, p.lambda);
    result.indices = select_subset(result.costs, p);
    result.reference = fuse(seq, result.indices);
    const double e = energy(result.reference, result.indices, seq, result.quality, p);
    if (!std::isfinite(e)) throw NumericError("subsampling energy is not finite");
    result.energy_trace.push_back(e);
    if (previous - e <= p.epsilon) break;
    previous = e;
  }
  return result;
}

}  // namespace turbmit
