#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "turbmit/image.hpp"

namespace turbmit {

// Weights of the subsampling energy
//   E(I_R, J) = 1/|J| * sum_{k in J} (msd(I_R, I_k) + lambda * Q_k)
//               - tau * (1 - exp(-rho * |J|)).
struct SubsampleParams {
  double lambda = 1.0;   // sharpness weight
  double tau = 0.5;      // subsample-size reward
  double rho = 0.1;      // size decay rate
  double epsilon = 1e-6; // stop when the energy decreases by no more than this
  int max_iter = 50;

  void validate() const;
};

using IndexSet = std::vector<std::size_t>;

struct SubsampleResult {
  IndexSet indices;                  // ascending
  Image reference;                   // mean of the selected frames
  double initial_energy = 0.0;       // energy of the all-frame mean over all frames
  std::vector<double> energy_trace;  // one value per outer iteration
  std::vector<double> quality;       // Q_k in [0, 1], 0 for the sharpest frame
  std::vector<double> costs;         // final per-frame costs msd + lambda * Q_k
};

// Normalized inverted Laplacian l1 sharpness of every frame (computed on
// luma). All zeros when every frame is equally sharp.
std::vector<double> quality_measure(const FrameSequence& seq);

// (max - s_k) / (max - min) for every sharpness score; all zeros when the
// scores are equal.
std::vector<double> normalized_quality(std::span<const double> sharpness);

// Laplacian l1 norm of the luma of `img`.
double laplacian_l1(const Image& img);

// Size reward tau * (1 - exp(-rho * j)).
double size_reward(std::size_t j, const SubsampleParams& p);

double energy(const Image& reference, std::span<const std::size_t> indices,
              const FrameSequence& seq, std::span<const double> quality,
              const SubsampleParams& p);

// Exact minimizer of mean(costs over J) - size_reward(|J|) by a prefix scan
// over the ascending costs. Ties go to the smaller frame index, then the
// smaller subset. Returns ascending indices.
IndexSet select_subset(std::span<const double> per_frame_cost, const SubsampleParams& p);

// Enumerates all 2^n - 1 nonempty subsets; n <= 20. Ties go to the smaller
// subset, then to the lexicographically smaller ascending index list.
IndexSet brute_force_subsample_step(std::span<const double> per_frame_cost,
                                    const SubsampleParams& p);

// Elementwise mean over the frames in `indices`.
Image fuse(const FrameSequence& seq, std::span<const std::size_t> indices);

// Alternating minimization of the energy over (J, I_R), starting from the
// mean of all frames.
SubsampleResult subsample(const FrameSequence& seq, const SubsampleParams& p);

}  // namespace turbmit
