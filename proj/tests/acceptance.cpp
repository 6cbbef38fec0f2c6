// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "turbmit/dataset.hpp"
#include "turbmit/error.hpp"
#include "turbmit/kernels.hpp"
#include "turbmit/metrics.hpp"
#include "turbmit/png_io.hpp"
#include "turbmit/subsample.hpp"
#include "turbmit/tensor_file.hpp"
#include "turbmit/turbulence.hpp"

namespace fs = std::filesystem;
using namespace turbmit;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c);
  return buf;
}

const Image& camera() {
  static const Image img = read_png(testing::data_dir() / "camera64.png");
  return img;
}

// 1. select_subset == exhaustive enumeration on 1,000 random instances for
//    every n in 1..12, under 10 s total.
Outcome subset_solver_exactness() {
  Outcome o;
  const auto start = Clock::now();
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> cost(0.0, 1.0);
  std::uniform_real_distribution<double> tau(0.0, 1.5);
  std::uniform_real_distribution<double> rho(0.01, 2.0);
  std::uniform_real_distribution<double> lambda(0.0, 2.0);
  int mismatches = 0;
  for (std::size_t n = 1; n <= 12; ++n) {
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<double> costs(n);
      for (double& c : costs) c = cost(rng);
      SubsampleParams p;
      p.lambda = lambda(rng);
      p.tau = tau(rng);
      p.rho = rho(rng);
      if (select_subset(costs, p) != brute_force_subsample_step(costs, p)) ++mismatches;
    }
  }
  const double elapsed = seconds_since(start);
  if (mismatches) o.fail(std::to_string(mismatches) + " mismatching instances");
  if (elapsed >= 10.0) o.fail(fmt("runtime %.2f s >= 10 s", elapsed));
  if (o.pass) o.detail = fmt("12000 instances, 0 mismatches, %.2f s", elapsed);
  return o;
}

std::vector<FrameSequence> random_sequences(int count, std::uint64_t seed) {
  std::vector<FrameSequence> out;
  SimRanges ranges;
  ranges.patch_half = 8;
  ranges.smooth_sigma = 2.0;
  ranges.iterations = 100;
  for (int i = 0; i < count; ++i) {
    out.push_back(gen_sequence(camera(), SequenceSpec::sample(20, ranges, derive_seed(seed, i))));
  }
  return out;
}

// 2. On 100 random 20-frame 64x64 sequences, the energy trace never increases
//    by more than 1e-9 per step and the loop stops within max_iter.
Outcome energy_monotonicity(const std::vector<FrameSequence>& sequences) {
  Outcome o;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t longest = 0;
  for (std::size_t s = 0; s < sequences.size(); ++s) {
    SubsampleParams p;
    p.lambda = 2.0 * u(rng);
    p.tau = u(rng);
    p.rho = 0.01 + u(rng);
    p.max_iter = 50;
    const SubsampleResult r = subsample(sequences[s], p);
    longest = std::max(longest, r.energy_trace.size());
    if (r.energy_trace.empty() || r.energy_trace.size() > static_cast<std::size_t>(p.max_iter)) {
      o.fail("sequence " + std::to_string(s) + " ran " +
             std::to_string(r.energy_trace.size()) + " iterations");
    }
    double previous = r.initial_energy;
    for (double e : r.energy_trace) {
      if (e > previous + 1e-9) {
        o.fail("sequence " + std::to_string(s) + fmt(": energy rose %.3e -> %.3e", previous, e));
      }
      previous = e;
    }
  }
  if (o.pass) {
    o.detail = std::to_string(sequences.size()) + " sequences, longest trace " +
               std::to_string(longest) + " iterations";
  }
  return o;
}

// 3. 5 mild + 15 severe frames over 20 seeds: >= 90% of runs select >= 4 mild
//    frames, and >= 90% of runs fuse to a higher PSNR than the all-frame mean.
Outcome lucky_frame_recovery() {
  Outcome o;
  const auto start = Clock::now();
  constexpr int kRuns = 20;
  int recovered = 0;
  int better = 0;
  SubsampleParams p;  // lambda 1, tau 0.5, rho 0.1
  for (int seed = 0; seed < kRuns; ++seed) {
    const auto mixed = testing::mixed_quality_sequence(camera(), 1000 + seed);
    const SubsampleResult r = subsample(mixed.frames, p);
    int mild_hits = 0;
    for (std::size_t k : r.indices) {
      mild_hits += std::binary_search(mixed.mild.begin(), mixed.mild.end(), k);
    }
    recovered += mild_hits >= 4;
    std::vector<std::size_t> all(mixed.frames.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    const double fused = psnr(r.reference, camera());
    const double mean = psnr(fuse(mixed.frames, all), camera());
    better += fused > mean;
  }
  const double elapsed = seconds_since(start);
  if (recovered < 18) o.fail(std::to_string(recovered) + "/20 runs recovered >= 4 mild frames");
  if (better < 18) o.fail(std::to_string(better) + "/20 runs beat the all-frame mean");
  if (elapsed >= 60.0) o.fail(fmt("runtime %.2f s >= 60 s", elapsed));
  if (o.pass) {
    o.detail = std::to_string(recovered) + "/20 recovered, " + std::to_string(better) +
               "/20 beat mean, " + fmt("%.2f s", elapsed);
  }
  return o;
}

// 4. Fixed seed: the field at S = 0.4 equals 4x the field at S = 0.1 within
//    1e-6 elementwise.
Outcome simulator_linearity() {
  Outcome o;
  double worst = 0.0;
  for (NoiseMode mode : {NoiseMode::per_pixel, NoiseMode::per_patch_scalar}) {
    SimParams lo;
    lo.seed = 4242;
    lo.noise_mode = mode;
    lo.strength = 0.1;
    SimParams hi = lo;
    hi.strength = 0.4;
    const VectorField a = gen_vector_field(128, 128, lo);
    const VectorField b = gen_vector_field(128, 128, hi);
    for (std::size_t i = 0; i < a.u.size(); ++i) {
      worst = std::max({worst, std::abs(b.u[i] - 4.0 * a.u[i]), std::abs(b.v[i] - 4.0 * a.v[i])});
    }
  }
  if (worst > 1e-6) o.fail(fmt("max deviation %.3e > 1e-6", worst));
  else o.detail = fmt("max deviation %.3e", worst);
  return o;
}

// 5. Zero-field warp is bit-exact, unit-sum kernels keep constants within
//    1e-6, the Laplacian of affine images vanishes in the interior within 1e-6,
//    and Q lies in [0, 1] with minimum 0 on every sequence.
Outcome numerical_identities(const std::vector<FrameSequence>& sequences) {
  Outcome o;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  for (int trial = 0; trial < 20; ++trial) {
    const Image img = testing::random_image(17 + trial, 23, trial % 2 ? 3 : 1, rng);
    if (!(warp(img, VectorField(img.width(), img.height())) == img)) {
      o.fail("zero-field warp changed the image");
    }
  }

  double worst_const = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double value = u(rng);
    const Image img(31, 19, 3, value);
    const Kernel1D k = trial % 2 ? gaussian_kernel(0.1 + 10.0 * u(rng))
                                 : Kernel1D(2, {u(rng), u(rng), u(rng), u(rng), u(rng)});
    worst_const = std::max(worst_const,
                           testing::max_abs_difference(convolve_separable(img, k), img));
  }
  if (worst_const > 1e-6) o.fail(fmt("constant drift %.3e", worst_const));

  double worst_lap = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double a = 2 * u(rng) - 1, b = 2 * u(rng) - 1, c = u(rng);
    Image img(40, 30, 1);
    for (int y = 0; y < 30; ++y) {
      for (int x = 0; x < 40; ++x) img.at(x, y) = a * x / 40.0 + b * y / 30.0 + c;
    }
    const Image lap = laplacian(img);
    for (int y = 1; y < 29; ++y) {
      for (int x = 1; x < 39; ++x) worst_lap = std::max(worst_lap, std::abs(lap.at(x, y)));
    }
  }
  if (worst_lap > 1e-6) o.fail(fmt("affine Laplacian residual %.3e", worst_lap));

  for (std::size_t s = 0; s < sequences.size(); ++s) {
    const auto q = quality_measure(sequences[s]);
    const auto [lo, hi] = std::minmax_element(q.begin(), q.end());
    if (*lo != 0.0 || *hi > 1.0 || *lo < 0.0) {
      o.fail("quality out of range on sequence " + std::to_string(s));
    }
  }
  if (o.pass) {
    o.detail = fmt("const drift %.1e, affine residual %.1e, ", worst_const, worst_lap) +
               std::to_string(sequences.size()) + " sequences with Q in [0,1], min 0";
  }
  return o;
}

// 6. PSNR of a 10/255 offset is 28.13 +- 0.01 dB, ssim(a, a) = 1 within 1e-9,
//    PSNR strictly decreases over noise amplitudes 0.01, 0.02, 0.05, 0.1.
Outcome metric_references() {
  Outcome o;
  const Image a(64, 64, 1, 0.3);
  const Image b(64, 64, 1, 0.3 + 10.0 / 255.0);
  const double offset_psnr = psnr(a, b);
  if (std::abs(offset_psnr - 28.13) > 0.01) o.fail(fmt("offset psnr %.4f", offset_psnr));

  const double self = ssim(camera(), camera());
  if (std::abs(self - 1.0) > 1e-9) o.fail(fmt("ssim(a,a) = %.12f", self));

  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Image unit_noise(64, 64, 1);
  for (double& s : unit_noise.samples()) s = u(rng);
  double previous = std::numeric_limits<double>::infinity();
  std::string values;
  for (double amp : {0.01, 0.02, 0.05, 0.1}) {
    Image noisy = camera();
    for (std::size_t i = 0; i < noisy.size(); ++i) noisy.samples()[i] += amp * unit_noise.samples()[i];
    const double value = psnr(noisy, camera());
    if (!(value < previous)) o.fail(fmt("psnr not decreasing at amplitude %.2f", amp));
    values += fmt("%.2f ", value);
    previous = value;
  }
  if (o.pass) o.detail = fmt("offset %.4f dB, ssim(a,a)-1 = %.1e, noise psnr ", offset_psnr,
                             self - 1.0) + values;
  return o;
}

// 7. Tensor files round-trip bitwise on 100 random tensors including a
//    (20,1,256,256) stack, corrupt headers raise categorized format errors,
//    and a dataset build is byte-reproducible under a fixed seed.
Outcome format_fidelity() {
  Outcome o;
  testing::TempDir dir("acceptance_format");
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint32_t> bits;
  std::uniform_int_distribution<int> rank(1, 4);
  std::uniform_int_distribution<std::uint32_t> dim(1, 8);

  for (int trial = 0; trial < 100; ++trial) {
    Tensor t;
    if (trial == 0) {
      t.dims = {20, 1, 256, 256};
    } else {
      t.dims.resize(static_cast<std::size_t>(rank(rng)));
      for (auto& d : t.dims) d = dim(rng);
    }
    t.data.resize(t.element_count());
    for (float& f : t.data) {
      do {
        f = std::bit_cast<float>(bits(rng));
      } while (!std::isfinite(f));
    }
    const fs::path path = dir.path() / ("t" + std::to_string(trial) + ".trnt");
    write_tensor(t, path);
    const Tensor back = read_tensor(path);
    if (back.dims != t.dims ||
        std::memcmp(back.data.data(), t.data.data(), 4 * t.data.size()) != 0) {
      o.fail("tensor " + std::to_string(trial) + " did not round-trip bitwise");
    }
  }

  const auto good = encode_tensor(Tensor{{2, 3}, {1, 2, 3, 4, 5, 6}});
  struct Corruption {
    const char* name;
    std::function<void(std::vector<std::uint8_t>&)> apply;
    std::uint64_t offset;
  };
  const std::vector<Corruption> corruptions = {
      {"magic", [](auto& b) { b[0] = 'X'; }, 0},
      {"version", [](auto& b) { b[4] = 9; }, 4},
      {"rank", [](auto& b) { b[8] = 0; }, 8},
      {"truncated", [](auto& b) { b.resize(b.size() - 1); }, good.size() - 1},
  };
  for (const auto& c : corruptions) {
    auto bytes = good;
    c.apply(bytes);
    try {
      decode_tensor(bytes);
      o.fail(std::string("corrupt ") + c.name + " accepted");
    } catch (const FormatError& e) {
      if (std::string(e.category()) != "format" || e.offset() != c.offset) {
        o.fail(std::string("corrupt ") + c.name + " reported offset " + std::to_string(e.offset()));
      }
    }
  }

  fs::create_directories(dir.path() / "in");
  fs::copy_file(testing::data_dir() / "camera64.png", dir.path() / "in" / "camera.png");
  fs::copy_file(testing::data_dir() / "astronaut48.png", dir.path() / "in" / "astronaut.png");
  auto build = [&](const char* out) {
    DatasetConfig cfg;
    cfg.input_dir = dir.path() / "in";
    cfg.output_dir = dir.path() / out;
    cfg.image_size = 64;
    cfg.sequences_per_image = 3;
    cfg.frames_per_sequence = 4;
    cfg.seed = 77;
    cfg.split = 0.5;
    cfg.sim.patch_half = 8;
    cfg.sim.smooth_sigma = 2.0;
    cfg.sim.iterations = 300;
    return build_dataset(cfg);
  };
  const Manifest first = build("a");
  const Manifest second = build("b");
  std::size_t files = 1;
  if (testing::read_bytes(first.path) != testing::read_bytes(second.path)) {
    o.fail("manifests differ");
  }
  for (const auto& e : first.entries) {
    for (const auto& name : {e.sequence_path, e.target_path}) {
      ++files;
      if (testing::read_bytes(dir.path() / "a" / name) != testing::read_bytes(dir.path() / "b" / name)) {
        o.fail("dataset file " + name + " differs between builds");
      }
    }
  }
  if (o.pass) {
    o.detail = "100 tensors bitwise, 4 corruptions rejected, " + std::to_string(files) +
               " dataset files identical";
  }
  return o;
}

}  // namespace

int main() {
  int failures = 0;
  auto report_line = [&](int id, const char* name, const std::function<Outcome()>& run) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::printf("[%s] %d. %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  };

  const auto sequences = random_sequences(100, 2024);

  report_line(1, "subset-solver exactness", subset_solver_exactness);
  report_line(2, "energy monotonicity and termination",
              [&] { return energy_monotonicity(sequences); });
  report_line(3, "lucky-frame recovery", lucky_frame_recovery);
  report_line(4, "simulator linearity", simulator_linearity);
  report_line(5, "numerical identities", [&] { return numerical_identities(sequences); });
  report_line(6, "metric references", metric_references);
  report_line(7, "format fidelity", format_fidelity);

  std::printf("%d/7 criteria passed\n", 7 - failures);
  return failures == 0 ? 0 : 1;
}
