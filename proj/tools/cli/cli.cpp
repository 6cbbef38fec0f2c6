#include "cli/cli.hpp"

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "turbmit/dataset.hpp"
#include "turbmit/error.hpp"
#include "turbmit/kernels.hpp"
#include "turbmit/metrics.hpp"
#include "turbmit/png_io.hpp"
#include "turbmit/subsample.hpp"
#include "turbmit/tensor_file.hpp"
#include "turbmit/turbulence.hpp"

namespace turbmit::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// Flag values that parse but make no sense (for example a reversed range).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::shared_ptr<spdlog::logger> logger() {
  static auto log = [] {
    auto l = std::make_shared<spdlog::logger>(
        "turbmit", std::make_shared<spdlog::sinks::stderr_sink_mt>());
    l->set_pattern("[%l] %v");
    l->set_level(spdlog::level::warn);
    return l;
  }();
  return log;
}

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_fixed(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::pair<double, double> parse_range(const std::string& text, const char* flag) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw UsageError(std::string(flag) + " expects lo:hi, got '" + text + "'");
  }
  try {
    std::size_t used_lo = 0;
    std::size_t used_hi = 0;
    const std::string lo_text = text.substr(0, colon);
    const std::string hi_text = text.substr(colon + 1);
    const double lo = std::stod(lo_text, &used_lo);
    const double hi = std::stod(hi_text, &used_hi);
    if (used_lo != lo_text.size() || used_hi != hi_text.size()) throw std::invalid_argument("");
    if (!(lo <= hi)) throw UsageError(std::string(flag) + " lower bound exceeds upper bound");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw UsageError(std::string(flag) + " expects two numbers lo:hi, got '" + text + "'");
  }
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

IndexSet read_index_file(const fs::path& path, std::size_t n_frames) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open index file " + path.string());
  IndexSet indices;
  std::string line;
  std::uint64_t offset = 0;
  while (std::getline(in, line)) {
    const std::uint64_t line_start = offset;
    offset += line.size() + 1;
    if (line.empty()) continue;
    std::size_t used = 0;
    unsigned long long k = 0;
    try {
      k = std::stoull(line, &used);
    } catch (const std::logic_error&) {
      throw FormatError("index file line is not an integer", line_start);
    }
    if (used != line.size()) throw FormatError("index file line is not an integer", line_start);
    if (k >= n_frames) throw FormatError("frame index out of range", line_start);
    indices.push_back(static_cast<std::size_t>(k));
  }
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  if (indices.empty()) throw FormatError("index file lists no frames", 0);
  return indices;
}

json sim_params_json(const SimParams& p) {
  return json{{"strength", p.strength},
              {"blur", p.blur},
              {"iterations", p.iterations},
              {"patch_half", p.patch_half},
              {"smooth_sigma", p.smooth_sigma},
              {"kernel_mean_offset", p.kernel_mean_offset},
              {"seed", p.seed},
              {"noise_mode", std::string(to_string(p.noise_mode))}};
}

json subsample_params_json(const SubsampleParams& p) {
  return json{{"lambda", p.lambda},
              {"tau", p.tau},
              {"rho", p.rho},
              {"epsilon", p.epsilon},
              {"max_iter", p.max_iter}};
}

struct SimulateArgs {
  std::string input;
  std::string out;
  int frames = 20;
  std::string strength_range = "0.1:0.4";
  std::string blur_range = "0.1:1.0";
  std::uint64_t seed = 0;
  int iterations = 1000;
  int patch_half = 32;
  double smooth_sigma = 8.0;
  std::string noise_mode = "per_pixel";
};

struct SubsampleArgs {
  std::string frames;
  std::string out;
  std::string selected;
  SubsampleParams params;
};

struct FuseArgs {
  std::string frames;
  std::string selected;
  std::string out;
};

struct MetricsArgs {
  std::string restored;
  std::string truth;
};

struct DatasetArgs {
  std::string config;
  std::uint64_t seed = 0;
};

struct ExportArgs {
  std::string frames;
  std::string out;
  std::size_t m = 20;
  bool color = false;
  SubsampleParams params;
};

void add_subsample_flags(CLI::App* cmd, SubsampleParams& p) {
  cmd->add_option("--lambda", p.lambda, "Sharpness weight")->capture_default_str();
  cmd->add_option("--tau", p.tau, "Subsample-size reward")->capture_default_str();
  cmd->add_option("--rho", p.rho, "Size decay rate")->capture_default_str();
  cmd->add_option("--epsilon", p.epsilon, "Energy-decrease stop threshold")
      ->capture_default_str();
  cmd->add_option("--max-iter", p.max_iter, "Outer iteration cap")->capture_default_str();
}

int run_simulate(const SimulateArgs& a, std::ostream& out) {
  SimRanges ranges;
  std::tie(ranges.strength_min, ranges.strength_max) =
      parse_range(a.strength_range, "--strength-range");
  std::tie(ranges.blur_min, ranges.blur_max) = parse_range(a.blur_range, "--blur-range");
  ranges.iterations = a.iterations;
  ranges.patch_half = a.patch_half;
  ranges.smooth_sigma = a.smooth_sigma;
  ranges.noise_mode = parse_noise_mode(a.noise_mode);
  if (a.frames < 1) throw UsageError("--frames must be >= 1");

  const Image clean = read_png(a.input);
  const auto spec = SequenceSpec::sample(static_cast<std::size_t>(a.frames), ranges, a.seed);
  const FrameSequence seq = gen_sequence(clean, spec);

  const fs::path dir = a.out;
  fs::create_directories(dir);
  json per_frame = json::array();
  for (std::size_t i = 0; i < seq.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%04zu.png", i + 1);
    write_png(seq[i], dir / name);
    json entry = {{"index", i}, {"file", name}};
    entry.update(sim_params_json(spec.per_frame[i]));
    per_frame.push_back(std::move(entry));
  }
  const json sidecar = {{"command", "simulate"},
                        {"input", a.input},
                        {"frames", a.frames},
                        {"seed", a.seed},
                        {"strength_range", {ranges.strength_min, ranges.strength_max}},
                        {"blur_range", {ranges.blur_min, ranges.blur_max}},
                        {"per_frame", per_frame}};
  write_text_file(dir / "params.json", sidecar.dump(2) + "\n");
  logger()->info("wrote {} frames to {}", seq.size(), dir.string());
  (void)out;
  return kSuccess;
}

int run_subsample(const SubsampleArgs& a, std::ostream& out) {
  a.params.validate();
  const FrameSequence seq = read_frame_directory(a.frames);
  const SubsampleResult result = subsample(seq, a.params);
  write_png(result.reference, a.out);

  std::ostringstream selected;
  for (std::size_t k : result.indices) selected << k << '\n';
  if (!a.selected.empty()) write_text_file(a.selected, selected.str());

  json trace = json::array();
  for (double e : result.energy_trace) trace.push_back(e);
  json sidecar = {{"command", "subsample"}, {"frames", a.frames}, {"n_frames", seq.size()}};
  sidecar.update(subsample_params_json(a.params));
  sidecar["selected"] = result.indices;
  sidecar["quality"] = result.quality;
  sidecar["initial_energy"] = result.initial_energy;
  sidecar["energy_trace"] = trace;
  fs::path sidecar_path = a.out;
  sidecar_path += ".params.json";
  write_text_file(sidecar_path, sidecar.dump(2) + "\n");

  for (double e : result.energy_trace) out << format_real(e) << '\n';
  return kSuccess;
}

int run_fuse(const FuseArgs& a, std::ostream&) {
  const FrameSequence seq = read_frame_directory(a.frames);
  IndexSet indices;
  if (a.selected.empty()) {
    indices.resize(seq.size());
    std::iota(indices.begin(), indices.end(), std::size_t{0});
  } else {
    indices = read_index_file(a.selected, seq.size());
  }
  write_png(fuse(seq, indices), a.out);
  return kSuccess;
}

int run_metrics(const MetricsArgs& a, std::ostream& out) {
  const Image restored = read_png(a.restored);
  const Image truth = read_png(a.truth);
  if (!restored.same_shape(truth)) {
    throw ParameterError("restored and truth images differ in shape");
  }
  const MetricReport r = report(restored, truth);
  out << "psnr=" << format_fixed(r.psnr) << " ssim=" << format_fixed(r.ssim)
      << " sharpness=" << format_fixed(r.sharpness) << '\n';
  return kSuccess;
}

int run_dataset(const DatasetArgs& a, bool seed_given, std::ostream& out) {
  DatasetConfig cfg = DatasetConfig::from_toml(a.config);
  if (seed_given) cfg.seed = a.seed;
  const Manifest manifest = build_dataset(cfg);
  for (const auto& skipped : manifest.skipped) logger()->warn("skipped {}", skipped);

  const json sidecar = {{"command", "dataset"},
                        {"input_dir", cfg.input_dir.string()},
                        {"output_dir", cfg.output_dir.string()},
                        {"image_size", cfg.image_size},
                        {"sequences_per_image", cfg.sequences_per_image},
                        {"frames_per_sequence", cfg.frames_per_sequence},
                        {"seed", cfg.seed},
                        {"split", cfg.split},
                        {"color", cfg.color},
                        {"strength_range", {cfg.sim.strength_min, cfg.sim.strength_max}},
                        {"blur_range", {cfg.sim.blur_min, cfg.sim.blur_max}},
                        {"iterations", cfg.sim.iterations},
                        {"patch_half", cfg.sim.patch_half},
                        {"smooth_sigma", cfg.sim.smooth_sigma},
                        {"noise_mode", std::string(to_string(cfg.sim.noise_mode))},
                        {"sequences", manifest.entries.size()},
                        {"skipped", manifest.skipped}};
  write_text_file(cfg.output_dir / "dataset_params.json", sidecar.dump(2) + "\n");
  out << manifest.path.string() << '\n';
  return kSuccess;
}

int run_export(const ExportArgs& a, std::ostream&) {
  a.params.validate();
  if (a.m < 1) throw UsageError("--m must be >= 1");
  FrameSequence seq = read_frame_directory(a.frames);
  if (!a.color && seq.channels() != 1) {
    std::vector<Image> gray;
    for (const Image& f : seq) gray.push_back(to_grayscale(f));
    seq = FrameSequence(std::move(gray));
  }
  write_tensor(subsample_to_tensor(seq, a.params, a.m), a.out);
  return kSuccess;
}

}  // namespace

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err) {
  CLI::App app{"Turbulence simulation, lucky-frame subsampling and image metrics", "turbmit"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Log progress to standard error");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a turbulence-distorted sequence");
  simulate->add_option("--input", sim.input, "Clean PNG image")->required();
  simulate->add_option("--out", sim.out, "Output directory")->required();
  simulate->add_option("--frames", sim.frames, "Number of frames")->capture_default_str();
  simulate->add_option("--strength-range", sim.strength_range, "Distortion strength lo:hi")
      ->capture_default_str();
  simulate->add_option("--blur-range", sim.blur_range, "Blur constant lo:hi")
      ->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  simulate->add_option("--iterations", sim.iterations, "Random patches per field")
      ->capture_default_str();
  simulate->add_option("--patch-half", sim.patch_half, "Patch half-width N")
      ->capture_default_str();
  simulate->add_option("--smooth-sigma", sim.smooth_sigma, "Field smoothing sigma")
      ->capture_default_str();
  simulate->add_option("--noise-mode", sim.noise_mode, "per_pixel or per_patch_scalar")
      ->check(CLI::IsMember({"per_pixel", "per_patch_scalar"}))
      ->capture_default_str();

  SubsampleArgs sub;
  auto* subsample_cmd = app.add_subcommand("subsample", "Select lucky frames and fuse them");
  subsample_cmd->add_option("--frames", sub.frames, "Directory of PNG frames")->required();
  subsample_cmd->add_option("--out", sub.out, "Fused reference PNG")->required();
  subsample_cmd->add_option("--selected", sub.selected, "Write chosen indices here");
  add_subsample_flags(subsample_cmd, sub.params);

  FuseArgs fz;
  auto* fuse_cmd = app.add_subcommand("fuse", "Average a set of frames");
  fuse_cmd->add_option("--frames", fz.frames, "Directory of PNG frames")->required();
  fuse_cmd->add_option("--selected", fz.selected, "Index file (default: all frames)");
  fuse_cmd->add_option("--out", fz.out, "Output PNG")->required();

  MetricsArgs met;
  auto* metrics_cmd = app.add_subcommand("metrics", "PSNR, SSIM and sharpness");
  metrics_cmd->add_option("--restored", met.restored, "Restored PNG")->required();
  metrics_cmd->add_option("--truth", met.truth, "Ground-truth PNG")->required();

  DatasetArgs ds;
  auto* dataset_cmd = app.add_subcommand("dataset", "Build a training dataset");
  dataset_cmd->add_option("--config", ds.config, "TOML configuration")->required();
  auto* ds_seed = dataset_cmd->add_option("--seed", ds.seed, "Override the config seed");

  ExportArgs ex;
  auto* export_cmd =
      app.add_subcommand("export-tensor", "Subsample a sequence into a network input tensor");
  export_cmd->add_option("--frames", ex.frames, "Directory of PNG frames")->required();
  export_cmd->add_option("--out", ex.out, "Output tensor file")->required();
  export_cmd->add_option("--m", ex.m, "Network input arity")->capture_default_str();
  export_cmd->add_flag("--color", ex.color, "Keep RGB frames instead of luma");
  add_subsample_flags(export_cmd, ex.params);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: usage: " << msg << '\n';
    return kUsageError;
  }

  logger()->set_level(verbose ? spdlog::level::info : spdlog::level::warn);

  try {
    if (*simulate) return run_simulate(sim, out);
    if (*subsample_cmd) return run_subsample(sub, out);
    if (*fuse_cmd) return run_fuse(fz, out);
    if (*metrics_cmd) return run_metrics(met, out);
    if (*dataset_cmd) return run_dataset(ds, ds_seed->count() > 0, out);
    if (*export_cmd) return run_export(ex, out);
  } catch (const UsageError& e) {
    err << "error: usage: " << e.what() << '\n';
    return kUsageError;
  } catch (const NumericError& e) {
    err << "error: " << e.category() << ": " << e.what() << '\n';
    return kNumericError;
  } catch (const Error& e) {
    err << "error: " << e.category() << ": " << e.what() << '\n';
    return kDataError;
  } catch (const fs::filesystem_error& e) {
    err << "error: io: " << e.what() << '\n';
    return kDataError;
  }
  err << "error: usage: no subcommand given\n";
  return kUsageError;
}

}  // namespace turbmit::cli
