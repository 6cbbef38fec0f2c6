#include "turbmit/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "turbmit/error.hpp"
#include "turbmit/kernels.hpp"
#include "turbmit/png_io.hpp"
#include "turbmit/toml_config.hpp"

namespace turbmit {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSplitStream = 0x5350'4c49'54ULL;

std::string numbered(const char* prefix, std::size_t a) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%04zu.trnt", prefix, a);
  return buf;
}

std::string numbered(const char* prefix, std::size_t a, std::size_t b) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%04zu_%04zu.trnt", prefix, a, b);
  return buf;
}

DatasetConfig from_table(const TomlTable& t) {
  static const std::set<std::string> known = {
      "input_dir",   "output_dir",   "image_size",   "sequences_per_image",
      "frames_per_sequence", "seed", "split", "color", "strength_min", "strength_max",
      "blur_min",    "blur_max",     "iterations",   "patch_half",
      "smooth_sigma", "noise_mode"};
  for (const auto& [key, value] : t.values()) {
    if (!known.contains(key)) throw ParameterError("unknown config key '" + key + "'");
  }
  DatasetConfig cfg;
  cfg.input_dir = t.get_string("input_dir", "");
  cfg.output_dir = t.get_string("output_dir", "");
  cfg.image_size = static_cast<int>(t.get_int("image_size", cfg.image_size));
  cfg.sequences_per_image =
      static_cast<int>(t.get_int("sequences_per_image", cfg.sequences_per_image));
  cfg.frames_per_sequence =
      static_cast<int>(t.get_int("frames_per_sequence", cfg.frames_per_sequence));
  const std::int64_t seed = t.get_int("seed", 0);
  if (seed < 0) throw ParameterError("seed must be nonnegative");
  cfg.seed = static_cast<std::uint64_t>(seed);
  cfg.split = t.get_double("split", cfg.split);
  cfg.color = t.get_bool("color", cfg.color);
  cfg.sim.strength_min = t.get_double("strength_min", cfg.sim.strength_min);
  cfg.sim.strength_max = t.get_double("strength_max", cfg.sim.strength_max);
  cfg.sim.blur_min = t.get_double("blur_min", cfg.sim.blur_min);
  cfg.sim.blur_max = t.get_double("blur_max", cfg.sim.blur_max);
  cfg.sim.iterations = static_cast<int>(t.get_int("iterations", cfg.sim.iterations));
  cfg.sim.patch_half = static_cast<int>(t.get_int("patch_half", cfg.sim.patch_half));
  cfg.sim.smooth_sigma = t.get_double("smooth_sigma", cfg.sim.smooth_sigma);
  cfg.sim.noise_mode =
      parse_noise_mode(t.get_string("noise_mode", std::string(to_string(cfg.sim.noise_mode))));
  cfg.validate();
  return cfg;
}

}  // namespace

void DatasetConfig::validate() const {
  if (input_dir.empty()) throw ParameterError("input_dir is required");
  if (output_dir.empty()) throw ParameterError("output_dir is required");
  if (image_size < 1) throw ParameterError("image_size must be >= 1");
  if (sequences_per_image < 1) throw ParameterError("sequences_per_image must be >= 1");
  if (frames_per_sequence < 1) throw ParameterError("frames_per_sequence must be >= 1");
  if (!(split > 0.0 && split < 1.0)) throw ParameterError("split must lie in (0, 1)");
  if (image_size <= 2 * sim.patch_half) {
    throw ParameterError("image_size " + std::to_string(image_size) +
                         " too small for patch_half " + std::to_string(sim.patch_half));
  }
}

DatasetConfig DatasetConfig::from_toml(const fs::path& path) {
  return from_table(TomlTable::load(path));
}

DatasetConfig DatasetConfig::from_toml_string(const std::string& text) {
  return from_table(TomlTable::parse(text));
}

Manifest build_dataset(const DatasetConfig& cfg) {
  cfg.validate();
  const auto files = list_png_files(cfg.input_dir);
  if (files.empty()) throw IoError("no PNG images in " + cfg.input_dir.string());

  Manifest manifest;
  std::vector<std::pair<std::size_t, Image>> sources;
  for (const auto& file : files) {
    try {
      Image img = read_png(file);
      if (!cfg.color) img = to_grayscale(img);
      if (cfg.color && img.channels() == 1) {
        std::vector<double> rgb;
        rgb.reserve(img.size() * 3);
        for (double v : img.samples()) rgb.insert(rgb.end(), {v, v, v});
        img = Image(img.width(), img.height(), 3, std::move(rgb));
      }
      sources.emplace_back(sources.size(), resize(img, cfg.image_size, cfg.image_size));
    } catch (const IoError& e) {
      manifest.skipped.push_back(file.filename().string() + ": " + e.what());
    }
  }
  if (sources.empty()) throw IoError("no readable images in " + cfg.input_dir.string());

  fs::create_directories(cfg.output_dir);
  for (const auto& [i, clean] : sources) {
    const std::string target = numbered("target", i);
    write_tensor(stack_frames(std::span<const Image>(&clean, 1)), cfg.output_dir / target);
    const std::uint64_t image_seed = derive_seed(cfg.seed, i);
    for (int s = 0; s < cfg.sequences_per_image; ++s) {
      const auto spec = SequenceSpec::sample(static_cast<std::size_t>(cfg.frames_per_sequence),
                                             cfg.sim, derive_seed(image_seed, s));
      const FrameSequence seq = gen_sequence(clean, spec);
      const std::string name = numbered("seq", i, static_cast<std::size_t>(s));
      write_tensor(stack_frames(seq.frames()), cfg.output_dir / name);
      manifest.entries.push_back({name, target, true});
    }
  }

  const std::size_t total = manifest.entries.size();
  const auto n_train = static_cast<std::size_t>(
      std::clamp<long>(std::lround(cfg.split * static_cast<double>(total)), 0L,
                       static_cast<long>(total)));
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(derive_seed(cfg.seed, kSplitStream));
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t r = 0; r < total; ++r) manifest.entries[order[r]].train = r < n_train;

  manifest.path = cfg.output_dir / kManifestName;
  std::ostringstream text;
  for (const auto& e : manifest.entries) {
    text << e.sequence_path << '\t' << e.target_path << '\t' << (e.train ? "train" : "test")
         << '\n';
  }
  fs::path tmp = manifest.path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write manifest " + tmp.string());
    out << text.str();
  }
  fs::rename(tmp, manifest.path);
  return manifest;
}

std::vector<ManifestEntry> read_manifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest " + path.string());
  std::vector<ManifestEntry> entries;
  std::string line;
  std::uint64_t offset = 0;
  while (std::getline(in, line)) {
    const std::uint64_t line_start = offset;
    offset += line.size() + 1;
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
      throw FormatError("manifest line needs exactly three tab-separated fields", line_start);
    }
    const std::string split = line.substr(t2 + 1);
    if (split != "train" && split != "test") {
      throw FormatError("manifest split must be train or test", line_start + t2 + 1);
    }
    entries.push_back({line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1), split == "train"});
  }
  return entries;
}

std::vector<std::size_t> network_input_indices(const SubsampleResult& result,
                                               std::size_t m_cap) {
  if (m_cap < 1) throw ParameterError("m_cap must be >= 1");
  if (result.indices.empty()) throw ParameterError("subsample result selected no frames");
  std::vector<std::size_t> by_cost = result.indices;
  if (result.costs.size() > *std::max_element(by_cost.begin(), by_cost.end())) {
    std::stable_sort(by_cost.begin(), by_cost.end(), [&](std::size_t a, std::size_t b) {
      return result.costs[a] < result.costs[b];
    });
  }
  by_cost.resize(std::min(by_cost.size(), m_cap));

  std::vector<std::size_t> picked = by_cost;
  std::sort(picked.begin(), picked.end());
  for (std::size_t i = 0; picked.size() < m_cap; ++i) picked.push_back(by_cost[i % by_cost.size()]);
  return picked;
}

Tensor subsample_to_tensor(const FrameSequence& seq, const SubsampleParams& p,
                           std::size_t m_cap) {
  const SubsampleResult result = subsample(seq, p);
  std::vector<const Image*> frames;
  for (std::size_t k : network_input_indices(result, m_cap)) frames.push_back(&seq[k]);
  return stack_frames(std::span<const Image* const>(frames));
}

}  // namespace turbmit
