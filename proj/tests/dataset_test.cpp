#include <gtest/gtest.h>

#include <fstream>

#include "test_support.hpp"
#include "turbmit/dataset.hpp"
#include "turbmit/error.hpp"
#include "turbmit/png_io.hpp"

namespace turbmit {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

DatasetConfig small_config(const fs::path& in, const fs::path& out) {
  DatasetConfig cfg;
  cfg.input_dir = in;
  cfg.output_dir = out;
  cfg.image_size = 32;
  cfg.sequences_per_image = 2;
  cfg.frames_per_sequence = 3;
  cfg.seed = 11;
  cfg.split = 0.5;
  cfg.sim.patch_half = 4;
  cfg.sim.smooth_sigma = 1.0;
  cfg.sim.iterations = 100;
  return cfg;
}

TEST(DatasetTest, CountsAndShapes) {
  TempDir dir("dataset");
  fs::create_directories(dir.path() / "in");
  write_png(testing::test_pattern(50, 40), dir.path() / "in" / "a.png");
  auto cfg = small_config(dir.path() / "in", dir.path() / "out");
  cfg.image_size = 256;
  cfg.sim.patch_half = 32;
  cfg.sim.smooth_sigma = 8.0;
  const Manifest m = build_dataset(cfg);
  ASSERT_EQ(m.entries.size(), 2u);
  EXPECT_TRUE(m.skipped.empty());
  for (const auto& e : m.entries) {
    const Tensor seq = read_tensor(dir.path() / "out" / e.sequence_path);
    EXPECT_EQ(seq.dims, (std::vector<std::uint32_t>{3, 1, 256, 256}));
    const Tensor target = read_tensor(dir.path() / "out" / e.target_path);
    EXPECT_EQ(target.dims, (std::vector<std::uint32_t>{1, 1, 256, 256}));
  }
  EXPECT_EQ(read_manifest(m.path), m.entries);
}

TEST(DatasetTest, ColorKeepsThreeChannels) {
  TempDir dir("dataset_color");
  fs::create_directories(dir.path() / "in");
  fs::copy_file(testing::data_dir() / "astronaut48.png", dir.path() / "in" / "a.png");
  write_png(testing::test_pattern(40, 40), dir.path() / "in" / "b.png");
  auto cfg = small_config(dir.path() / "in", dir.path() / "out");
  cfg.color = true;
  cfg.sequences_per_image = 1;
  const Manifest m = build_dataset(cfg);
  ASSERT_EQ(m.entries.size(), 2u);
  for (const auto& e : m.entries) {
    EXPECT_EQ(read_tensor(dir.path() / "out" / e.sequence_path).dims[1], 3u);
  }
}

TEST(DatasetTest, SplitIsSeededAndExact) {
  TempDir dir("dataset_split");
  fs::create_directories(dir.path() / "in");
  for (int i = 0; i < 2; ++i) {
    write_png(testing::test_pattern(30 + i, 30), dir.path() / "in" / ("img" + std::to_string(i) + ".png"));
  }
  auto cfg = small_config(dir.path() / "in", dir.path() / "out");
  cfg.sequences_per_image = 5;
  cfg.frames_per_sequence = 1;
  cfg.split = 0.8;
  const Manifest m = build_dataset(cfg);
  ASSERT_EQ(m.entries.size(), 10u);
  const auto train = std::count_if(m.entries.begin(), m.entries.end(),
                                   [](const ManifestEntry& e) { return e.train; });
  EXPECT_EQ(train, 8);
}

TEST(DatasetTest, ReproducibleBytes) {
  TempDir dir("dataset_repro");
  fs::create_directories(dir.path() / "in");
  fs::copy_file(testing::data_dir() / "camera64.png", dir.path() / "in" / "camera.png");
  const auto a = build_dataset(small_config(dir.path() / "in", dir.path() / "a"));
  const auto b = build_dataset(small_config(dir.path() / "in", dir.path() / "b"));
  EXPECT_EQ(testing::read_bytes(a.path), testing::read_bytes(b.path));
  for (const auto& e : a.entries) {
    EXPECT_EQ(testing::read_bytes(dir.path() / "a" / e.sequence_path),
              testing::read_bytes(dir.path() / "b" / e.sequence_path));
  }
}

TEST(DatasetTest, SkipsUnreadableAndRejectsEmpty) {
  TempDir dir("dataset_skip");
  fs::create_directories(dir.path() / "in");
  std::ofstream(dir.path() / "in" / "broken.png") << "not a png";
  auto cfg = small_config(dir.path() / "in", dir.path() / "out");
  EXPECT_THROW(build_dataset(cfg), IoError);

  write_png(testing::test_pattern(32, 32), dir.path() / "in" / "ok.png");
  const Manifest m = build_dataset(cfg);
  EXPECT_EQ(m.entries.size(), 2u);
  ASSERT_EQ(m.skipped.size(), 1u);
  EXPECT_NE(m.skipped[0].find("broken.png"), std::string::npos);

  fs::create_directories(dir.path() / "empty");
  cfg.input_dir = dir.path() / "empty";
  EXPECT_THROW(build_dataset(cfg), IoError);
}

TEST(DatasetTest, ManifestPathsResolve) {
  TempDir dir("dataset_paths");
  fs::create_directories(dir.path() / "in");
  write_png(testing::test_pattern(32, 32), dir.path() / "in" / "x.png");
  const Manifest m = build_dataset(small_config(dir.path() / "in", dir.path() / "out"));
  for (const auto& e : read_manifest(m.path)) {
    EXPECT_NO_THROW(read_tensor(m.path.parent_path() / e.sequence_path));
    EXPECT_NO_THROW(read_tensor(m.path.parent_path() / e.target_path));
  }
}

TEST(DatasetTest, RejectsMalformedManifest) {
  TempDir dir("manifest");
  std::ofstream(dir.path() / "m.tsv") << "a\tb\ttrain\nc\td\tmaybe\n";
  try {
    read_manifest(dir.path() / "m.tsv");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.offset(), 14u);  // start of "maybe"
  }
}

TEST(DatasetConfigTest, ParsesTomlKeys) {
  const auto cfg = DatasetConfig::from_toml_string(R"(
# dataset
input_dir = "images"
output_dir = "out"
image_size = 128
sequences_per_image = 4
frames_per_sequence = 6
seed = 99
split = 0.75
color = true
patch_half = 16
)");
  EXPECT_EQ(cfg.input_dir, "images");
  EXPECT_EQ(cfg.image_size, 128);
  EXPECT_EQ(cfg.sequences_per_image, 4);
  EXPECT_EQ(cfg.frames_per_sequence, 6);
  EXPECT_EQ(cfg.seed, 99u);
  EXPECT_EQ(cfg.split, 0.75);
  EXPECT_TRUE(cfg.color);
  EXPECT_EQ(cfg.sim.patch_half, 16);
}

TEST(DatasetConfigTest, RejectsBadConfigs) {
  EXPECT_THROW(DatasetConfig::from_toml_string("input_dir = \"a\"\noutput_dir = \"b\"\nbogus = 1\n"),
               ParameterError);
  EXPECT_THROW(DatasetConfig::from_toml_string("output_dir = \"b\"\n"), ParameterError);
  EXPECT_THROW(
      DatasetConfig::from_toml_string("input_dir = \"a\"\noutput_dir = \"b\"\nsplit = 1.0\n"),
      ParameterError);
  EXPECT_THROW(DatasetConfig::from_toml_string(
                   "input_dir = \"a\"\noutput_dir = \"b\"\nsequences_per_image = 0\n"),
               ParameterError);
}

TEST(NetworkInputTest, PadsCyclicallyByCost) {
  SubsampleResult r;
  r.indices = {2, 5, 7};
  r.costs = {9, 9, 0.3, 9, 9, 0.1, 9, 0.2};
  EXPECT_EQ(network_input_indices(r, 3), (std::vector<std::size_t>{2, 5, 7}));
  EXPECT_EQ(network_input_indices(r, 2), (std::vector<std::size_t>{5, 7}));
  EXPECT_EQ(network_input_indices(r, 7), (std::vector<std::size_t>{2, 5, 7, 5, 7, 2, 5}));
  r.indices = {4};
  EXPECT_EQ(network_input_indices(r, 4), (std::vector<std::size_t>{4, 4, 4, 4}));
  EXPECT_THROW(network_input_indices(r, 0), ParameterError);
}

TEST(NetworkInputTest, SingleSelectedFrameRepeats) {
  const Image img = testing::test_pattern(16, 16);
  const Tensor t = subsample_to_tensor(FrameSequence({img}), {}, 4);
  EXPECT_EQ(t.dims, (std::vector<std::uint32_t>{4, 1, 16, 16}));
  const auto frames = unstack_frames(t);
  for (const auto& f : frames) EXPECT_EQ(f, frames[0]);
}

TEST(NetworkInputTest, ExcludesRejectedSevereFrames) {
  const Image clean = read_png(testing::data_dir() / "camera64.png");
  const auto mixed = testing::mixed_quality_sequence(clean, 3);
  const SubsampleResult r = subsample(mixed.frames, {});
  EXPECT_EQ(r.indices, mixed.mild);
  const Tensor t = subsample_to_tensor(mixed.frames, {}, 20);
  ASSERT_EQ(t.dims[0], 20u);
  const auto frames = unstack_frames(t);
  for (const auto& f : frames) {
    bool from_mild = false;
    for (std::size_t k : mixed.mild) {
      from_mild |= testing::max_abs_difference(f, mixed.frames[k]) < 1e-6;
    }
    EXPECT_TRUE(from_mild);
  }
  // The first |J| frames are the selection in ascending index order.
  for (std::size_t i = 0; i < mixed.mild.size(); ++i) {
    EXPECT_LT(testing::max_abs_difference(frames[i], mixed.frames[mixed.mild[i]]), 1e-6);
  }
}

}  // namespace
}  // namespace turbmit
