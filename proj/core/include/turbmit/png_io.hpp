#pragma once

#include <filesystem>
#include <vector>

#include "turbmit/image.hpp"

namespace turbmit {

// 8-bit PNG I/O. Samples map to [0, 1] via value / 255 on read and
// round(value * 255) with clamping on write. Gray and gray+alpha files load
// as 1 channel, everything else as RGB; alpha is discarded.
Image read_png(const std::filesystem::path& path);
void write_png(const Image& img, const std::filesystem::path& path);

// 8-bit quantization used by write_png.
std::vector<unsigned char> quantize_8bit(const Image& img);

// Frame sequences on disk are directories of PNG files; frames are ordered by
// file name.
std::vector<std::filesystem::path> list_png_files(const std::filesystem::path& dir);
FrameSequence read_frame_directory(const std::filesystem::path& dir);

}  // namespace turbmit
