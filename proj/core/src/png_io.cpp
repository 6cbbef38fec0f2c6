#include "turbmit/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>

#include "turbmit/error.hpp"

namespace turbmit {

namespace fs = std::filesystem;

Image read_png(const fs::path& path) {
  png_image info;
  std::memset(&info, 0, sizeof(info));
  info.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&info, path.c_str())) {
    throw IoError("cannot read PNG " + path.string() + ": " + info.message);
  }
  const bool color = (info.format & PNG_FORMAT_FLAG_COLOR) != 0;
  info.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const int channels = color ? 3 : 1;
  std::vector<unsigned char> buffer(PNG_IMAGE_SIZE(info));
  if (!png_image_finish_read(&info, nullptr, buffer.data(), 0, nullptr)) {
    const std::string msg = info.message;
    png_image_free(&info);
    throw IoError("cannot decode PNG " + path.string() + ": " + msg);
  }
  std::vector<double> samples(buffer.size());
  std::transform(buffer.begin(), buffer.end(), samples.begin(),
                 [](unsigned char b) { return b / 255.0; });
  return Image(static_cast<int>(info.width), static_cast<int>(info.height), channels,
               std::move(samples));
}

std::vector<unsigned char> quantize_8bit(const Image& img) {
  std::vector<unsigned char> bytes(img.size());
  auto s = img.samples();
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    const double v = std::round(std::clamp(s[i], 0.0, 1.0) * 255.0);
    bytes[i] = static_cast<unsigned char>(v);
  }
  return bytes;
}

void write_png(const Image& img, const fs::path& path) {
  if (img.empty()) throw ParameterError("cannot write an empty image");
  auto bytes = quantize_8bit(img);
  png_image info;
  std::memset(&info, 0, sizeof(info));
  info.version = PNG_IMAGE_VERSION;
  info.width = static_cast<png_uint_32>(img.width());
  info.height = static_cast<png_uint_32>(img.height());
  info.format = img.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&info, path.c_str(), 0, bytes.data(), 0, nullptr)) {
    throw IoError("cannot write PNG " + path.string() + ": " + info.message);
  }
}

std::vector<fs::path> list_png_files(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (ext == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

FrameSequence read_frame_directory(const fs::path& dir) {
  auto files = list_png_files(dir);
  if (files.empty()) throw IoError("no PNG frames in " + dir.string());
  std::vector<Image> frames;
  frames.reserve(files.size());
  for (const auto& f : files) frames.push_back(read_png(f));
  return FrameSequence(std::move(frames));
}

}  // namespace turbmit
