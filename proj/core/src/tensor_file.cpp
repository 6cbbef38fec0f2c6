#include "turbmit/tensor_file.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>
#include <tuple>

#include "turbmit/error.hpp"

namespace turbmit {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[4] = {'T', 'R', 'N', 'T'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[offset + i]) << (8 * i);
  return v;
}

void require(std::span<const std::uint8_t> bytes, std::size_t offset, std::size_t count,
             const char* what) {
  if (bytes.size() < offset + count) {
    throw FormatError(std::string("truncated tensor: missing ") + what, bytes.size());
  }
}

}  // namespace

std::uint64_t Tensor::element_count() const noexcept {
  if (dims.empty()) return 0;
  std::uint64_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

std::vector<std::uint8_t> encode_tensor(const Tensor& t) {
  if (t.dims.empty()) throw ParameterError("tensor rank must be >= 1");
  if (t.element_count() != t.data.size()) {
    throw ParameterError("tensor data length " + std::to_string(t.data.size()) +
                         " does not match dims product " + std::to_string(t.element_count()));
  }
  std::vector<std::uint8_t> out;
  out.reserve(12 + 4 * t.dims.size() + 4 * t.data.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_u32(out, kTensorVersion);
  put_u32(out, static_cast<std::uint32_t>(t.dims.size()));
  for (auto d : t.dims) put_u32(out, d);
  for (float f : t.data) {
    if (!std::isfinite(f)) throw ParameterError("tensor payload contains non-finite values");
    put_u32(out, std::bit_cast<std::uint32_t>(f));
  }
  return out;
}

Tensor decode_tensor(std::span<const std::uint8_t> bytes) {
  require(bytes, 0, 4, "magic");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw FormatError("bad tensor magic", 0);
  require(bytes, 4, 4, "version");
  const std::uint32_t version = get_u32(bytes, 4);
  if (version != kTensorVersion) {
    throw FormatError("unsupported tensor version " + std::to_string(version), 4);
  }
  require(bytes, 8, 4, "rank");
  const std::uint32_t rank = get_u32(bytes, 8);
  if (rank == 0) throw FormatError("tensor rank must be >= 1", 8);
  require(bytes, 12, std::size_t{4} * rank, "dims");

  Tensor t;
  t.dims.resize(rank);
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < rank; ++i) {
    t.dims[i] = get_u32(bytes, 12 + 4 * i);
    if (t.dims[i] != 0 && count > std::numeric_limits<std::uint64_t>::max() / 4 / t.dims[i]) {
      throw FormatError("tensor dims overflow", 12 + 4 * i);
    }
    count *= t.dims[i];
  }
  const std::size_t header = 12 + std::size_t{4} * rank;
  const std::uint64_t payload = count * 4;
  if (bytes.size() - header < payload) {
    throw FormatError("truncated tensor payload: expected " + std::to_string(payload) +
                          " bytes",
                      bytes.size());
  }
  if (bytes.size() - header > payload) {
    throw FormatError("trailing bytes after tensor payload", header + payload);
  }
  t.data.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::size_t offset = header + 4 * i;
    t.data[i] = std::bit_cast<float>(get_u32(bytes, offset));
    if (!std::isfinite(t.data[i])) throw FormatError("non-finite tensor value", offset);
  }
  return t;
}

void write_tensor(const Tensor& t, const fs::path& path) {
  const auto bytes = encode_tensor(t);
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string());
}

Tensor read_tensor(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open tensor file " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_tensor(bytes);
}

Tensor stack_frames(std::span<const Image* const> frames) {
  if (frames.empty()) throw ParameterError("cannot stack zero frames");
  const Image& first = *frames.front();
  for (const Image* f : frames) {
    if (!f->same_shape(first)) throw ParameterError("stacked frames differ in shape");
  }
  const auto c = static_cast<std::uint32_t>(first.channels());
  const auto h = static_cast<std::uint32_t>(first.height());
  const auto w = static_cast<std::uint32_t>(first.width());
  Tensor t;
  t.dims = {static_cast<std::uint32_t>(frames.size()), c, h, w};
  t.data.resize(t.element_count());
  std::size_t out = 0;
  for (const Image* f : frames) {
    for (std::uint32_t ch = 0; ch < c; ++ch) {
      for (std::uint32_t y = 0; y < h; ++y) {
        for (std::uint32_t x = 0; x < w; ++x) {
          t.data[out++] = static_cast<float>(
              f->at(static_cast<int>(x), static_cast<int>(y), static_cast<int>(ch)));
        }
      }
    }
  }
  return t;
}

Tensor stack_frames(std::span<const Image> frames) {
  std::vector<const Image*> ptrs;
  ptrs.reserve(frames.size());
  for (const Image& f : frames) ptrs.push_back(&f);
  return stack_frames(std::span<const Image* const>(ptrs));
}

std::vector<Image> unstack_frames(const Tensor& t) {
  if (t.dims.size() != 4) throw ParameterError("frame stacks are rank-4 tensors");
  if (t.element_count() != t.data.size()) throw ParameterError("tensor dims/data mismatch");
  const auto [n, c, h, w] = std::tuple{t.dims[0], t.dims[1], t.dims[2], t.dims[3]};
  std::vector<Image> frames;
  frames.reserve(n);
  std::size_t in = 0;
  for (std::uint32_t k = 0; k < n; ++k) {
    Image img(static_cast<int>(w), static_cast<int>(h), static_cast<int>(c));
    for (std::uint32_t ch = 0; ch < c; ++ch) {
      for (std::uint32_t y = 0; y < h; ++y) {
        for (std::uint32_t x = 0; x < w; ++x) {
          img.at(static_cast<int>(x), static_cast<int>(y), static_cast<int>(ch)) = t.data[in++];
        }
      }
    }
    frames.push_back(std::move(img));
  }
  return frames;
}

}  // namespace turbmit
