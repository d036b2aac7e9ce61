// SPDX-License-Identifier: Apache-2.0
#include "wtc/io.hpp"

#include "wtc/error.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>

namespace wtc {

namespace {

constexpr std::uint32_t kMaxOrder = 64;

class Writer {
 public:
  void magic(std::string_view m) { out_.append(m); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  void magic(std::string_view m) {
    need(m.size(), "magic");
    if (bytes_.substr(pos_, m.size()) != m)
      throw FormatError("bad magic, expected \"" + std::string(m) + "\"", pos_);
    pos_ += m.size();
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{byte(pos_ + i)} << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64(const char* what) {
    need(8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{byte(pos_ + i)} << (8 * i);
    pos_ += 8;
    return v;
  }
  double f64(const char* what) { return std::bit_cast<double>(u64(what)); }

  // Checks that `count` items of `size` bytes remain, before allocating.
  void need_items(std::uint64_t count, std::uint64_t size, const char* what) {
    if (count > (std::numeric_limits<std::uint64_t>::max)() / size)
      throw FormatError(std::string(what) + ": element count overflows", pos_);
    need(count * size, what);
  }
  std::uint64_t pos() const noexcept { return pos_; }
  void finish() const {
    if (pos_ != bytes_.size())
      throw FormatError(std::to_string(bytes_.size() - pos_) + " trailing bytes", pos_);
  }

 private:
  unsigned char byte(std::uint64_t at) const { return static_cast<unsigned char>(bytes_[at]); }
  void need(std::uint64_t n, const char* what) const {
    const std::uint64_t have = bytes_.size() - pos_;
    if (have < n)
      throw FormatError(std::string("truncated ") + what + ": missing " + std::to_string(n - have) +
                            " bytes",
                        pos_);
  }

  std::string_view bytes_;
  std::uint64_t pos_ = 0;
};

void write_shape(Writer& w, const Shape& shape) {
  w.u32(static_cast<std::uint32_t>(shape.order()));
  for (Index d : shape.dims()) w.u64(d);
}

Shape read_shape(Reader& r) {
  const std::uint64_t at = r.pos();
  const std::uint32_t n = r.u32("order");
  if (n == 0 || n > kMaxOrder) throw FormatError("invalid tensor order " + std::to_string(n), at);
  r.need_items(n, 8, "dims");
  std::vector<Index> dims(n);
  for (auto& d : dims) d = r.u64("dims");
  try {
    return Shape(std::move(dims));
  } catch (const ArgumentError& e) {
    throw FormatError(std::string("invalid dims: ") + e.what(), at);
  }
}

}  // namespace

std::string encode_tensor(const DenseTensor& t) {
  Writer w;
  w.magic("TEN1");
  write_shape(w, t.shape());
  for (double v : t.values()) w.f64(v);
  return w.take();
}

DenseTensor decode_tensor(std::string_view bytes) {
  Reader r(bytes);
  r.magic("TEN1");
  Shape shape = read_shape(r);
  r.need_items(shape.numel(), 8, "values");
  std::vector<double> values(shape.numel());
  for (auto& v : values) v = r.f64("values");
  r.finish();
  return DenseTensor(std::move(shape), std::move(values));
}

std::string encode_pattern(const SamplingPattern& p) {
  Writer w;
  w.magic("PAT1");
  write_shape(w, p.shape());
  w.u64(p.count());
  for (const auto& idx : p.multi_indices())
    for (Index i : idx) w.u64(i);
  return w.take();
}

SamplingPattern decode_pattern(std::string_view bytes) {
  Reader r(bytes);
  r.magic("PAT1");
  Shape shape = read_shape(r);
  const std::uint64_t count = r.u64("count");
  r.need_items(count, 8 * shape.order(), "indices");
  std::vector<Index> offsets;
  offsets.reserve(count);
  for (std::uint64_t e = 0; e < count; ++e) {
    const std::uint64_t at = r.pos();
    Index off = 0;
    for (Index k = 0; k < shape.order(); ++k) {
      const std::uint64_t i = r.u64("indices");
      if (i >= shape[k]) throw FormatError("index out of bounds for mode " + std::to_string(k), at);
      off += i * shape.stride(k);
    }
    offsets.push_back(off);
  }
  r.finish();
  try {
    return SamplingPattern(std::move(shape), std::move(offsets));
  } catch (const ArgumentError& e) {
    throw FormatError(std::string("invalid pattern: ") + e.what(), r.pos());
  }
}

std::string encode_weight(const Rank1Weight& w) {
  Writer out;
  out.magic("W8T1");
  out.u32(static_cast<std::uint32_t>(w.factors().size()));
  for (const Vector& f : w.factors()) {
    out.u64(static_cast<std::uint64_t>(f.size()));
    for (Eigen::Index i = 0; i < f.size(); ++i) out.f64(f(i));
  }
  out.f64(w.floor());
  return out.take();
}

Rank1Weight decode_weight(std::string_view bytes) {
  Reader r(bytes);
  r.magic("W8T1");
  const std::uint64_t at = r.pos();
  const std::uint32_t n = r.u32("order");
  if (n == 0 || n > kMaxOrder) throw FormatError("invalid weight order " + std::to_string(n), at);
  std::vector<Vector> factors;
  for (std::uint32_t k = 0; k < n; ++k) {
    const std::uint64_t len = r.u64("factor length");
    r.need_items(len, 8, "factor");
    Vector f(static_cast<Eigen::Index>(len));
    for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = r.f64("factor");
    factors.push_back(std::move(f));
  }
  const double floor = r.f64("floor");
  r.finish();
  try {
    return Rank1Weight(std::move(factors), floor);
  } catch (const std::exception& e) {
    throw FormatError(std::string("invalid weight: ") + e.what(), at);
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ArgumentError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ArgumentError("write failed for " + path.string());
}

void save_tensor(const std::filesystem::path& path, const DenseTensor& t) {
  write_file(path, encode_tensor(t));
}
DenseTensor load_tensor(const std::filesystem::path& path) { return decode_tensor(read_file(path)); }

void save_pattern(const std::filesystem::path& path, const SamplingPattern& p) {
  write_file(path, encode_pattern(p));
}
SamplingPattern load_pattern(const std::filesystem::path& path) {
  return decode_pattern(read_file(path));
}

void save_weight(const std::filesystem::path& path, const Rank1Weight& w) {
  write_file(path, encode_weight(w));
}
Rank1Weight load_weight(const std::filesystem::path& path) { return decode_weight(read_file(path)); }

namespace {

// Reads one whitespace-delimited header integer, skipping '#' comments.
std::uint64_t ppm_header_int(std::string_view bytes, std::uint64_t& pos) {
  while (pos < bytes.size()) {
    const char c = bytes[pos];
    if (c == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos;
    } else {
      break;
    }
  }
  if (pos >= bytes.size()) throw FormatError("truncated PPM header", pos);
  const std::uint64_t start = pos;
  std::uint64_t v = 0;
  while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
    v = v * 10 + static_cast<std::uint64_t>(bytes[pos] - '0');
    if (v > (1u << 24)) throw FormatError("PPM header value too large", start);
    ++pos;
  }
  if (pos == start) throw FormatError("expected an integer in PPM header", start);
  return v;
}

}  // namespace

DenseTensor decode_ppm(std::string_view bytes) {
  if (bytes.size() < 2) throw FormatError("truncated PPM: missing " + std::to_string(2 - bytes.size()) + " bytes", bytes.size());
  if (bytes.substr(0, 2) != "P6") throw FormatError("not a binary PPM (P6)", 0);
  std::uint64_t pos = 2;
  const std::uint64_t width = ppm_header_int(bytes, pos);
  const std::uint64_t height = ppm_header_int(bytes, pos);
  const std::uint64_t maxval_at = pos;
  const std::uint64_t maxval = ppm_header_int(bytes, pos);
  if (width == 0 || height == 0) throw FormatError("PPM has zero size", maxval_at);
  if (maxval != 255) throw FormatError("only maxval 255 is supported", maxval_at);
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos])))
    throw FormatError("expected whitespace after PPM header", pos);
  ++pos;
  const std::uint64_t need = width * height * 3;
  const std::uint64_t have = bytes.size() - pos;
  if (have < need)
    throw FormatError("truncated PPM pixel data: missing " + std::to_string(need - have) + " bytes",
                      bytes.size());
  DenseTensor img(Shape({height, width, 3}));
  for (Index y = 0; y < height; ++y)
    for (Index x = 0; x < width; ++x)
      for (Index c = 0; c < 3; ++c) {
        const auto b = static_cast<unsigned char>(bytes[pos + (y * width + x) * 3 + c]);
        img[y + height * (x + width * c)] = static_cast<double>(b) / 255.0;
      }
  return img;
}

DenseTensor load_ppm_stack(const VideoTensorSource& src) {
  if (src.downscale < 1) throw ArgumentError("downscale factor must be at least 1");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(src.directory))
    if (entry.is_regular_file() && entry.path().extension() == ".ppm") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (src.frames > 0) {
    if (files.size() < src.frames)
      throw ArgumentError("requested " + std::to_string(src.frames) + " frames, found " +
                          std::to_string(files.size()));
    files.resize(src.frames);
  }
  if (files.empty()) throw ArgumentError("no .ppm frames in " + src.directory.string());

  const Index f = src.downscale;
  Index h = 0, w = 0;
  std::vector<double> data;
  for (const auto& file : files) {
    const DenseTensor img = decode_ppm(read_file(file));
    if (h == 0) {
      h = img.shape()[0];
      w = img.shape()[1];
      if (h / f == 0 || w / f == 0) throw ArgumentError("downscale factor exceeds frame size");
    } else if (img.shape()[0] != h || img.shape()[1] != w) {
      throw ArgumentError("frame " + file.filename().string() + " has different dimensions");
    }
    const Index oh = h / f, ow = w / f;
    const double scale = 1.0 / static_cast<double>(f * f);
    for (Index c = 0; c < 3; ++c)
      for (Index x = 0; x < ow; ++x)
        for (Index y = 0; y < oh; ++y) {
          double acc = 0.0;
          for (Index dx = 0; dx < f; ++dx)
            for (Index dy = 0; dy < f; ++dy) acc += img.at({y * f + dy, x * f + dx, c});
          data.push_back(acc * scale);
        }
  }
  return DenseTensor(Shape({h / f, w / f, 3, files.size()}), std::move(data));
}

}  // namespace wtc
