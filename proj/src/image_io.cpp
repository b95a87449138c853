#include "freqseg/image_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

namespace freqseg {
namespace {

constexpr std::array<std::uint8_t, 8> kPngSignature = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

void put_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_u16_be(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t get_u32_be(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
         (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

void put_chunk(std::vector<std::uint8_t>& out, const char (&type)[5],
               std::span<const std::uint8_t> payload) {
  put_u32_be(out, static_cast<std::uint32_t>(payload.size()));
  const std::size_t type_pos = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), payload.begin(), payload.end());
  const uLong crc = crc32(0L, out.data() + type_pos, static_cast<uInt>(4 + payload.size()));
  put_u32_be(out, static_cast<std::uint32_t>(crc));
}

std::vector<std::uint8_t> deflate_bytes(std::span<const std::uint8_t> raw) {
  uLongf size = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> out(size);
  if (compress2(out.data(), &size, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK) {
    throw IoError("png: deflate failed");
  }
  out.resize(size);
  return out;
}

// Scanlines with filter type 0 (none).
std::vector<std::uint8_t> raw_scanlines(const RealField& image) {
  std::vector<std::uint8_t> raw;
  raw.reserve(image.height() * (image.width() + 1));
  for (std::size_t y = 0; y < image.height(); ++y) {
    raw.push_back(0);
    for (double v : image.row(y)) raw.push_back(to_gray8(v));
  }
  return raw;
}

std::vector<std::uint8_t> ihdr(const RealField& image) {
  std::vector<std::uint8_t> p;
  put_u32_be(p, static_cast<std::uint32_t>(image.width()));
  put_u32_be(p, static_cast<std::uint32_t>(image.height()));
  p.insert(p.end(), {8, 0, 0, 0, 0});  // 8-bit gray, deflate, adaptive filter, no interlace
  return p;
}

std::vector<std::uint8_t> inflate_bytes(std::span<const std::uint8_t> data, std::size_t expected) {
  std::vector<std::uint8_t> out(expected);
  uLongf size = static_cast<uLongf>(expected);
  const int rc = uncompress(out.data(), &size, data.data(), static_cast<uLong>(data.size()));
  if (rc != Z_OK || size != expected) throw FormatError("png: corrupt image data");
  return out;
}

std::uint8_t paeth(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a);
  const int pb = std::abs(p - b);
  const int pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return static_cast<std::uint8_t>(a);
  if (pb <= pc) return static_cast<std::uint8_t>(b);
  return static_cast<std::uint8_t>(c);
}

RealField read_pgm(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 2;
  const bool binary = bytes[1] == '5';
  auto next_token = [&]() -> std::string {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
    std::string tok;
    while (pos < bytes.size() && !std::isspace(bytes[pos])) tok.push_back(static_cast<char>(bytes[pos++]));
    if (tok.empty()) throw TruncationError("pgm: unexpected end of header");
    return tok;
  };
  const std::size_t w = std::stoul(next_token());
  const std::size_t h = std::stoul(next_token());
  const double maxval = std::stod(next_token());
  if (w == 0 || h == 0 || maxval <= 0 || maxval > 65535) throw FormatError("pgm: bad header");
  RealField out(h, w);
  if (binary) {
    ++pos;  // single whitespace after maxval
    const std::size_t bps = maxval > 255 ? 2 : 1;
    if (bytes.size() < pos + w * h * bps) throw TruncationError("pgm: truncated pixel data");
    for (std::size_t i = 0; i < w * h; ++i) {
      const double v = bps == 1 ? bytes[pos + i]
                                : (bytes[pos + 2 * i] << 8) | bytes[pos + 2 * i + 1];
      out[i] = v / maxval;
    }
  } else {
    for (std::size_t i = 0; i < w * h; ++i) out[i] = std::stod(next_token()) / maxval;
  }
  return clamp01(std::move(out));
}

}  // namespace

std::uint8_t to_gray8(double v) {
  return static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(v, 0.0, 1.0)));
}

std::vector<std::uint8_t> encode_png(const RealField& image) {
  std::vector<std::uint8_t> out(kPngSignature.begin(), kPngSignature.end());
  put_chunk(out, "IHDR", ihdr(image));
  put_chunk(out, "IDAT", deflate_bytes(raw_scanlines(image)));
  put_chunk(out, "IEND", {});
  return out;
}

std::vector<std::uint8_t> encode_apng(std::span<const RealField> frames, unsigned delay_ms) {
  if (frames.empty()) throw InvalidArgument("apng: no frames");
  const RealField& first = frames.front();
  std::vector<std::uint8_t> out(kPngSignature.begin(), kPngSignature.end());
  put_chunk(out, "IHDR", ihdr(first));
  std::vector<std::uint8_t> actl;
  put_u32_be(actl, static_cast<std::uint32_t>(frames.size()));
  put_u32_be(actl, 0);  // loop forever
  put_chunk(out, "acTL", actl);

  std::uint32_t sequence = 0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    require_same_shape(frames[i], first, "apng");
    std::vector<std::uint8_t> fctl;
    put_u32_be(fctl, sequence++);
    put_u32_be(fctl, static_cast<std::uint32_t>(first.width()));
    put_u32_be(fctl, static_cast<std::uint32_t>(first.height()));
    put_u32_be(fctl, 0);
    put_u32_be(fctl, 0);
    put_u16_be(fctl, static_cast<std::uint16_t>(std::min(delay_ms, 65535u)));
    put_u16_be(fctl, 1000);
    fctl.push_back(0);  // dispose: none
    fctl.push_back(0);  // blend: source
    put_chunk(out, "fcTL", fctl);
    const auto compressed = deflate_bytes(raw_scanlines(frames[i]));
    if (i == 0) {
      put_chunk(out, "IDAT", compressed);
    } else {
      std::vector<std::uint8_t> fdat;
      put_u32_be(fdat, sequence++);
      fdat.insert(fdat.end(), compressed.begin(), compressed.end());
      put_chunk(out, "fdAT", fdat);
    }
  }
  put_chunk(out, "IEND", {});
  return out;
}

RealField decode_png(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || !std::equal(kPngSignature.begin(), kPngSignature.end(), bytes.begin())) {
    throw FormatError("png: bad signature");
  }
  std::size_t pos = 8;
  std::uint32_t width = 0, height = 0;
  int depth = 0, color = 0;
  std::vector<std::uint8_t> idat;
  bool seen_header = false;
  while (true) {
    if (pos + 12 > bytes.size()) throw TruncationError("png: truncated chunk");
    const std::uint32_t len = get_u32_be(&bytes[pos]);
    const std::string type(reinterpret_cast<const char*>(&bytes[pos + 4]), 4);
    if (pos + 12 + static_cast<std::size_t>(len) > bytes.size()) {
      throw TruncationError("png: truncated chunk");
    }
    const std::uint8_t* payload = &bytes[pos + 8];
    if (type == "IHDR") {
      if (len < 13) throw FormatError("png: short IHDR");
      width = get_u32_be(payload);
      height = get_u32_be(payload + 4);
      depth = payload[8];
      color = payload[9];
      if (payload[12] != 0) throw FormatError("png: interlaced images are not supported");
      seen_header = true;
    } else if (type == "IDAT") {
      idat.insert(idat.end(), payload, payload + len);
    } else if (type == "IEND") {
      break;
    }
    pos += 12 + len;
  }
  if (!seen_header || width == 0 || height == 0) throw FormatError("png: missing header");
  int channels = 0;
  switch (color) {
    case 0: channels = 1; break;
    case 2: channels = 3; break;
    case 4: channels = 2; break;
    case 6: channels = 4; break;
    default: throw FormatError("png: unsupported color type " + std::to_string(color));
  }
  if (depth != 8 && depth != 16) throw FormatError("png: unsupported bit depth");
  const std::size_t bpp = static_cast<std::size_t>(channels * depth / 8);
  const std::size_t stride = bpp * width;
  auto raw = inflate_bytes(idat, height * (stride + 1));

  std::vector<std::uint8_t> prev(stride, 0), cur(stride);
  RealField out(height, width);
  const double maxval = depth == 8 ? 255.0 : 65535.0;
  for (std::size_t y = 0; y < height; ++y) {
    const std::uint8_t filter = raw[y * (stride + 1)];
    const std::uint8_t* line = &raw[y * (stride + 1) + 1];
    for (std::size_t i = 0; i < stride; ++i) {
      const int a = i >= bpp ? cur[i - bpp] : 0;
      const int b = prev[i];
      const int c = i >= bpp ? prev[i - bpp] : 0;
      int pred = 0;
      switch (filter) {
        case 0: pred = 0; break;
        case 1: pred = a; break;
        case 2: pred = b; break;
        case 3: pred = (a + b) / 2; break;
        case 4: pred = paeth(a, b, c); break;
        default: throw FormatError("png: bad filter type");
      }
      cur[i] = static_cast<std::uint8_t>(line[i] + pred);
    }
    for (std::size_t x = 0; x < width; ++x) {
      auto sample = [&](int ch) {
        const std::size_t o = x * bpp + static_cast<std::size_t>(ch * depth / 8);
        return depth == 8 ? double(cur[o]) : double((cur[o] << 8) | cur[o + 1]);
      };
      const double v = channels >= 3
                           ? 0.299 * sample(0) + 0.587 * sample(1) + 0.114 * sample(2)
                           : sample(0);
      out(y, x) = v / maxval;
    }
    std::swap(prev, cur);
  }
  return clamp01(std::move(out));
}

RealField read_grayscale(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  if (bytes.size() >= 8 && bytes[0] == 0x89 && bytes[1] == 'P') return decode_png(bytes);
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '2')) {
    return read_pgm(bytes);
  }
  throw FormatError("unsupported image format: " + path.string());
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

void write_png(const std::filesystem::path& path, const RealField& image) {
  write_file(path, encode_png(image));
}

void write_apng(const std::filesystem::path& path, std::span<const RealField> frames,
                unsigned delay_ms) {
  write_file(path, encode_apng(frames, delay_ms));
}

}  // namespace freqseg
