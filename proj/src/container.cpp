#include <bit>
#include <cstring>
#include <string>

#include "json.hpp"

#include "freqseg/dataset.hpp"
#include "freqseg/image_io.hpp"

namespace freqseg {
namespace {

using nlohmann::json;

constexpr char kMagic[4] = {'F', 'S', 'Q', '1'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::span<const std::uint8_t> take(std::size_t n, const char* what) {
    if (n > bytes_.size() - pos_) {
      throw TruncationError(std::string("container truncated while reading ") + what);
    }
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  std::uint32_t u32(const char* what) {
    const auto b = take(4, what);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  std::uint64_t u64(const char* what) {
    const auto b = take(8, what);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

json vec_json(Vec2 v) { return json::array({v.y, v.x}); }

Vec2 vec_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw FormatError("container metadata: expected [y, x]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json meta_json(const SequenceMeta& m) {
  json positions = json::array();
  for (const Vec2& p : m.positions) positions.push_back(vec_json(p));
  return {{"rng_seed", m.rng_seed},
          {"start_pos", vec_json(m.start_pos)},
          {"velocity", vec_json(m.velocity)},
          {"motion_mode", to_string(m.motion_mode)},
          {"placement", to_string(m.placement)},
          {"sprite_id", m.sprite_id},
          {"background_id", m.background_id},
          {"positions", std::move(positions)}};
}

SequenceMeta meta_from(const json& j) {
  SequenceMeta m;
  m.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  m.start_pos = vec_from(j.at("start_pos"));
  m.velocity = vec_from(j.at("velocity"));
  m.motion_mode = parse_motion_mode(j.at("motion_mode").get<std::string>());
  m.placement = j.contains("placement") ? parse_placement(j.at("placement").get<std::string>())
                                        : Placement::kFourier;
  m.sprite_id = j.at("sprite_id").get<std::string>();
  m.background_id = j.at("background_id").get<std::string>();
  for (const json& p : j.at("positions")) m.positions.push_back(vec_from(p));
  return m;
}

}  // namespace

std::vector<std::uint8_t> encode_container(const SequenceSet& set) {
  std::vector<std::uint8_t> out(kMagic, kMagic + 4);
  put_u32(out, kContainerVersion);
  put_u32(out, static_cast<std::uint32_t>(set.sequences.size()));
  json meta = json::array();
  for (const Sequence& seq : set.sequences) {
    const std::size_t h = seq.frames.empty() ? 0 : seq.frames.front().height();
    const std::size_t w = seq.frames.empty() ? 0 : seq.frames.front().width();
    put_u32(out, static_cast<std::uint32_t>(h));
    put_u32(out, static_cast<std::uint32_t>(w));
    put_u32(out, static_cast<std::uint32_t>(seq.frames.size()));
    for (const RealField& frame : seq.frames) {
      if (frame.height() != h || frame.width() != w) {
        throw DimensionError("container: frames of one sequence must share a shape");
      }
      for (double v : frame) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    }
    meta.push_back(meta_json(seq.meta));
  }
  const std::string text = meta.dump();
  put_u64(out, text.size());
  out.insert(out.end(), text.begin(), text.end());
  return out;
}

SequenceSet decode_container(std::span<const std::uint8_t> bytes) {
  Reader in(bytes);
  const auto magic = in.take(4, "magic");
  if (std::memcmp(magic.data(), kMagic, 4) != 0) throw FormatError("container: bad magic");
  const std::uint32_t version = in.u32("version");
  if (version != kContainerVersion) {
    throw FormatError("container: unsupported version " + std::to_string(version));
  }
  const std::uint32_t count = in.u32("sequence count");
  SequenceSet set;
  for (std::uint32_t s = 0; s < count; ++s) {
    const std::size_t h = in.u32("height");
    const std::size_t w = in.u32("width");
    const std::size_t n = in.u32("frame count");
    if (h != 0 && w != 0 && n > in.remaining() / (4 * h * w)) {
      throw TruncationError("container truncated inside sequence " + std::to_string(s));
    }
    Sequence seq;
    seq.frames.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
      RealField frame(h, w);
      const auto raw = in.take(4 * h * w, "frame data");
      for (std::size_t i = 0; i < h * w; ++i) {
        std::uint32_t bits = 0;
        for (int b = 3; b >= 0; --b) bits = (bits << 8) | raw[4 * i + b];
        frame[i] = static_cast<double>(std::bit_cast<float>(bits));
      }
      seq.frames.push_back(std::move(frame));
    }
    set.sequences.push_back(std::move(seq));
  }
  const std::uint64_t length = in.u64("metadata length");
  if (length > in.remaining()) throw TruncationError("container truncated inside metadata");
  const auto text = in.take(static_cast<std::size_t>(length), "metadata");
  json meta;
  try {
    meta = json::parse(text.begin(), text.end());
    if (!meta.is_array() || meta.size() != count) {
      throw FormatError("container: metadata does not describe " + std::to_string(count) +
                        " sequences");
    }
    for (std::uint32_t s = 0; s < count; ++s) set.sequences[s].meta = meta_from(meta[s]);
  } catch (const json::exception& e) {
    throw FormatError(std::string("container: bad metadata: ") + e.what());
  }
  if (in.remaining() != 0) throw FormatError("container: trailing bytes after metadata");
  return set;
}

void write_container(const SequenceSet& set, const std::filesystem::path& path) {
  write_file(path, encode_container(set));
}

SequenceSet read_container(const std::filesystem::path& path) {
  return decode_container(read_file(path));
}

}  // namespace freqseg
