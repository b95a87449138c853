#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "freqseg/field.hpp"

namespace freqseg {

struct Vec2 {
  double y = 0.0;
  double x = 0.0;
  bool operator==(const Vec2&) const = default;
};

enum class MotionMode { kToroidal, kBounce };
enum class Placement { kFourier, kBilinear };

std::string to_string(MotionMode mode);
std::string to_string(Placement placement);
MotionMode parse_motion_mode(const std::string& text);
Placement parse_placement(const std::string& text);

/// Deterministic uniform draws. std::uniform_real_distribution is
/// implementation-defined, so containers would differ across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  std::size_t index(std::size_t n);      // [0, n)
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Procedural digits 0-9 drawn as thick anti-aliased polylines, in three
/// stroke styles; glyph i shows digit i % 10.
std::vector<RealField> builtin_glyphs(std::size_t size = 28);

/// Multi-octave value noise rescaled to [0, 1].
RealField procedural_texture(std::size_t size, std::uint64_t seed);

struct SpriteSource {
  std::vector<RealField> glyphs;
  std::vector<std::string> ids;

  static SpriteSource builtin(std::size_t size = 28);
  /// Every PNG/PGM file in `dir`, sorted by file name.
  static SpriteSource from_directory(const std::filesystem::path& dir);
};

struct BackgroundSource {
  enum class Kind { kProcedural, kBlack, kImages };
  Kind kind = Kind::kProcedural;
  std::vector<RealField> images;
  std::vector<std::string> ids;

  static BackgroundSource procedural();
  static BackgroundSource black();
  static BackgroundSource from_directory(const std::filesystem::path& dir);

  /// Draws a background of `size` x `size` and its id. Image sources take a
  /// random crop, upscaling bilinearly when the image is too small.
  std::pair<RealField, std::string> draw(std::size_t size, Rng& rng) const;
};

struct SequenceSpec {
  std::size_t frame_size = 128;
  std::size_t num_frames = 20;
  RealField sprite;
  RealField background;
  Vec2 start_pos;
  Vec2 velocity;  // px / frame
  MotionMode motion_mode = MotionMode::kToroidal;
  Placement placement = Placement::kFourier;
  std::uint64_t rng_seed = 0;
  std::string sprite_id;
  std::string background_id;
};

struct SequenceMeta {
  std::uint64_t rng_seed = 0;
  Vec2 start_pos;
  Vec2 velocity;
  MotionMode motion_mode = MotionMode::kToroidal;
  Placement placement = Placement::kFourier;
  std::string sprite_id;
  std::string background_id;
  std::vector<Vec2> positions;

  bool operator==(const SequenceMeta&) const = default;
};

struct Sequence {
  std::vector<RealField> frames;
  SequenceMeta meta;

  bool operator==(const Sequence&) const = default;
};

struct SequenceSet {
  std::vector<Sequence> sequences;

  bool operator==(const SequenceSet&) const = default;
};

struct SpriteCanvas {
  RealField canvas;
  RealField mask;
};

inline constexpr double kSpriteMaskThreshold = 0.05;

/// Embeds `sprite` at floor(pos) in a zero canvas (wrapping) and applies the
/// fractional remainder by Fourier shift or bilinear interpolation.
SpriteCanvas place_sprite(const RealField& sprite, Vec2 pos, std::size_t frame_size,
                          Placement placement = Placement::kFourier);

/// Ground-truth sprite position at `frame_index`.
Vec2 position_at(const SequenceSpec& spec, std::size_t frame_index);

RealField render_frame(const SequenceSpec& spec, std::size_t frame_index);

struct GenerateOptions {
  std::size_t frame_size = 128;
  std::size_t num_frames = 20;
  double max_velocity = 4.0;
  MotionMode motion_mode = MotionMode::kToroidal;
  Placement placement = Placement::kFourier;
  std::optional<std::filesystem::path> sprite_dir;
  std::optional<std::filesystem::path> background_dir;
  bool black_background = false;

  void validate() const;
};

/// Draws the spec of sequence `index`; its RNG stream is seeded with
/// base_seed + index.
SequenceSpec draw_spec(std::uint64_t base_seed, std::size_t index, const GenerateOptions& options,
                       const SpriteSource& sprites, const BackgroundSource& backgrounds);

/// Renders a spec into stored form (frames rounded to float precision).
Sequence render_sequence(const SequenceSpec& spec);

SequenceSet generate_set(std::size_t count, std::uint64_t base_seed,
                         const GenerateOptions& options = {});

// Container: "FSQ1", u32 version, u32 count, per sequence u32 H, W, frames
// and f32 row-major frames, then u64 length + UTF-8 JSON metadata.
inline constexpr std::uint32_t kContainerVersion = 1;

std::vector<std::uint8_t> encode_container(const SequenceSet& set);
SequenceSet decode_container(std::span<const std::uint8_t> bytes);
void write_container(const SequenceSet& set, const std::filesystem::path& path);
SequenceSet read_container(const std::filesystem::path& path);

}  // namespace freqseg
