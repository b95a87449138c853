#include "freqseg/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "freqseg/engine.hpp"
#include "freqseg/field_math.hpp"
#include "freqseg/image_io.hpp"

namespace freqseg {
namespace {

std::vector<std::filesystem::path> image_files(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png" || ext == ".pgm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no PNG/PGM images in " + dir.string());
  return files;
}

// Bilinear sample with edge clamping.
double sample_clamped(const RealField& img, double y, double x) {
  const double my = static_cast<double>(img.height() - 1);
  const double mx = static_cast<double>(img.width() - 1);
  y = std::clamp(y, 0.0, my);
  x = std::clamp(x, 0.0, mx);
  const auto y0 = static_cast<std::size_t>(y);
  const auto x0 = static_cast<std::size_t>(x);
  const std::size_t y1 = std::min(y0 + 1, img.height() - 1);
  const std::size_t x1 = std::min(x0 + 1, img.width() - 1);
  const double fy = y - static_cast<double>(y0);
  const double fx = x - static_cast<double>(x0);
  return (img(y0, x0) * (1 - fx) + img(y0, x1) * fx) * (1 - fy) +
         (img(y1, x0) * (1 - fx) + img(y1, x1) * fx) * fy;
}

RealField shift_bilinear(const RealField& in, double fy, double fx) {
  RealField out(in.height(), in.width());
  const RealField r10 = roll(in, 1, 0);
  const RealField r01 = roll(in, 0, 1);
  const RealField r11 = roll(in, 1, 1);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = (1 - fy) * (1 - fx) * in[i] + fy * (1 - fx) * r10[i] + (1 - fy) * fx * r01[i] +
             fy * fx * r11[i];
  }
  return out;
}

double wrap(double p, double n) {
  double m = std::fmod(p, n);
  if (m < 0) m += n;
  return m >= n ? 0.0 : m;
}

double reflect(double p, double limit) {
  if (limit <= 0.0) return 0.0;
  double m = std::fmod(p, 2.0 * limit);
  if (m < 0) m += 2.0 * limit;
  return m > limit ? 2.0 * limit - m : m;
}

}  // namespace

std::string to_string(MotionMode mode) {
  return mode == MotionMode::kToroidal ? "toroidal" : "bounce";
}

std::string to_string(Placement placement) {
  return placement == Placement::kFourier ? "fourier" : "bilinear";
}

MotionMode parse_motion_mode(const std::string& text) {
  if (text == "toroidal") return MotionMode::kToroidal;
  if (text == "bounce") return MotionMode::kBounce;
  throw InvalidArgument("unknown motion mode '" + text + "' (expected toroidal|bounce)");
}

Placement parse_placement(const std::string& text) {
  if (text == "fourier") return Placement::kFourier;
  if (text == "bilinear") return Placement::kBilinear;
  throw InvalidArgument("unknown placement '" + text + "' (expected fourier|bilinear)");
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw InvalidArgument("Rng::index: empty range");
  return static_cast<std::size_t>(uniform() * static_cast<double>(n));
}

SpriteSource SpriteSource::builtin(std::size_t size) {
  SpriteSource s;
  s.glyphs = builtin_glyphs(size);
  for (std::size_t i = 0; i < s.glyphs.size(); ++i) {
    s.ids.push_back("builtin:" + std::to_string(i % 10) + "/" + std::to_string(i / 10));
  }
  return s;
}

SpriteSource SpriteSource::from_directory(const std::filesystem::path& dir) {
  SpriteSource s;
  for (const auto& file : image_files(dir)) {
    s.glyphs.push_back(read_grayscale(file));
    s.ids.push_back(file.filename().string());
  }
  return s;
}

BackgroundSource BackgroundSource::procedural() { return {}; }

BackgroundSource BackgroundSource::black() {
  BackgroundSource b;
  b.kind = Kind::kBlack;
  return b;
}

BackgroundSource BackgroundSource::from_directory(const std::filesystem::path& dir) {
  BackgroundSource b;
  b.kind = Kind::kImages;
  for (const auto& file : image_files(dir)) {
    b.images.push_back(read_grayscale(file));
    b.ids.push_back(file.filename().string());
  }
  return b;
}

std::pair<RealField, std::string> BackgroundSource::draw(std::size_t size, Rng& rng) const {
  switch (kind) {
    case Kind::kBlack:
      return {RealField(size, size), "black"};
    case Kind::kProcedural: {
      const std::uint64_t seed = rng.bits();
      return {procedural_texture(size, seed), "procedural:" + std::to_string(seed)};
    }
    case Kind::kImages:
      break;
  }
  const std::size_t pick = rng.index(images.size());
  const RealField& img = images[pick];
  const double n = static_cast<double>(size);
  const double scale =
      std::max(1.0, n / static_cast<double>(std::min(img.height(), img.width())));
  const double span_y = std::max(0.0, static_cast<double>(img.height()) * scale - n);
  const double span_x = std::max(0.0, static_cast<double>(img.width()) * scale - n);
  const double oy = std::floor(rng.uniform() * (span_y + 1.0));
  const double ox = std::floor(rng.uniform() * (span_x + 1.0));
  RealField out(size, size);
  for (std::size_t y = 0; y < size; ++y) {
    for (std::size_t x = 0; x < size; ++x) {
      out(y, x) = sample_clamped(img, (oy + static_cast<double>(y)) / scale,
                                 (ox + static_cast<double>(x)) / scale);
    }
  }
  return {clamp01(std::move(out)), ids[pick] + "@" + std::to_string(static_cast<long>(oy)) + "," +
                                       std::to_string(static_cast<long>(ox))};
}

SpriteCanvas place_sprite(const RealField& sprite, Vec2 pos, std::size_t frame_size,
                          Placement placement) {
  if (sprite.height() > frame_size || sprite.width() > frame_size) {
    throw DimensionError("place_sprite: sprite " + std::to_string(sprite.height()) + "x" +
                         std::to_string(sprite.width()) + " larger than frame " +
                         std::to_string(frame_size));
  }
  const double n = static_cast<double>(frame_size);
  const double base_y = std::floor(pos.y);
  const double base_x = std::floor(pos.x);
  const double fy = pos.y - base_y;
  const double fx = pos.x - base_x;
  const auto oy = static_cast<std::size_t>(wrap(base_y, n));
  const auto ox = static_cast<std::size_t>(wrap(base_x, n));

  SpriteCanvas out{RealField(frame_size, frame_size), RealField(frame_size, frame_size)};
  for (std::size_t y = 0; y < sprite.height(); ++y) {
    for (std::size_t x = 0; x < sprite.width(); ++x) {
      const std::size_t ty = (oy + y) % frame_size;
      const std::size_t tx = (ox + x) % frame_size;
      out.canvas(ty, tx) = sprite(y, x);
      out.mask(ty, tx) = sprite(y, x) > kSpriteMaskThreshold ? 1.0 : 0.0;
    }
  }
  if (fy == 0.0 && fx == 0.0) return out;
  if (placement == Placement::kFourier) {
    const ComplexField ramp = phase_ramp(fy, fx, frame_size, frame_size);
    out.canvas = phase_shift(out.canvas, ramp);
    out.mask = phase_shift(out.mask, ramp);
  } else {
    out.canvas = clamp01(shift_bilinear(out.canvas, fy, fx));
    out.mask = clamp01(shift_bilinear(out.mask, fy, fx));
  }
  return out;
}

Vec2 position_at(const SequenceSpec& spec, std::size_t frame_index) {
  const double t = static_cast<double>(frame_index);
  const Vec2 raw{spec.start_pos.y + t * spec.velocity.y, spec.start_pos.x + t * spec.velocity.x};
  const double n = static_cast<double>(spec.frame_size);
  if (spec.motion_mode == MotionMode::kToroidal) return {wrap(raw.y, n), wrap(raw.x, n)};
  return {reflect(raw.y, n - static_cast<double>(spec.sprite.height())),
          reflect(raw.x, n - static_cast<double>(spec.sprite.width()))};
}

RealField render_frame(const SequenceSpec& spec, std::size_t frame_index) {
  if (frame_index >= spec.num_frames) {
    throw InvalidArgument("render_frame: index " + std::to_string(frame_index) +
                          " out of range for " + std::to_string(spec.num_frames) + " frames");
  }
  require_same_shape(spec.background, RealField(spec.frame_size, spec.frame_size),
                     "render_frame background");
  const SpriteCanvas layer =
      place_sprite(spec.sprite, position_at(spec, frame_index), spec.frame_size, spec.placement);
  return clamp01(composite(layer.canvas, spec.background, layer.mask));
}

void GenerateOptions::validate() const {
  if (!is_power_of_two(frame_size)) {
    throw InvalidArgument("frame size must be a power of two, got " + std::to_string(frame_size));
  }
  if (num_frames < 1) throw InvalidArgument("need at least one frame per sequence");
  if (!(max_velocity >= 0.0) || !std::isfinite(max_velocity)) {
    throw InvalidArgument("max velocity must be finite and non-negative");
  }
  if (black_background && background_dir) {
    throw InvalidArgument("black background and a background directory are exclusive");
  }
}

SequenceSpec draw_spec(std::uint64_t base_seed, std::size_t index, const GenerateOptions& options,
                       const SpriteSource& sprites, const BackgroundSource& backgrounds) {
  if (sprites.glyphs.empty()) throw InvalidArgument("sprite source is empty");
  if (backgrounds.kind == BackgroundSource::Kind::kImages && backgrounds.images.empty()) {
    throw InvalidArgument("background source is empty");
  }
  SequenceSpec spec;
  spec.frame_size = options.frame_size;
  spec.num_frames = options.num_frames;
  spec.motion_mode = options.motion_mode;
  spec.placement = options.placement;
  spec.rng_seed = base_seed + index;
  Rng rng(spec.rng_seed);

  const std::size_t pick = rng.index(sprites.glyphs.size());
  spec.sprite = sprites.glyphs[pick];
  spec.sprite_id = sprites.ids[pick];
  if (spec.sprite.height() > spec.frame_size || spec.sprite.width() > spec.frame_size) {
    throw InvalidArgument("sprite " + spec.sprite_id + " does not fit the frame");
  }
  auto [background, background_id] = backgrounds.draw(spec.frame_size, rng);
  spec.background = std::move(background);
  spec.background_id = std::move(background_id);

  const double n = static_cast<double>(spec.frame_size);
  if (spec.motion_mode == MotionMode::kToroidal) {
    spec.start_pos = {rng.uniform(0.0, n), rng.uniform(0.0, n)};
  } else {
    spec.start_pos = {rng.uniform(0.0, n - static_cast<double>(spec.sprite.height())),
                      rng.uniform(0.0, n - static_cast<double>(spec.sprite.width()))};
  }
  spec.velocity = {rng.uniform(-options.max_velocity, options.max_velocity),
                   rng.uniform(-options.max_velocity, options.max_velocity)};
  return spec;
}

Sequence render_sequence(const SequenceSpec& spec) {
  Sequence seq;
  seq.meta.rng_seed = spec.rng_seed;
  seq.meta.start_pos = spec.start_pos;
  seq.meta.velocity = spec.velocity;
  seq.meta.motion_mode = spec.motion_mode;
  seq.meta.placement = spec.placement;
  seq.meta.sprite_id = spec.sprite_id;
  seq.meta.background_id = spec.background_id;
  for (std::size_t k = 0; k < spec.num_frames; ++k) {
    RealField frame = render_frame(spec, k);
    for (double& v : frame) v = static_cast<double>(static_cast<float>(v));
    seq.frames.push_back(std::move(frame));
    seq.meta.positions.push_back(position_at(spec, k));
  }
  return seq;
}

SequenceSet generate_set(std::size_t count, std::uint64_t base_seed,
                         const GenerateOptions& options) {
  if (count < 1) throw InvalidArgument("generate_set: count must be >= 1");
  options.validate();
  const SpriteSource sprites =
      options.sprite_dir ? SpriteSource::from_directory(*options.sprite_dir) : SpriteSource::builtin();
  const BackgroundSource backgrounds =
      options.black_background ? BackgroundSource::black()
      : options.background_dir ? BackgroundSource::from_directory(*options.background_dir)
                               : BackgroundSource::procedural();
  SequenceSet set;
  set.sequences.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    set.sequences.push_back(render_sequence(draw_spec(base_seed, i, options, sprites, backgrounds)));
  }
  return set;
}

}  // namespace freqseg
