#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "doctest.h"
#include "freqseg/dataset.hpp"
#include "freqseg/field_math.hpp"
#include "freqseg/image_io.hpp"
#include "support/oracles.hpp"

using namespace freqseg;
using namespace freqseg::testing;

namespace {

RealField test_sprite() {
  RealField s(6, 5);
  for (std::size_t y = 1; y < 5; ++y)
    for (std::size_t x = 1; x < 4; ++x) s(y, x) = 0.2 + 0.1 * static_cast<double>(y + x);
  return s;
}

SequenceSpec black_spec(Vec2 start, Vec2 velocity, MotionMode mode) {
  SequenceSpec spec;
  spec.frame_size = 32;
  spec.num_frames = 12;
  spec.sprite = test_sprite();
  spec.background = RealField(32, 32);
  spec.start_pos = start;
  spec.velocity = velocity;
  spec.motion_mode = mode;
  return spec;
}

// Reflection of p into [0, limit] by repeated folding.
double fold(double p, double limit) {
  while (p < 0.0 || p > limit) p = p < 0.0 ? -p : 2.0 * limit - p;
  return p;
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("freqseg_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("integer placement is a direct embedding") {
  const RealField sprite = test_sprite();
  const SpriteCanvas layer = place_sprite(sprite, {10.0, 20.0}, 32);
  for (std::size_t y = 0; y < 32; ++y)
    for (std::size_t x = 0; x < 32; ++x) {
      const bool inside = y >= 10 && y < 16 && x >= 20 && x < 25;
      const double expected = inside ? sprite(y - 10, x - 20) : 0.0;
      CHECK(layer.canvas(y, x) == expected);
      CHECK(layer.mask(y, x) == (expected > kSpriteMaskThreshold ? 1.0 : 0.0));
    }
  // Wrapping across the border.
  const SpriteCanvas wrapped = place_sprite(sprite, {30.0, 30.0}, 32);
  CHECK(wrapped.canvas(0, 0) == sprite(2, 2));
}

TEST_CASE("fractional Fourier placement matches direct shifted evaluation") {
  const RealField sprite = test_sprite();
  const SpriteCanvas integer = place_sprite(sprite, {10.0, 20.0}, 32);
  const SpriteCanvas half = place_sprite(sprite, {10.5, 20.0}, 32, Placement::kFourier);
  CHECK(max_abs_diff(half.canvas, clamp01(direct_fractional_shift(integer.canvas, 0.5, 0.0))) < 1e-9);
  CHECK(max_abs_diff(half.mask, clamp01(direct_fractional_shift(integer.mask, 0.5, 0.0))) < 1e-9);
}

TEST_CASE("fractional bilinear placement") {
  const RealField sprite = test_sprite();
  const SpriteCanvas integer = place_sprite(sprite, {10.0, 20.0}, 32);
  const SpriteCanvas half = place_sprite(sprite, {10.25, 20.5}, 32, Placement::kBilinear);
  for (std::size_t y = 0; y < 32; ++y)
    for (std::size_t x = 0; x < 32; ++x) {
      const auto at = [&](long dy, long dx) { return integer.canvas((y + 32 - dy) % 32, (x + 32 - dx) % 32); };
      const double expected = 0.75 * 0.5 * at(0, 0) + 0.25 * 0.5 * at(1, 0) +
                              0.75 * 0.5 * at(0, 1) + 0.25 * 0.5 * at(1, 1);
      CHECK(half.canvas(y, x) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("placement edge cases") {
  const SpriteCanvas empty = place_sprite(RealField(4, 4), {3.3, 1.7}, 16);
  CHECK(max_abs_diff(empty.canvas, RealField(16, 16)) == 0.0);
  CHECK(max_abs_diff(empty.mask, RealField(16, 16)) == 0.0);
  CHECK_THROWS_AS(place_sprite(RealField(40, 4), {0, 0}, 32), DimensionError);
}

TEST_CASE("toroidal integer motion on black is a roll") {
  const SequenceSpec spec = black_spec({3.0, 5.0}, {1.0, 2.0}, MotionMode::kToroidal);
  const RealField first = render_frame(spec, 0);
  for (std::size_t t = 1; t < spec.num_frames; ++t) {
    CHECK(max_abs_diff(render_frame(spec, t), roll(first, static_cast<long>(t), 2 * static_cast<long>(t))) == 0.0);
  }
  CHECK_THROWS_AS(render_frame(spec, spec.num_frames), InvalidArgument);
}

TEST_CASE("zero velocity gives identical frames") {
  const SequenceSpec spec = black_spec({7.5, 9.25}, {0.0, 0.0}, MotionMode::kToroidal);
  const RealField first = render_frame(spec, 0);
  for (std::size_t t = 1; t < spec.num_frames; ++t) CHECK(render_frame(spec, t) == first);
}

TEST_CASE("bounce motion folds back at the border") {
  const SequenceSpec spec = black_spec({24.0, 1.0}, {2.5, -1.5}, MotionMode::kBounce);
  const double limit_y = 32.0 - 6.0, limit_x = 32.0 - 5.0;
  for (std::size_t t = 0; t < spec.num_frames; ++t) {
    const Vec2 p = position_at(spec, t);
    CHECK(p.y == doctest::Approx(fold(24.0 + 2.5 * t, limit_y)));
    CHECK(p.x == doctest::Approx(fold(1.0 - 1.5 * t, limit_x)));
    CHECK(p.y >= 0.0);
    CHECK(p.y <= limit_y);
    CHECK(p.x >= 0.0);
    CHECK(p.x <= limit_x);
  }
  CHECK(position_at(spec, 2).y == doctest::Approx(23.0));  // 29 reflected off 26
}

TEST_CASE("generated sets are reproducible") {
  GenerateOptions options;
  options.frame_size = 32;
  options.num_frames = 5;
  const SequenceSet a = generate_set(4, 42, options);
  const SequenceSet b = generate_set(4, 42, options);
  CHECK(a == b);
  const SequenceSet c = generate_set(4, 43, options);
  CHECK_FALSE(a == c);
  // Sequence i of seed s is sequence i-1 of seed s+1.
  CHECK(a.sequences[1] == c.sequences[0]);
}

TEST_CASE("generated sequences are well formed") {
  GenerateOptions options;
  options.frame_size = 64;
  options.num_frames = 6;
  const SequenceSet set = generate_set(6, 7, options);
  REQUIRE(set.sequences.size() == 6);
  for (const Sequence& s : set.sequences) {
    REQUIRE(s.frames.size() == 6);
    REQUIRE(s.meta.positions.size() == 6);
    for (const RealField& f : s.frames) {
      CHECK(f.height() == 64);
      CHECK(f.width() == 64);
      CHECK(all_in_unit_interval(f));
    }
    CHECK(std::abs(s.meta.velocity.y) <= 4.0);
    CHECK(std::abs(s.meta.velocity.x) <= 4.0);
    for (std::size_t t = 0; t < 6; ++t) {
      const double ey = std::fmod(s.meta.start_pos.y + t * s.meta.velocity.y + 640.0, 64.0);
      const double ex = std::fmod(s.meta.start_pos.x + t * s.meta.velocity.x + 640.0, 64.0);
      CHECK(s.meta.positions[t].y == doctest::Approx(ey).epsilon(1e-9));
      CHECK(s.meta.positions[t].x == doctest::Approx(ex).epsilon(1e-9));
    }
    CHECK(s.meta.motion_mode == MotionMode::kToroidal);
    CHECK(s.meta.sprite_id.rfind("builtin:", 0) == 0);
  }
}

TEST_CASE("velocity draws cover the range") {
  GenerateOptions options;
  options.frame_size = 32;
  options.num_frames = 1;
  const SequenceSet set = generate_set(100, 1, options);
  std::set<int> bins_y, bins_x;
  for (const Sequence& s : set.sequences) {
    bins_y.insert(static_cast<int>(std::floor(s.meta.velocity.y)));
    bins_x.insert(static_cast<int>(std::floor(s.meta.velocity.x)));
  }
  CHECK(bins_y.size() == 8);
  CHECK(bins_x.size() == 8);
}

TEST_CASE("generate options validation") {
  GenerateOptions options;
  options.frame_size = 100;
  CHECK_THROWS_AS(options.validate(), InvalidArgument);
  options.frame_size = 64;
  options.max_velocity = -1;
  CHECK_THROWS_AS(options.validate(), InvalidArgument);
  CHECK_THROWS_AS(parse_motion_mode("spiral"), InvalidArgument);
  CHECK(parse_placement("bilinear") == Placement::kBilinear);
  CHECK(to_string(MotionMode::kBounce) == "bounce");
}

TEST_CASE("builtin glyphs and textures") {
  const auto glyphs = builtin_glyphs(28);
  CHECK(glyphs.size() == 30);
  for (const RealField& g : glyphs) {
    CHECK(g.height() == 28);
    CHECK(all_in_unit_interval(g));
    CHECK(*std::max_element(g.begin(), g.end()) > 0.5);
  }
  const RealField tex = procedural_texture(64, 9);
  CHECK(all_in_unit_interval(tex));
  CHECK(*std::min_element(tex.begin(), tex.end()) == doctest::Approx(0.0));
  CHECK(*std::max_element(tex.begin(), tex.end()) == doctest::Approx(1.0));
  CHECK(procedural_texture(64, 9) == tex);
}

TEST_CASE("container round trip") {
  GenerateOptions options;
  options.frame_size = 32;
  options.num_frames = 3;
  options.motion_mode = MotionMode::kBounce;
  const SequenceSet set = generate_set(3, 5, options);
  const auto bytes = encode_container(set);
  CHECK(decode_container(bytes) == set);
  CHECK(decode_container(bytes).sequences[0].meta.motion_mode == MotionMode::kBounce);

  const auto path = scratch_dir("container") / "set.fsq";
  write_container(set, path);
  CHECK(read_container(path) == set);
  CHECK_THROWS_AS(read_container(path.parent_path() / "missing.fsq"), IoError);
}

TEST_CASE("container corruption is detected") {
  GenerateOptions options;
  options.frame_size = 32;
  options.num_frames = 2;
  const auto bytes = encode_container(generate_set(1, 3, options));

  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(decode_container(bad_magic), FormatError);

  auto bad_version = bytes;
  bad_version[4] = 99;
  CHECK_THROWS_AS(decode_container(bad_version), FormatError);

  auto trailing = bytes;
  trailing.push_back(0);
  CHECK_THROWS_AS(decode_container(trailing), FormatError);

  for (std::size_t n = 0; n < bytes.size(); ++n) {
    CHECK_THROWS_AS(decode_container(std::span(bytes).first(n)), TruncationError);
  }
}

TEST_CASE("PNG round trip quantizes to 8 bits") {
  TestRng rng(4);
  const RealField img = random_field(13, 7, rng);
  const RealField back = decode_png(encode_png(img));
  REQUIRE(back.height() == 13);
  REQUIRE(back.width() == 7);
  for (std::size_t i = 0; i < img.size(); ++i) {
    CHECK(back[i] == doctest::Approx(to_gray8(img[i]) / 255.0).epsilon(1e-12));
  }
  CHECK(to_gray8(-1.0) == 0);
  CHECK(to_gray8(2.0) == 255);
  CHECK(to_gray8(0.5) == 128);
}

TEST_CASE("APNG declares every frame") {
  const std::vector<RealField> frames(3, RealField(8, 8, 0.5));
  const auto bytes = encode_apng(frames, 100);
  const std::string text(bytes.begin(), bytes.end());
  CHECK(text.find("acTL") != std::string::npos);
  std::size_t fctl = 0;
  for (std::size_t p = text.find("fcTL"); p != std::string::npos; p = text.find("fcTL", p + 1)) ++fctl;
  CHECK(fctl == 3);
  // Default image of an APNG is the first frame.
  CHECK(decode_png(bytes) == decode_png(encode_png(frames[0])));
  const std::vector<RealField> mixed{RealField(8, 8), RealField(4, 8)};
  CHECK_THROWS_AS(encode_apng(mixed, 100), DimensionError);
}

TEST_CASE("sprite and background directories") {
  const auto dir = scratch_dir("sprites");
  write_png(dir / "b.png", RealField(10, 10, 0.8));
  write_png(dir / "a.png", RealField(10, 10, 0.2));
  const std::string pgm = "P2\n2 2\n255\n0 255\n255 0\n";
  write_file(dir / "c.pgm", std::span(reinterpret_cast<const std::uint8_t*>(pgm.data()), pgm.size()));

  const SpriteSource sprites = SpriteSource::from_directory(dir);
  REQUIRE(sprites.glyphs.size() == 3);
  CHECK(sprites.glyphs[0](0, 0) == doctest::Approx(to_gray8(0.2) / 255.0));
  CHECK(sprites.glyphs[2](0, 1) == 1.0);

  const BackgroundSource backgrounds = BackgroundSource::from_directory(dir);
  Rng rng(1);
  const auto [bg, id] = backgrounds.draw(32, rng);
  CHECK(bg.height() == 32);
  CHECK(all_in_unit_interval(bg));
  CHECK_FALSE(id.empty());

  CHECK_THROWS(SpriteSource::from_directory(dir / "nope"));
}
