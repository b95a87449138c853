#include <algorithm>
#include <cmath>
#include <vector>

#include "freqseg/dataset.hpp"

namespace freqseg {
namespace {

struct Point {
  double x;
  double y;
};
using Stroke = std::vector<Point>;

// Unit-square strokes (x right, y down) for digits 0-9.
const std::vector<std::vector<Stroke>>& digit_strokes() {
  static const std::vector<std::vector<Stroke>> strokes = {
      {{{.30, .20}, {.70, .20}, {.75, .50}, {.70, .80}, {.30, .80}, {.25, .50}, {.30, .20}}},
      {{{.40, .30}, {.55, .20}, {.55, .80}}, {{.40, .80}, {.70, .80}}},
      {{{.30, .30}, {.50, .20}, {.70, .30}, {.70, .45}, {.30, .80}, {.72, .80}}},
      {{{.30, .20}, {.70, .20}, {.50, .45}, {.70, .60}, {.60, .80}, {.30, .80}}},
      {{{.60, .80}, {.60, .20}, {.28, .60}, {.75, .60}}},
      {{{.70, .20}, {.35, .20}, {.30, .45}, {.65, .45}, {.70, .65}, {.60, .80}, {.30, .80}}},
      {{{.65, .20}, {.35, .45}, {.30, .70}, {.50, .80}, {.70, .65}, {.60, .50}, {.33, .55}}},
      {{{.28, .20}, {.72, .20}, {.45, .80}}},
      {{{.50, .20}, {.68, .30}, {.50, .48}, {.32, .30}, {.50, .20}},
       {{.50, .48}, {.72, .65}, {.50, .80}, {.28, .65}, {.50, .48}}},
      {{{.67, .45}, {.40, .50}, {.32, .32}, {.50, .20}, {.67, .32}, {.67, .45}, {.60, .80}}},
  };
  return strokes;
}

double segment_distance(double px, double py, Point a, Point b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((px - a.x) * dx + (py - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(px - a.x - t * dx, py - a.y - t * dy);
}

RealField draw_digit(int digit, std::size_t size, double half_width, double slant) {
  const double s = static_cast<double>(size);
  RealField img(size, size);
  for (const Stroke& stroke : digit_strokes()[static_cast<std::size_t>(digit)]) {
    for (std::size_t k = 0; k + 1 < stroke.size(); ++k) {
      const auto to_px = [&](Point p) {
        return Point{(p.x + slant * (0.5 - p.y)) * s, p.y * s};
      };
      const Point a = to_px(stroke[k]);
      const Point b = to_px(stroke[k + 1]);
      for (std::size_t y = 0; y < size; ++y) {
        for (std::size_t x = 0; x < size; ++x) {
          const double d = segment_distance(x + 0.5, y + 0.5, a, b);
          img(y, x) = std::max(img(y, x), std::clamp(half_width + 0.5 - d, 0.0, 1.0));
        }
      }
    }
  }
  return img;
}

double smoothstep(double f) { return f * f * (3.0 - 2.0 * f); }

}  // namespace

std::vector<RealField> builtin_glyphs(std::size_t size) {
  struct Style {
    double half_width;
    double slant;
  };
  const double scale = static_cast<double>(size) / 28.0;
  const Style styles[] = {{1.6, 0.0}, {1.2, 0.12}, {2.0, -0.08}};
  std::vector<RealField> out;
  for (const Style& st : styles) {
    for (int d = 0; d < 10; ++d) out.push_back(draw_digit(d, size, st.half_width * scale, st.slant));
  }
  return out;
}

RealField procedural_texture(std::size_t size, std::uint64_t seed) {
  Rng rng(seed);
  RealField img(size, size);
  double amplitude = 1.0;
  const double n = static_cast<double>(size);
  for (int octave = 0; octave < 4; ++octave) {
    const std::size_t cells = std::size_t{4} << octave;
    RealField lattice(cells + 1, cells + 1);
    for (double& v : lattice) v = rng.uniform();
    std::vector<std::size_t> cell(size);
    std::vector<double> frac(size);
    for (std::size_t i = 0; i < size; ++i) {
      const double p = static_cast<double>(i) * static_cast<double>(cells) / n;
      cell[i] = static_cast<std::size_t>(p);
      frac[i] = smoothstep(p - static_cast<double>(cell[i]));
    }
    for (std::size_t y = 0; y < size; ++y) {
      const double fy = frac[y];
      for (std::size_t x = 0; x < size; ++x) {
        const double fx = frac[x];
        const std::size_t cy = cell[y];
        const std::size_t cx = cell[x];
        const double top = lattice(cy, cx) * (1 - fx) + lattice(cy, cx + 1) * fx;
        const double bottom = lattice(cy + 1, cx) * (1 - fx) + lattice(cy + 1, cx + 1) * fx;
        img(y, x) += amplitude * (top * (1 - fy) + bottom * fy);
      }
    }
    amplitude *= 0.5;
  }
  const auto [lo, hi] = std::minmax_element(img.begin(), img.end());
  const double low = *lo;
  const double range = *hi - *lo;
  for (double& v : img) v = range > 0.0 ? (v - low) / range : 0.0;
  return img;
}

}  // namespace freqseg
