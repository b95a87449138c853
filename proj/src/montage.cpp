#include "freqseg/montage.hpp"

#include <cmath>
#include <numbers>

namespace freqseg {
namespace {

constexpr std::size_t kGap = 2;
constexpr double kGapValue = 0.5;

void draw_line(RealField& img, double y0, double x0, double y1, double x1) {
  const double len = std::hypot(y1 - y0, x1 - x0);
  const int steps = std::max(1, static_cast<int>(std::ceil(len * 4.0)));
  for (int i = 0; i <= steps; ++i) {
    const double s = static_cast<double>(i) / steps;
    const long y = std::lround(y0 + s * (y1 - y0));
    const long x = std::lround(x0 + s * (x1 - x0));
    if (y >= 0 && x >= 0 && y < static_cast<long>(img.height()) &&
        x < static_cast<long>(img.width())) {
      img(static_cast<std::size_t>(y), static_cast<std::size_t>(x)) = 1.0;
    }
  }
}

}  // namespace

RealField motion_panel(const ComplexField& t, double arrow_scale) {
  const std::size_t h = t.height();
  const std::size_t w = t.width();
  RealField panel(h, w);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const Complex z = t((y + h / 2) % h, (x + w / 2) % w);
      panel(y, x) = 0.15 + 0.45 * (std::arg(z) + std::numbers::pi) / (2.0 * std::numbers::pi);
    }
  }
  const Translation d = decode_translation(t);
  const double cy = static_cast<double>(h) / 2.0;
  const double cx = static_cast<double>(w) / 2.0;
  const double ty = cy + arrow_scale * d.dy;
  const double tx = cx + arrow_scale * d.dx;
  draw_line(panel, cy, cx, ty, tx);
  const double len = std::hypot(ty - cy, tx - cx);
  if (len > 1.0) {
    const double angle = std::atan2(ty - cy, tx - cx);
    const double head = std::min(6.0, 0.4 * len);
    for (double side : {-1.0, 1.0}) {
      const double a = angle + std::numbers::pi + side * 0.5;
      draw_line(panel, ty, tx, ty + head * std::sin(a), tx + head * std::cos(a));
    }
  }
  return panel;
}

RealField montage_row(const StepReport& step, const RealField* observed) {
  const ModelState& s = step.state_snapshot;
  const std::size_t h = s.height();
  const std::size_t w = s.width();
  const RealField blank(h, w);
  const RealField motion = motion_panel(s.t);
  const RealField* panels[] = {observed ? observed : &blank, &step.predicted_frame,
                               &s.fg, &s.bg, &s.alpha, &motion};
  const std::size_t count = std::size(panels);
  RealField row(h, count * w + (count - 1) * kGap, kGapValue);
  for (std::size_t p = 0; p < count; ++p) {
    require_same_shape(*panels[p], blank, "montage_row");
    const std::size_t x0 = p * (w + kGap);
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) row(y, x0 + x) = (*panels[p])(y, x);
    }
  }
  return row;
}

}  // namespace freqseg
