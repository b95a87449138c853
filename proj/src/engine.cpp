#include "freqseg/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "freqseg/field_math.hpp"
#include "freqseg/filters.hpp"
#include "freqseg/metrics.hpp"

namespace freqseg {
namespace {

double loss_scale(const RealField& f) {
  return 0.5 * static_cast<double>(f.height() * f.width());
}

RealField abs_difference(const RealField& a, const RealField& b) {
  require_same_shape(a, b, "abs_difference");
  RealField out(a.height(), a.width());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::abs(a[i] - b[i]);
  return out;
}

ModelState apply_filters(ModelState s, const EngineConfig& cfg) {
  if (cfg.enable_dog_filter) {
    s.alpha = dog_filter(s.alpha, cfg.dog_sigma_narrow, cfg.dog_sigma_wide, cfg.dog_weight);
  }
  if (cfg.enable_phase_filter) s.t = phase_smooth(s.t, cfg.phase_smooth_radius);
  return s;
}

}  // namespace

std::vector<double> decaying_schedule(std::size_t length, double start, double decay,
                                      double floor) {
  std::vector<double> out(std::max<std::size_t>(length, 1));
  double v = start;
  for (double& b : out) {
    b = std::max(floor, v);
    v *= decay;
  }
  return out;
}

void EngineConfig::validate() const {
  if (!(gain_fg > 0.0) || !(gain_bg > 0.0) || !(gain_alpha > 0.0)) {
    throw InvalidArgument("engine config: gains must be positive");
  }
  if (gain_t_schedule.empty()) throw InvalidArgument("engine config: empty blend schedule");
  for (double b : gain_t_schedule) {
    if (!(b >= 0.0 && b <= 1.0)) {
      throw InvalidArgument("engine config: blend weights must lie in [0,1]");
    }
  }
  if (!(alpha_fg_mix >= 0.0 && alpha_fg_mix <= 1.0)) {
    throw InvalidArgument("engine config: alpha_fg_mix must lie in [0,1]");
  }
  if (!(dog_sigma_narrow > 0.0) || !(dog_sigma_wide > dog_sigma_narrow)) {
    throw InvalidArgument("engine config: need 0 < dog_sigma_narrow < dog_sigma_wide");
  }
  if (!(dog_weight >= 0.0)) throw InvalidArgument("engine config: dog_weight must be >= 0");
  if (phase_smooth_radius < 1) {
    throw InvalidArgument("engine config: phase_smooth_radius must be >= 1");
  }
  if (!(spectral_floor >= 0.0)) {
    throw InvalidArgument("engine config: spectral_floor must be >= 0");
  }
  if (seed_frames < 2) throw InvalidArgument("engine config: need at least 2 seed frames");
}

double EngineConfig::blend_weight(std::size_t step) const {
  return gain_t_schedule[std::min(step, gain_t_schedule.size() - 1)];
}

void check_state_invariants(const ModelState& s) {
  if (!s.fg.same_shape(s.bg) || !s.fg.same_shape(s.alpha) || !s.fg.same_shape(s.t)) {
    throw NumericalError("state invariant: fields disagree in shape");
  }
  if (!all_in_unit_interval(s.fg)) throw NumericalError("state invariant: fg outside [0,1]");
  if (!all_in_unit_interval(s.bg)) throw NumericalError("state invariant: bg outside [0,1]");
  if (!all_in_unit_interval(s.alpha)) {
    throw NumericalError("state invariant: alpha outside [0,1]");
  }
  const double dev = max_unit_deviation(s.t);
  if (dev > kUnitTolerance) {
    throw NumericalError("state invariant: |t| deviates from 1 by " + std::to_string(dev));
  }
}

ModelState init_state(const RealField& f0, const RealField& f1, const EngineConfig& cfg) {
  require_same_shape(f0, f1, "init_state");
  cfg.validate();
  RealField alpha = box_blur(abs_difference(f1, f0), 1);
  const double peak = *std::max_element(alpha.begin(), alpha.end());
  if (peak > 0.0) {
    for (double& v : alpha) v /= peak;
  }
  alpha = clamp01(std::move(alpha));

  ModelState s;
  s.fg = RealField(f1.height(), f1.width());
  for (std::size_t i = 0; i < f1.size(); ++i) s.fg[i] = f1[i] * alpha[i];
  s.bg = f0;
  s.alpha = std::move(alpha);
  s.t = identity_motion(f0.height(), f0.width());
  s.prev_fg_spec = fft2(s.fg);
  s.prev_alpha_spec = fft2(s.alpha);
  return s;
}

ComplexField estimate_initial_motion(const RealField& f0, const RealField& f1,
                                     const RealField& f2, const EngineConfig& cfg) {
  require_same_shape(f0, f1, "estimate_initial_motion");
  require_same_shape(f1, f2, "estimate_initial_motion");
  const RealField earlier = box_blur(abs_difference(f1, f0), 1);
  const RealField later = box_blur(abs_difference(f2, f1), 1);
  // Invalid bins already carry 1+0i.
  ComplexField t = phase_delta(fft2(later), fft2(earlier), cfg.spectral_floor).delta;
  if (cfg.enable_phase_filter) t = phase_smooth(t, cfg.phase_smooth_radius);
  return t;
}

RealField composite(const RealField& fg, const RealField& bg, const RealField& alpha) {
  require_same_shape(fg, bg, "composite");
  require_same_shape(fg, alpha, "composite");
  RealField out(fg.height(), fg.width());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = alpha[i] * fg[i] + (1.0 - alpha[i]) * bg[i];
  }
  return out;
}

Prediction predict_step(const ModelState& state) {
  Prediction p;
  p.fg = phase_shift(state.fg, state.t);
  p.alpha = phase_shift(state.alpha, state.t);
  p.frame = composite(p.fg, state.bg, p.alpha);
  return p;
}

CompositeGradient composite_mse_gradient(const RealField& fg, const RealField& bg,
                                         const RealField& alpha, const RealField& observed) {
  const RealField predicted = composite(fg, bg, alpha);
  require_same_shape(predicted, observed, "composite_mse_gradient");
  const double scale = 2.0 / static_cast<double>(predicted.size());
  CompositeGradient g{RealField(fg.height(), fg.width()), RealField(fg.height(), fg.width()),
                      RealField(fg.height(), fg.width())};
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double e = scale * (predicted[i] - observed[i]);
    g.fg[i] = e * alpha[i];
    g.bg[i] = e * (1.0 - alpha[i]);
    g.alpha[i] = e * (fg[i] - bg[i]);
  }
  return g;
}

ModelState correction_step(const ModelState& state, const Prediction& prediction,
                           const RealField& observed, const EngineConfig& cfg) {
  require_same_shape(prediction.frame, observed, "correction_step");
  require_same_shape(prediction.fg, state.bg, "correction_step");
  require_same_shape(prediction.alpha, state.bg, "correction_step");
  const double k = loss_scale(observed);
  const double step_fg = cfg.gain_fg * k;
  const double step_bg = cfg.gain_bg * k;
  const double step_alpha = cfg.gain_alpha * k;
  const double scale = 2.0 / static_cast<double>(observed.size());

  ModelState next = state;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = scale * (prediction.frame[i] - observed[i]);
    const double a = prediction.alpha[i];
    const double f = prediction.fg[i];
    const double b = state.bg[i];
    next.fg[i] = std::clamp(f - step_fg * e * a, 0.0, 1.0);
    next.bg[i] = std::clamp(b - step_bg * e * (1.0 - a), 0.0, 1.0);
    next.alpha[i] = std::clamp(a - step_alpha * e * (f - b), 0.0, 1.0);
  }
  ++next.step_index;
  return next;
}

JointDelta estimate_phase_delta_joint(ModelState& state, const RealField& fg_new,
                                      const RealField& alpha_new, const EngineConfig& cfg) {
  require_same_shape(fg_new, state.t, "estimate_phase_delta_joint");
  require_same_shape(alpha_new, state.t, "estimate_phase_delta_joint");
  ComplexField fg_spec = fft2(fg_new);
  ComplexField alpha_spec = fft2(alpha_new);
  const PhaseDelta from_alpha = phase_delta(alpha_spec, state.prev_alpha_spec, cfg.spectral_floor);
  const PhaseDelta from_fg = phase_delta(fg_spec, state.prev_fg_spec, cfg.spectral_floor);

  const double lambda = cfg.alpha_fg_mix;
  ComplexField mixed(state.t.height(), state.t.width());
  Mask valid(state.t.height(), state.t.width(), 0);
  for (std::size_t i = 0; i < mixed.size(); ++i) {
    const bool va = from_alpha.valid[i] != 0;
    const bool vf = from_fg.valid[i] != 0;
    if (va && vf) {
      mixed[i] = lambda * from_alpha.delta[i] + (1.0 - lambda) * from_fg.delta[i];
    } else if (va) {
      mixed[i] = from_alpha.delta[i];
    } else if (vf) {
      mixed[i] = from_fg.delta[i];
    } else {
      mixed[i] = state.t[i];
    }
    valid[i] = (va || vf) ? 1 : 0;
  }
  state.prev_fg_spec = std::move(fg_spec);
  state.prev_alpha_spec = std::move(alpha_spec);
  return {unit_renormalize(mixed, state.t), std::move(valid)};
}

ModelState motion_update(const ModelState& state, const ComplexField& measured,
                         const Mask& valid, const EngineConfig& cfg) {
  require_same_shape(measured, state.t, "motion_update");
  require_same_shape(valid, state.t, "motion_update");
  const double beta = cfg.blend_weight(state.step_index);
  ComplexField blended = state.t;
  for (std::size_t i = 0; i < blended.size(); ++i) {
    if (valid[i]) blended[i] = (1.0 - beta) * state.t[i] + beta * measured[i];
  }
  ModelState next = state;
  next.t = unit_renormalize(blended, state.t);
  return next;
}

std::pair<ModelState, StepReport> engine_step(const ModelState& state,
                                              const RealField& observed,
                                              const EngineConfig& cfg) {
  const Prediction prediction = predict_step(state);
  ModelState corrected = correction_step(state, prediction, observed, cfg);
  const JointDelta measured =
      estimate_phase_delta_joint(corrected, corrected.fg, corrected.alpha, cfg);
  ModelState next =
      apply_filters(motion_update(corrected, measured.delta, measured.valid, cfg), cfg);
  if (cfg.check_invariants) check_state_invariants(next);

  StepReport report{prediction.frame, mse(prediction.frame, observed), next};
  return {std::move(next), std::move(report)};
}

std::pair<ModelState, RealField> advance_step(const ModelState& state, const EngineConfig& cfg) {
  Prediction prediction = predict_step(state);
  ModelState next = state;
  next.fg = std::move(prediction.fg);
  next.alpha = std::move(prediction.alpha);
  ++next.step_index;
  next = apply_filters(std::move(next), cfg);
  if (cfg.check_invariants) check_state_invariants(next);
  return {std::move(next), std::move(prediction.frame)};
}

std::vector<RealField> rollout(std::span<const RealField> seeds, std::size_t horizon,
                               const EngineConfig& cfg, const RolloutObserver& observer) {
  if (seeds.size() < 2) throw InvalidArgument("rollout: need at least 2 seed frames");
  ModelState state = init_state(seeds[0], seeds[1], cfg);
  if (cfg.three_frame_motion_init && seeds.size() >= 3) {
    state.t = estimate_initial_motion(seeds[0], seeds[1], seeds[2], cfg);
  }
  if (cfg.check_invariants) check_state_invariants(state);
  if (observer) {
    RealField frame = composite(state.fg, state.bg, state.alpha);
    const double loss = mse(frame, seeds[1]);
    observer(RolloutPhase::kInit, StepReport{std::move(frame), loss, state});
  }
  for (std::size_t k = 2; k < seeds.size(); ++k) {
    auto [next, report] = engine_step(state, seeds[k], cfg);
    state = std::move(next);
    if (observer) observer(RolloutPhase::kSeed, report);
  }
  std::vector<RealField> predictions;
  predictions.reserve(horizon);
  for (std::size_t h = 0; h < horizon; ++h) {
    auto [next, frame] = advance_step(state, cfg);
    state = std::move(next);
    if (observer) observer(RolloutPhase::kPredict, StepReport{frame, 0.0, state});
    predictions.push_back(std::move(frame));
  }
  return predictions;
}

namespace {

// Sinc-peak subpixel offset from the peak sample and its two neighbours.
double refine_peak(double before, double peak, double after) {
  if (after >= before) return after > 0.0 ? after / (after + peak) : 0.0;
  return before > 0.0 ? -before / (before + peak) : 0.0;
}

double to_signed(double shift, std::size_t n) {
  const double half = 0.5 * static_cast<double>(n);
  return shift > half ? shift - static_cast<double>(n) : shift;
}

}  // namespace

Translation decode_translation(const ComplexField& t) {
  require_unit_magnitude(t, "decode_translation");
  const ComplexField surface = ifft2_complex(t);
  const std::size_t h = t.height();
  const std::size_t w = t.width();
  std::size_t best = 0;
  for (std::size_t i = 1; i < surface.size(); ++i) {
    if (surface[i].real() > surface[best].real()) best = i;
  }
  const std::size_t py = best / w;
  const std::size_t px = best % w;
  const auto at = [&](std::size_t y, std::size_t x) { return surface(y % h, x % w).real(); };
  const double peak = at(py, px);
  const double dy = static_cast<double>(py) + refine_peak(at(py + h - 1, px), peak, at(py + 1, px));
  const double dx = static_cast<double>(px) + refine_peak(at(py, px + w - 1), peak, at(py, px + 1));
  return {to_signed(dy, h), to_signed(dx, w)};
}

}  // namespace freqseg
