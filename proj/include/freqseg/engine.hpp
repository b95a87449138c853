#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "freqseg/field.hpp"

namespace freqseg {

/// Decaying motion-blend weights: beta_k = max(floor, start * decay^k).
std::vector<double> decaying_schedule(std::size_t length = 20, double start = 0.9,
                                      double decay = 0.7, double floor = 0.2);

/// Tunables for the prediction-correction engine.
///
/// Correction gains are expressed in units of H*W/2, the inverse of the
/// mean-squared-loss scale, so a gain of 1 moves a pixel by the full
/// prediction error times its chain-rule factor. A small alpha gain keeps the
/// mask from growing over background residue.
struct EngineConfig {
  double gain_fg = 1.0;
  double gain_bg = 1.0;
  double gain_alpha = 0.25;
  // beta_k for motion averaging, indexed by step; the last entry repeats.
  std::vector<double> gain_t_schedule = decaying_schedule();
  // lambda: weight of the alpha-derived phase delta against the fg-derived one.
  double alpha_fg_mix = 0.5;
  double dog_sigma_narrow = 1.0;
  double dog_sigma_wide = 3.0;
  double dog_weight = 0.25;
  int phase_smooth_radius = 2;
  double spectral_floor = 1e-6;
  std::size_t seed_frames = 10;
  std::size_t predict_frames = 10;
  bool enable_phase_filter = true;
  bool enable_dog_filter = true;
  // Estimate the initial motion field from the first three seeds.
  bool three_frame_motion_init = true;
  // Debug mode: verify state invariants after every step.
  bool check_invariants = false;

  void validate() const;
  double blend_weight(std::size_t step) const;
};

struct ModelState {
  RealField fg;
  RealField bg;
  RealField alpha;
  ComplexField t;
  ComplexField prev_fg_spec;
  ComplexField prev_alpha_spec;
  std::size_t step_index = 0;

  std::size_t height() const noexcept { return fg.height(); }
  std::size_t width() const noexcept { return fg.width(); }
};

struct Prediction {
  RealField fg;
  RealField alpha;
  RealField frame;
};

struct StepReport {
  RealField predicted_frame;
  double loss_mse = 0.0;
  ModelState state_snapshot;
};

struct JointDelta {
  ComplexField delta;
  Mask valid;  // valid in at least one source
};

/// Throws NumericalError if fg/bg/alpha leave [0,1], t leaves the unit
/// circle by more than 1e-6, or the fields disagree in shape.
void check_state_invariants(const ModelState& state);

/// Frame-differencing start: bg = f0, alpha from |f1 - f0|, fg = f1 * alpha,
/// identity motion.
ModelState init_state(const RealField& f0, const RealField& f1, const EngineConfig& cfg);

/// Motion field from two consecutive alpha proxies |f1 - f0| and |f2 - f1|.
/// The proxies are translates of each other under constant motion, so their
/// phase delta is the motion ramp.
ComplexField estimate_initial_motion(const RealField& f0, const RealField& f1,
                                     const RealField& f2, const EngineConfig& cfg);

RealField composite(const RealField& fg, const RealField& bg, const RealField& alpha);

Prediction predict_step(const ModelState& state);

ModelState correction_step(const ModelState& state, const Prediction& prediction,
                           const RealField& observed, const EngineConfig& cfg);

/// Gradients of mean((composite(fg, bg, alpha) - observed)^2) with respect to
/// each input field.
struct CompositeGradient {
  RealField fg;
  RealField bg;
  RealField alpha;
};
CompositeGradient composite_mse_gradient(const RealField& fg, const RealField& bg,
                                         const RealField& alpha, const RealField& observed);

/// Measures the phase advance of the corrected fg/alpha against the
/// previous spectra stored in `state`, and replaces those spectra.
JointDelta estimate_phase_delta_joint(ModelState& state, const RealField& fg_new,
                                      const RealField& alpha_new, const EngineConfig& cfg);

ModelState motion_update(const ModelState& state, const ComplexField& measured,
                         const Mask& valid, const EngineConfig& cfg);

std::pair<ModelState, StepReport> engine_step(const ModelState& state,
                                              const RealField& observed,
                                              const EngineConfig& cfg);

/// One closed-loop step: advance fg/alpha by t, then filter. Returns the new
/// state and the predicted frame.
std::pair<ModelState, RealField> advance_step(const ModelState& state, const EngineConfig& cfg);

enum class RolloutPhase { kInit, kSeed, kPredict };

using RolloutObserver = std::function<void(RolloutPhase, const StepReport&)>;

/// Seeds the engine on `seeds` and predicts `horizon` frames closed-loop.
std::vector<RealField> rollout(std::span<const RealField> seeds, std::size_t horizon,
                               const EngineConfig& cfg,
                               const RolloutObserver& observer = nullptr);

struct Translation {
  double dy = 0.0;
  double dx = 0.0;
};

/// Reads a global translation out of a motion field: peak of the real
/// correlation surface ifft2(t) with sinc-peak subpixel refinement.
Translation decode_translation(const ComplexField& t);

}  // namespace freqseg
