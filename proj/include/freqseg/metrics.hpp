#pragma once

#include <span>
#include <string>
#include <vector>

#include "freqseg/field.hpp"

namespace freqseg {

double l1(const RealField& a, const RealField& b);
double mse(const RealField& a, const RealField& b);

struct SsimParams {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;
};

/// Single-scale SSIM averaged over all window positions that lie fully
/// inside the image (no padding).
double ssim(const RealField& a, const RealField& b, const SsimParams& params = {});

struct FrameScores {
  double l1 = 0.0;
  double mse = 0.0;
  double ssim = 0.0;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

struct EvalReport {
  std::vector<FrameScores> per_sequence;  // averaged over predicted frames
  MeanStd l1;
  MeanStd mse;
  MeanStd ssim;
};

FrameScores score_sequence(std::span<const RealField> predictions,
                           std::span<const RealField> truths, std::size_t horizon);

/// Scores the first `horizon` frames of each prediction against the matching
/// ground truth: per-frame -> per-sequence mean -> corpus mean/std.
EvalReport evaluate(std::span<const std::vector<RealField>> predictions,
                    std::span<const std::vector<RealField>> truths, std::size_t horizon);

EvalReport aggregate(std::vector<FrameScores> per_sequence);

}  // namespace freqseg
