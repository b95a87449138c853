#include "freqseg/metrics.hpp"

#include <cmath>
#include <string>


namespace freqseg {
namespace {

// 'Valid' separable correlation: output is (H - n + 1) x (W - n + 1).
RealField filter_valid(const RealField& x, const std::vector<double>& taps) {
  const std::size_t n = taps.size();
  const std::size_t oh = x.height() - n + 1;
  const std::size_t ow = x.width() - n + 1;
  RealField tmp(x.height(), ow);
  for (std::size_t y = 0; y < x.height(); ++y) {
    for (std::size_t c = 0; c < ow; ++c) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += taps[k] * x(y, c + k);
      tmp(y, c) = acc;
    }
  }
  RealField out(oh, ow);
  for (std::size_t y = 0; y < oh; ++y) {
    for (std::size_t c = 0; c < ow; ++c) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += taps[k] * tmp(y + k, c);
      out(y, c) = acc;
    }
  }
  return out;
}

RealField product(const RealField& a, const RealField& b) {
  RealField out(a.height(), a.width());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

std::vector<double> ssim_taps(const SsimParams& p) {
  const int r = p.window / 2;
  std::vector<double> taps(static_cast<std::size_t>(p.window));
  double sum = 0.0;
  for (int i = 0; i < p.window; ++i) {
    const double d = i - r;
    taps[i] = std::exp(-0.5 * d * d / (p.sigma * p.sigma));
    sum += taps[i];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

MeanStd mean_std(const std::vector<FrameScores>& rows, double FrameScores::*field) {
  MeanStd out;
  if (rows.empty()) return out;
  for (const auto& r : rows) out.mean += r.*field;
  out.mean /= static_cast<double>(rows.size());
  double var = 0.0;
  for (const auto& r : rows) var += (r.*field - out.mean) * (r.*field - out.mean);
  out.std = std::sqrt(var / static_cast<double>(rows.size()));
  return out;
}

}  // namespace

double l1(const RealField& a, const RealField& b) {
  require_same_shape(a, b, "l1");
  if (a.empty()) throw DimensionError("l1: empty fields");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

double mse(const RealField& a, const RealField& b) {
  require_same_shape(a, b, "mse");
  if (a.empty()) throw DimensionError("mse: empty fields");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

double ssim(const RealField& a, const RealField& b, const SsimParams& p) {
  require_same_shape(a, b, "ssim");
  if (p.window < 1 || p.window % 2 == 0) throw InvalidArgument("ssim: window must be odd");
  const auto n = static_cast<std::size_t>(p.window);
  if (a.height() < n || a.width() < n) {
    throw DimensionError("ssim: input " + std::to_string(a.height()) + "x" +
                         std::to_string(a.width()) + " smaller than the " +
                         std::to_string(n) + "x" + std::to_string(n) + " window");
  }
  const auto taps = ssim_taps(p);
  const RealField mu_a = filter_valid(a, taps);
  const RealField mu_b = filter_valid(b, taps);
  const RealField aa = filter_valid(product(a, a), taps);
  const RealField bb = filter_valid(product(b, b), taps);
  const RealField ab = filter_valid(product(a, b), taps);
  const double c1 = (p.k1 * p.dynamic_range) * (p.k1 * p.dynamic_range);
  const double c2 = (p.k2 * p.dynamic_range) * (p.k2 * p.dynamic_range);

  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a[i];
    const double mb = mu_b[i];
    const double va = aa[i] - ma * ma;
    const double vb = bb[i] - mb * mb;
    const double cov = ab[i] - ma * mb;
    total += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) /
             ((ma * ma + mb * mb + c1) * (va + vb + c2));
  }
  return total / static_cast<double>(mu_a.size());
}

FrameScores score_sequence(std::span<const RealField> predictions,
                           std::span<const RealField> truths, std::size_t horizon) {
  if (horizon == 0) throw InvalidArgument("evaluate: horizon must be positive");
  if (predictions.size() < horizon || truths.size() < horizon) {
    throw InvalidArgument("evaluate: sequence shorter than the horizon");
  }
  FrameScores s;
  for (std::size_t k = 0; k < horizon; ++k) {
    s.l1 += l1(predictions[k], truths[k]);
    s.mse += mse(predictions[k], truths[k]);
    s.ssim += ssim(predictions[k], truths[k]);
  }
  const double n = static_cast<double>(horizon);
  s.l1 /= n;
  s.mse /= n;
  s.ssim /= n;
  return s;
}

EvalReport aggregate(std::vector<FrameScores> per_sequence) {
  EvalReport r;
  r.l1 = mean_std(per_sequence, &FrameScores::l1);
  r.mse = mean_std(per_sequence, &FrameScores::mse);
  r.ssim = mean_std(per_sequence, &FrameScores::ssim);
  r.per_sequence = std::move(per_sequence);
  return r;
}

EvalReport evaluate(std::span<const std::vector<RealField>> predictions,
                    std::span<const std::vector<RealField>> truths, std::size_t horizon) {
  if (predictions.size() != truths.size()) {
    throw InvalidArgument("evaluate: " + std::to_string(predictions.size()) +
                          " predicted sequences vs " + std::to_string(truths.size()) +
                          " ground-truth sequences");
  }
  if (horizon == 0) throw InvalidArgument("evaluate: horizon must be positive");
  std::vector<FrameScores> rows;
  rows.reserve(predictions.size());
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    rows.push_back(score_sequence(predictions[i], truths[i], horizon));
  }
  return aggregate(std::move(rows));
}

}  // namespace freqseg
