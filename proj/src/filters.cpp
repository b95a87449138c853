#include "freqseg/filters.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "freqseg/field_math.hpp"

namespace freqseg {
namespace {

// Separable circular convolution with one symmetric 1D kernel on both axes.
template <typename T>
Field<T> convolve_separable(const Field<T>& x, const std::vector<double>& taps) {
  const long h = static_cast<long>(x.height());
  const long w = static_cast<long>(x.width());
  const long r = static_cast<long>(taps.size() / 2);
  Field<T> tmp(x.height(), x.width());
  for (long y = 0; y < h; ++y) {
    for (long c = 0; c < w; ++c) {
      T acc{};
      for (long k = -r; k <= r; ++k) {
        const long xc = ((c + k) % w + w) % w;
        acc += taps[k + r] * x(y, xc);
      }
      tmp(y, c) = acc;
    }
  }
  Field<T> out(x.height(), x.width());
  for (long y = 0; y < h; ++y) {
    for (long c = 0; c < w; ++c) {
      T acc{};
      for (long k = -r; k <= r; ++k) {
        const long yc = ((y + k) % h + h) % h;
        acc += taps[k + r] * tmp(yc, c);
      }
      out(y, c) = acc;
    }
  }
  return out;
}

std::vector<double> box_taps(int radius) {
  if (radius < 0) throw InvalidArgument("box_blur: radius must be >= 0");
  const std::size_t n = 2 * static_cast<std::size_t>(radius) + 1;
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

}  // namespace

GaussianKernel GaussianKernel::make(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument("gaussian kernel: sigma must be positive, got " + std::to_string(sigma));
  }
  GaussianKernel k;
  k.sigma = sigma;
  k.radius = static_cast<int>(std::ceil(3.0 * sigma));
  k.weights.resize(2 * static_cast<std::size_t>(k.radius) + 1);
  double sum = 0.0;
  for (int i = -k.radius; i <= k.radius; ++i) {
    const double v = std::exp(-0.5 * i * i / (sigma * sigma));
    k.weights[i + k.radius] = v;
    sum += v;
  }
  for (double& v : k.weights) v /= sum;
  return k;
}

RealField gaussian_blur(const RealField& x, double sigma) {
  return convolve_separable(x, GaussianKernel::make(sigma).weights);
}

RealField box_blur(const RealField& x, int radius) {
  return convolve_separable(x, box_taps(radius));
}

ComplexField box_blur(const ComplexField& x, int radius) {
  return convolve_separable(x, box_taps(radius));
}

RealField dog_filter(const RealField& alpha, double sigma_narrow, double sigma_wide,
                     double weight) {
  if (!(sigma_narrow > 0.0) || !(sigma_wide > sigma_narrow)) {
    throw InvalidArgument("dog_filter: need 0 < sigma_narrow < sigma_wide");
  }
  const RealField narrow = gaussian_blur(alpha, sigma_narrow);
  const RealField wide = gaussian_blur(alpha, sigma_wide);
  RealField out(alpha.height(), alpha.width());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::clamp(alpha[i] + weight * (narrow[i] - wide[i]), 0.0, 1.0);
  }
  return out;
}

ComplexField phase_smooth(const ComplexField& t, int radius) {
  if (radius < 1) throw InvalidArgument("phase_smooth: radius must be >= 1");
  return unit_renormalize(box_blur(t, radius), t);
}

}  // namespace freqseg
