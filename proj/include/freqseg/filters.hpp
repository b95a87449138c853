#pragma once

#include <vector>

#include "freqseg/field.hpp"

namespace freqseg {

/// Normalized, symmetric Gaussian taps truncated at +-ceil(3 sigma).
struct GaussianKernel {
  int radius = 0;
  double sigma = 0.0;
  std::vector<double> weights;  // 2 * radius + 1 taps, sum 1

  static GaussianKernel make(double sigma);
};

// All filters use circular boundaries, matching the FFT's toroidal geometry.

RealField gaussian_blur(const RealField& x, double sigma);

/// Mean over a (2r+1)^2 circular window.
RealField box_blur(const RealField& x, int radius);
ComplexField box_blur(const ComplexField& x, int radius);

/// Residual band-pass enhancement clamp(alpha + weight * (G_narrow - G_wide) alpha).
/// Flat regions are left alone; blob cores sharpen and low-level haze is pulled down.
RealField dog_filter(const RealField& alpha, double sigma_narrow, double sigma_wide,
                     double weight = 1.0);

/// Local complex averaging of a unit motion field followed by projection back
/// onto the unit circle (cancelled bins keep their input value).
ComplexField phase_smooth(const ComplexField& t, int radius);

}  // namespace freqseg
