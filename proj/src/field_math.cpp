#include "freqseg/field_math.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace freqseg {
namespace {

void require_fft_dims(std::size_t h, std::size_t w, const char* what) {
  if (!is_power_of_two(h) || !is_power_of_two(w)) {
    throw DimensionError(std::string(what) + ": dimensions " + std::to_string(h) + "x" +
                         std::to_string(w) + " are not powers of two");
  }
}

// Twiddles exp(-2*pi*i*k/n) for k < n/2.
std::vector<Complex> twiddles(std::size_t n) {
  std::vector<Complex> w(n / 2);
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double a = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    w[k] = {std::cos(a), std::sin(a)};
  }
  return w;
}

// In-place iterative radix-2 transform over a strided sequence.
void fft1d(Complex* base, std::size_t n, std::size_t stride,
           const std::vector<Complex>& tw, bool inverse) {
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(base[i * stride], base[j * stride]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t step = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        Complex w = tw[k * step];
        if (inverse) w = std::conj(w);
        Complex& a = base[(start + k) * stride];
        Complex& b = base[(start + k + half) * stride];
        const Complex t = w * b;
        b = a - t;
        a += t;
      }
    }
  }
}

void transform(ComplexField& f, bool inverse) {
  const std::size_t h = f.height();
  const std::size_t w = f.width();
  const auto tw_row = twiddles(w);
  const auto tw_col = h == w ? tw_row : twiddles(h);
  Complex* data = f.data().data();
  for (std::size_t y = 0; y < h; ++y) fft1d(data + y * w, w, 1, tw_row, inverse);
  for (std::size_t x = 0; x < w; ++x) fft1d(data + x, h, w, tw_col, inverse);
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(h * w);
    for (Complex& z : f) z *= scale;
  }
}

// Signed frequency index for bin k of an n-point transform: [-n/2, n/2).
double signed_frequency(std::size_t k, std::size_t n) {
  return k < n / 2 ? static_cast<double>(k)
                   : static_cast<double>(k) - static_cast<double>(n);
}

}  // namespace

ComplexField fft2(const ComplexField& x) {
  require_fft_dims(x.height(), x.width(), "fft2");
  ComplexField out = x;
  transform(out, false);
  return out;
}

ComplexField fft2(const RealField& x) {
  require_fft_dims(x.height(), x.width(), "fft2");
  ComplexField out(x.height(), x.width());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i];
  transform(out, false);
  return out;
}

ComplexField ifft2_complex(const ComplexField& spectrum) {
  require_fft_dims(spectrum.height(), spectrum.width(), "ifft2");
  ComplexField out = spectrum;
  transform(out, true);
  return out;
}

RealField ifft2(const ComplexField& spectrum) {
  const ComplexField z = ifft2_complex(spectrum);
  RealField out(z.height(), z.width());
  double residue = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    out[i] = z[i].real();
    residue = std::max(residue, std::abs(z[i].imag()));
  }
  if (residue >= kImagResidueTolerance) {
    throw NumericalError("ifft2: imaginary residue " + std::to_string(residue) +
                         " exceeds tolerance for a real-valued spectrum");
  }
  return out;
}

ComplexField phase_ramp(double dy, double dx, std::size_t height, std::size_t width) {
  ComplexField out(height, width);
  const double h = static_cast<double>(height);
  const double w = static_cast<double>(width);
  for (std::size_t u = 0; u < height; ++u) {
    const double fu = signed_frequency(u, height) * dy / h;
    for (std::size_t v = 0; v < width; ++v) {
      const double phase = -2.0 * std::numbers::pi * (fu + signed_frequency(v, width) * dx / w);
      out(u, v) = std::polar(1.0, phase);
    }
  }
  return out;
}

void require_unit_magnitude(const ComplexField& t, const char* what) {
  const double dev = max_unit_deviation(t);
  if (dev > kUnitTolerance) {
    throw InvalidMotionField(std::string(what) + ": motion field deviates from unit magnitude by " +
                             std::to_string(dev));
  }
}

RealField phase_shift_unclamped(const RealField& x, const ComplexField& t) {
  require_same_shape(x, t, "phase_shift");
  require_unit_magnitude(t, "phase_shift");
  ComplexField spec = fft2(x);
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= t[i];
  const ComplexField z = ifft2_complex(spec);
  RealField out(x.height(), x.width());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i].real();
  return out;
}

RealField phase_shift(const RealField& x, const ComplexField& t) {
  return clamp01(phase_shift_unclamped(x, t));
}

PhaseDelta phase_delta(const ComplexField& curr, const ComplexField& prev, double floor) {
  require_same_shape(curr, prev, "phase_delta");
  if (!(floor >= 0.0)) throw InvalidArgument("phase_delta: floor must be >= 0");
  PhaseDelta out{ComplexField(curr.height(), curr.width(), Complex(1.0, 0.0)),
                 Mask(curr.height(), curr.width(), 0)};
  for (std::size_t i = 0; i < curr.size(); ++i) {
    if (std::abs(curr[i]) * std::abs(prev[i]) <= floor) continue;
    const Complex z = curr[i] * std::conj(prev[i]);
    const double m = std::abs(z);
    if (m == 0.0) continue;  // underflow of the product
    out.delta[i] = z / m;
    out.valid[i] = 1;
  }
  return out;
}

ComplexField unit_renormalize(const ComplexField& t, const ComplexField& fallback) {
  require_same_shape(t, fallback, "unit_renormalize");
  if (max_unit_deviation(fallback) > kUnitTolerance) {
    throw InvalidArgument("unit_renormalize: fallback is not unit magnitude");
  }
  ComplexField out(t.height(), t.width());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double m = std::abs(t[i]);
    out[i] = m > 1e-8 ? t[i] / m : fallback[i];
  }
  return out;
}

ComplexField identity_motion(std::size_t height, std::size_t width) {
  return ComplexField(height, width, Complex(1.0, 0.0));
}

}  // namespace freqseg
