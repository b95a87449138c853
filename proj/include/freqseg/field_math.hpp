#pragma once

#include "freqseg/field.hpp"

namespace freqseg {

inline constexpr double kUnitTolerance = 1e-6;
inline constexpr double kImagResidueTolerance = 1e-4;

// Unnormalized forward 2D DFT. Height and width must be powers of two.
ComplexField fft2(const RealField& x);
ComplexField fft2(const ComplexField& x);

// Inverse 2D DFT scaled by 1/(H*W). The real-valued overload asserts that
// the discarded imaginary residue stays below kImagResidueTolerance.
RealField ifft2(const ComplexField& spectrum);
ComplexField ifft2_complex(const ComplexField& spectrum);

/// Shift-theorem ramp exp(-2*pi*i*(u*dy/H + v*dx/W)) over signed
/// frequencies u in [-H/2, H/2), v in [-W/2, W/2), stored in DFT order.
ComplexField phase_ramp(double dy, double dx, std::size_t height, std::size_t width);

/// Moves `x` by the motion field `t` in the Fourier domain and clamps the
/// result to [0, 1]. The real part of the inverse is kept; a non-Hermitian
/// `t` (fractional ramps at the Nyquist bins) leaves an expected imaginary
/// residue.
RealField phase_shift(const RealField& x, const ComplexField& t);
/// Same as phase_shift without the clamp.
RealField phase_shift_unclamped(const RealField& x, const ComplexField& t);

struct PhaseDelta {
  ComplexField delta;  // unit magnitude; 1+0i where invalid
  Mask valid;
};

/// Normalized cross-power spectrum curr * conj(prev). Bins whose magnitude
/// product |curr|*|prev| is at or below `floor` are marked invalid.
PhaseDelta phase_delta(const ComplexField& curr, const ComplexField& prev, double floor);

/// Projects every element back onto the unit circle; elements with
/// |z| <= 1e-8 take the matching (unit) fallback element.
ComplexField unit_renormalize(const ComplexField& t, const ComplexField& fallback);

ComplexField identity_motion(std::size_t height, std::size_t width);
void require_unit_magnitude(const ComplexField& t, const char* what);

}  // namespace freqseg
