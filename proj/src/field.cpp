#include "freqseg/field.hpp"

#include <algorithm>
#include <cmath>

namespace freqseg {

RealField clamp01(RealField x) {
  for (double& v : x) v = std::clamp(v, 0.0, 1.0);
  return x;
}

double max_abs_diff(const RealField& a, const RealField& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs_diff(const ComplexField& a, const ComplexField& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_unit_deviation(const ComplexField& t) {
  double m = 0.0;
  for (const Complex& z : t) m = std::max(m, std::abs(std::abs(z) - 1.0));
  return m;
}

bool all_in_unit_interval(const RealField& x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return v >= 0.0 && v <= 1.0; });
}

}  // namespace freqseg
