#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "freqseg/error.hpp"

namespace freqseg {

using Complex = std::complex<double>;

// Dense row-major H x W grid.
template <typename T>
class Field {
 public:
  using value_type = T;

  Field() = default;
  Field(std::size_t height, std::size_t width, T fill = T{})
      : height_(height), width_(width), data_(height * width, fill) {}
  Field(std::size_t height, std::size_t width, std::vector<T> data)
      : height_(height), width_(width), data_(std::move(data)) {
    if (data_.size() != height_ * width_) {
      throw DimensionError("field data length " + std::to_string(data_.size()) +
                           " does not match " + std::to_string(height_) + "x" +
                           std::to_string(width_));
    }
  }

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t y, std::size_t x) { return data_[y * width_ + x]; }
  const T& operator()(std::size_t y, std::size_t x) const {
    return data_[y * width_ + x];
  }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }
  std::span<T> row(std::size_t y) { return {data_.data() + y * width_, width_}; }
  std::span<const T> row(std::size_t y) const {
    return {data_.data() + y * width_, width_};
  }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  template <typename U>
  bool same_shape(const Field<U>& other) const noexcept {
    return height_ == other.height() && width_ == other.width();
  }

  bool operator==(const Field&) const = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<T> data_;
};

using RealField = Field<double>;
using ComplexField = Field<Complex>;
using Mask = Field<std::uint8_t>;

template <typename A, typename B>
void require_same_shape(const Field<A>& a, const Field<B>& b, const char* what) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(what) + ": shape mismatch " +
                         std::to_string(a.height()) + "x" + std::to_string(a.width()) +
                         " vs " + std::to_string(b.height()) + "x" +
                         std::to_string(b.width()));
  }
}

constexpr bool is_power_of_two(std::size_t n) noexcept {
  return n != 0 && (n & (n - 1)) == 0;
}

/// Circular shift: out(y, x) = in(y - dy, x - dx) modulo the grid.
template <typename T>
Field<T> roll(const Field<T>& in, long dy, long dx) {
  const long h = static_cast<long>(in.height());
  const long w = static_cast<long>(in.width());
  Field<T> out(in.height(), in.width());
  if (h == 0 || w == 0) return out;
  for (long y = 0; y < h; ++y) {
    const long ty = ((y + dy) % h + h) % h;
    for (long x = 0; x < w; ++x) {
      const long tx = ((x + dx) % w + w) % w;
      out(ty, tx) = in(y, x);
    }
  }
  return out;
}

RealField clamp01(RealField x);
double max_abs_diff(const RealField& a, const RealField& b);
double max_abs_diff(const ComplexField& a, const ComplexField& b);
/// Largest deviation of |z| from 1 over the field.
double max_unit_deviation(const ComplexField& t);
bool all_in_unit_interval(const RealField& x);

}  // namespace freqseg
