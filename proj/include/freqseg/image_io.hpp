#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "freqseg/field.hpp"

namespace freqseg {

/// 8-bit grayscale quantization used by every exported image: round(255 * v),
/// with v clamped to [0, 1].
std::uint8_t to_gray8(double v);

std::vector<std::uint8_t> encode_png(const RealField& image);
/// Animated PNG; every frame must share one shape.
std::vector<std::uint8_t> encode_apng(std::span<const RealField> frames, unsigned delay_ms);

void write_png(const std::filesystem::path& path, const RealField& image);
void write_apng(const std::filesystem::path& path, std::span<const RealField> frames,
                unsigned delay_ms = 200);

/// Decodes a non-interlaced PNG (gray, gray+alpha, RGB, RGBA; 8 or 16 bit)
/// to luma in [0, 1]. Alpha is ignored.
RealField decode_png(std::span<const std::uint8_t> bytes);

/// Reads PNG or binary/ASCII PGM, chosen by file signature.
RealField read_grayscale(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace freqseg
