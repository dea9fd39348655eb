#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "frontnav/geometry.hpp"

namespace frontnav {

/// Binary PGM (P5), 8-bit, one byte per cell; nonzero mask cells are 255.
void write_pgm(const std::filesystem::path& path, const MaskGrid& mask);

/// Binary PGM (P5), 16-bit big-endian, as the format requires.
void write_pgm16(const std::filesystem::path& path, const Grid<std::uint16_t>& image);

using Rgb = std::array<std::uint8_t, 3>;

/// 8-bit RGB PNG.
void write_png(const std::filesystem::path& path, const Grid<Rgb>& image);

}  // namespace frontnav
