#pragma once

#include <filesystem>

#include "ptycho/field.hpp"

namespace ptycho {

// Grayscale PNG previews. Values are clamped to [0, 1] and scaled to the full
// sample range; 16-bit is the default for anything quantitative.
void write_png_gray16(const std::filesystem::path& path, const RealField& img);
void write_png_gray8(const std::filesystem::path& path, const RealField& img);

// Reads an 8- or 16-bit grayscale PNG back to [0, 1]. Other color types are
// rejected; this is a round-trip facility, not a general image loader.
RealField read_png_gray(const std::filesystem::path& path);

}  // namespace ptycho
