#pragma once

#include <filesystem>
#include <iosfwd>

#include "fractalmarch/engine.hpp"

namespace fractalmarch {

/// Binary P6, maxval 255, alpha dropped.
void writePpm(const Framebuffer& fb, std::ostream& out);

/// 8-bit RGBA PNG.
void writePng(const Framebuffer& fb, std::ostream& out);

/// Picks PPM or PNG from the extension (.ppm / .png). Throws IoError.
void writeImage(const Framebuffer& fb, const std::filesystem::path& path);

}  // namespace fractalmarch
