#pragma once

#include <filesystem>

#include "iren/image.hpp"

namespace iren {

/// Reads a single-channel PGM (P2/P5), grayscale PNG, or grayscale TIFF
/// file, 8- or 16-bit. Returns the raw sample values as reals with
/// domain Raw. Multi-channel files are rejected.
Image load_image(const std::filesystem::path& path);

/// Writes an image (domain Unit or Byte255) quantized to the given bit
/// depth (8 or 16), rounding half-to-even. The container format follows
/// the path extension: .pgm, .png, .tif/.tiff.
void save_image(const Image& img, const std::filesystem::path& path, int depth = 8);

/// True for extensions load_image understands (.pgm/.png/.tif/.tiff,
/// case-insensitive). Used by the batch front end to filter directories.
bool has_supported_extension(const std::filesystem::path& path);

}  // namespace iren
