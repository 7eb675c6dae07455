#ifndef SCALEAUG_IMAGE_IO_HPP
#define SCALEAUG_IMAGE_IO_HPP

#include <filesystem>

#include "scaleaug/raster.hpp"

namespace scaleaug {

// ---------------------------------------------------------------------------
// Image file I/O (PNG / JPEG)
//
// Thin wrappers over the system codec library.  All in-memory processing
// uses the RGB Image type from raster.hpp.
// ---------------------------------------------------------------------------

/// Decodes a PNG or JPEG file into an RGB raster.  Throws IoError if the file
/// is missing or undecodable.
[[nodiscard]] Image load_image(const std::filesystem::path& path);

/// Encodes an RGB raster; the format follows the file extension (.png, .jpg,
/// .jpeg).  JPEG uses `jpeg_quality`.  Throws IoError on failure.
void save_image(const std::filesystem::path& path, const Image& img, int jpeg_quality = 95);

/// Writes an alpha map as an 8-bit grayscale PNG (values x255, rounded).
void save_alpha_png(const std::filesystem::path& path, const AlphaMap& map);

}  // namespace scaleaug

#endif  // SCALEAUG_IMAGE_IO_HPP
