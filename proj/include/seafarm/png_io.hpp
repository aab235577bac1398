#pragma once

#include <optional>
#include <string>
#include <vector>

#include "seafarm/image.hpp"

namespace seafarm {

/// Decoded PNG: pixels in [0,1] (1 or 3 channels) plus the alpha plane when
/// the file carries one.
struct PngImage {
    ImageBuffer pixels;
    std::optional<std::vector<double>> alpha;  // H×W, [0,1]
};

/// Reads an 8/16-bit gray, gray+alpha, palette, RGB, or RGBA PNG. Samples are
/// converted to double by dividing by 255 (16-bit files are reduced to 8 bits
/// first).
PngImage read_png(const std::string& path);

/// Writes an 8-bit gray/RGB PNG, or gray+alpha/RGBA when `alpha` is given.
/// Samples are clamped to [0,1] and quantized with round-half-up. Encoder
/// settings are fixed (compression level 6, no filtering, no ancillary
/// chunks) so identical pixels always produce identical bytes.
void write_png(const std::string& path, const ImageBuffer& image,
               const std::vector<double>* alpha = nullptr);

}  // namespace seafarm
