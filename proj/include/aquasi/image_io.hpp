#pragma once

#include "aquasi/image.hpp"

#include <filesystem>
#include <iosfwd>

namespace aquasi::io {

/// Container chosen for writing; Auto picks from the file extension
/// (.pgm / .ppm / .pnm -> PNM, anything else -> F32).
enum class Format { Auto, F32, Pnm };

// F32: ASCII "F32 <w> <h> <c>\n" then w*h*c little-endian float32,
// channel-major then row-major.
MultiChannelImage read_f32(std::istream& in);
void write_f32(std::ostream& out, const MultiChannelImage& img);

// Binary Netpbm: P5 (gray) and P6 (RGB), maxval 1..65535, 16-bit samples big-endian.
MultiChannelImage read_pnm(std::istream& in);
/// Samples are clamped to [0,1] and rounded to maxval steps. Requires 1 or 3 channels.
void write_pnm(std::ostream& out, const MultiChannelImage& img, int maxval = 255);

/// Dispatches on the magic bytes.
MultiChannelImage read_image(const std::filesystem::path& path);
void write_image(const std::filesystem::path& path, const MultiChannelImage& img,
                 Format format = Format::Auto, int pnm_maxval = 255);

}  // namespace aquasi::io
