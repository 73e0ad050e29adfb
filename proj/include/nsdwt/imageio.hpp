#pragma once

#include <filesystem>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "nsdwt/quadfield.hpp"

namespace nsdwt::imageio {

enum class Format { F32LE, PGM };

/// "f32le" or "pgm"; throws std::invalid_argument otherwise.
Format parse_format(std::string_view name);

/// PGM for a ".pgm" extension, f32le for anything else.
Format format_for(const std::filesystem::path& path);

/// Single-channel image, row-major.
struct RawImage {
    int width = 0;
    int height = 0;
    std::vector<float> pixels;

    [[nodiscard]] float at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    float& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    friend bool operator==(const RawImage&, const RawImage&) = default;
};

class ImageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Headerless little-endian float32 data needs `width` and `height`; for PGM
/// they are read from the header and must be 0 or match. PGM samples are
/// normalized to [0, 1]. NaN samples are rejected.
RawImage load(const std::filesystem::path& path, Format format, int width = 0, int height = 0);

/// f32le is stored bit-exactly. PGM clamps to [0, 1] and quantizes to 8 bits.
void store(const RawImage& image, const std::filesystem::path& path, Format format);

/// The quad buffer is plain pixel order, so these are copies.
QuadField to_tile(const RawImage& image, ExtensionMode extension = ExtensionMode::WholeSampleSymmetric);
RawImage from_tile(const QuadField& tile);

/// Subband mosaic: LL top-left, HL top-right, LH bottom-left, HH bottom-right.
RawImage to_mallat_image(const QuadField& tile);
QuadField from_mallat_image(const RawImage& image, ExtensionMode extension = ExtensionMode::WholeSampleSymmetric);

}  // namespace nsdwt::imageio
