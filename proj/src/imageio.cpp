#include "nsdwt/imageio.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace nsdwt::imageio {

namespace {

std::vector<char> read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ImageError("cannot open '" + path.string() + "' for reading");
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_all(const std::filesystem::path& path, const std::vector<char>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ImageError("cannot open '" + path.string() + "' for writing");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw ImageError("write to '" + path.string() + "' failed");
    }
}

std::uint32_t to_little(std::uint32_t v) {
    if constexpr (std::endian::native == std::endian::big) {
        return ((v & 0xFFu) << 24) | ((v & 0xFF00u) << 8) | ((v >> 8) & 0xFF00u) | (v >> 24);
    }
    return v;
}

void check_dimensions(int width, int height) {
    if (width <= 0 || height <= 0) {
        throw ImageError("image dimensions must be positive");
    }
}

RawImage load_f32le(const std::filesystem::path& path, int width, int height) {
    if (width <= 0 || height <= 0) {
        throw ImageError("f32le input needs its dimensions (--size WxH)");
    }
    const std::vector<char> bytes = read_all(path);
    const std::size_t count = static_cast<std::size_t>(width) * height;
    if (bytes.size() != 4 * count) {
        throw ImageError("size mismatch: '" + path.string() + "' has " + std::to_string(bytes.size()) +
                         " bytes, expected " + std::to_string(4 * count) + " for " + std::to_string(width) + "x" +
                         std::to_string(height));
    }
    RawImage img{width, height, std::vector<float>(count)};
    for (std::size_t i = 0; i < count; ++i) {
        std::uint32_t raw;
        std::memcpy(&raw, bytes.data() + 4 * i, 4);
        img.pixels[i] = std::bit_cast<float>(to_little(raw));
        if (std::isnan(img.pixels[i])) {
            throw ImageError("NaN at pixel " + std::to_string(i % width) + "," + std::to_string(i / width));
        }
    }
    return img;
}

// Reads one whitespace-delimited header token, skipping '#' comments.
int header_int(const std::vector<char>& bytes, std::size_t& pos) {
    for (;;) {
        while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) {
            ++pos;
        }
        if (pos < bytes.size() && bytes[pos] == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') {
                ++pos;
            }
            continue;
        }
        break;
    }
    long value = 0;
    const std::size_t start = pos;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
        value = value * 10 + (bytes[pos] - '0');
        if (value > 1'000'000) {
            throw ImageError("malformed PGM header: value too large");
        }
        ++pos;
    }
    if (pos == start) {
        throw ImageError("malformed PGM header at byte " + std::to_string(start));
    }
    return static_cast<int>(value);
}

RawImage load_pgm(const std::filesystem::path& path, int width, int height) {
    const std::vector<char> bytes = read_all(path);
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
        throw ImageError("malformed PGM header: expected binary 'P5' magic");
    }
    std::size_t pos = 2;
    const int w = header_int(bytes, pos);
    const int h = header_int(bytes, pos);
    const int maxval = header_int(bytes, pos);
    if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255) {
        throw ImageError("malformed PGM header: only 8-bit images with positive size are supported");
    }
    if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        throw ImageError("malformed PGM header: missing separator before pixel data");
    }
    ++pos;
    if ((width > 0 && width != w) || (height > 0 && height != h)) {
        throw ImageError("size mismatch: PGM is " + std::to_string(w) + "x" + std::to_string(h));
    }
    const std::size_t count = static_cast<std::size_t>(w) * h;
    if (bytes.size() - pos != count) {
        throw ImageError("size mismatch: PGM pixel data has " + std::to_string(bytes.size() - pos) +
                         " bytes, expected " + std::to_string(count));
    }
    RawImage img{w, h, std::vector<float>(count)};
    for (std::size_t i = 0; i < count; ++i) {
        img.pixels[i] = static_cast<float>(static_cast<unsigned char>(bytes[pos + i])) / static_cast<float>(maxval);
    }
    return img;
}

}  // namespace

Format parse_format(std::string_view name) {
    if (name == "f32le") {
        return Format::F32LE;
    }
    if (name == "pgm") {
        return Format::PGM;
    }
    throw std::invalid_argument("unknown image format '" + std::string(name) + "' (expected f32le or pgm)");
}

Format format_for(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".pgm" ? Format::PGM : Format::F32LE;
}

RawImage load(const std::filesystem::path& path, Format format, int width, int height) {
    return format == Format::PGM ? load_pgm(path, width, height) : load_f32le(path, width, height);
}

void store(const RawImage& image, const std::filesystem::path& path, Format format) {
    check_dimensions(image.width, image.height);
    if (image.pixels.size() != static_cast<std::size_t>(image.width) * image.height) {
        throw ImageError("pixel count does not match the image dimensions");
    }
    std::vector<char> bytes;
    if (format == Format::F32LE) {
        bytes.resize(4 * image.pixels.size());
        for (std::size_t i = 0; i < image.pixels.size(); ++i) {
            const std::uint32_t raw = to_little(std::bit_cast<std::uint32_t>(image.pixels[i]));
            std::memcpy(bytes.data() + 4 * i, &raw, 4);
        }
    } else {
        const std::string header =
            "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
        bytes.assign(header.begin(), header.end());
        for (float v : image.pixels) {
            const float clamped = std::isnan(v) ? 0.0f : std::clamp(v, 0.0f, 1.0f);
            bytes.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(clamped * 255.0f))));
        }
    }
    write_all(path, bytes);
}

QuadField to_tile(const RawImage& image, ExtensionMode extension) {
    return QuadField::from_pixels(image.width, image.height, image.pixels, extension);
}

RawImage from_tile(const QuadField& tile) {
    return {tile.pixel_width(), tile.pixel_height(), std::vector<float>(tile.data().begin(), tile.data().end())};
}

RawImage to_mallat_image(const QuadField& tile) {
    const int w = tile.width_quads();
    const int h = tile.height_quads();
    RawImage img{2 * w, 2 * h, std::vector<float>(static_cast<std::size_t>(4) * w * h)};
    for (int c = 0; c < 4; ++c) {
        const int x0 = (c & 1) * w;
        const int y0 = (c >> 1) * h;
        for (int n = 0; n < h; ++n) {
            for (int m = 0; m < w; ++m) {
                img.at(x0 + m, y0 + n) = tile.at(m, n, c);
            }
        }
    }
    return img;
}

QuadField from_mallat_image(const RawImage& image, ExtensionMode extension) {
    if (image.width % 2 != 0 || image.height % 2 != 0 || image.width <= 0 || image.height <= 0) {
        throw ImageError("a subband mosaic needs positive even dimensions");
    }
    const int w = image.width / 2;
    const int h = image.height / 2;
    QuadField tile(w, h, extension);
    for (int c = 0; c < 4; ++c) {
        const int x0 = (c & 1) * w;
        const int y0 = (c >> 1) * h;
        for (int n = 0; n < h; ++n) {
            for (int m = 0; m < w; ++m) {
                tile.at(m, n, c) = image.at(x0 + m, y0 + n);
            }
        }
    }
    return tile;
}

}  // namespace nsdwt::imageio
