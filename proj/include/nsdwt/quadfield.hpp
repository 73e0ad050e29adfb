#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nsdwt {

/// Boundary handling for reads outside the tile.
enum class ExtensionMode {
    /// Mirror about the edge sample without repeating it.
    WholeSampleSymmetric,
    /// Every subband reads zero outside the tile.
    ZeroPad,
};

std::string_view extension_name(ExtensionMode mode);
/// "symmetric" / "wss" / "whole-sample-symmetric" or "zero" / "zero-pad".
ExtensionMode parse_extension(std::string_view name);

template <typename Scalar>
using Plane = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// LL, HL, LH, HH planes of width_quads x height_quads each.
template <typename Scalar>
using Subbands = std::array<Plane<Scalar>, 4>;

/// A tile of 2x2 pixel quads. The buffer is plain row-major pixel order, so
/// quad (m, n) keeps LL at pixel (2m, 2n), HL at (2m+1, 2n), LH at
/// (2m, 2n+1) and HH at (2m+1, 2n+1).
template <typename Scalar>
class BasicQuadField {
public:
    BasicQuadField() = default;
    BasicQuadField(int width_quads, int height_quads,
                   ExtensionMode extension = ExtensionMode::WholeSampleSymmetric)
        : width_quads_(width_quads), height_quads_(height_quads), extension_(extension) {
        if (width_quads <= 0 || height_quads <= 0) {
            throw std::invalid_argument("quad field dimensions must be positive");
        }
        data_.assign(static_cast<std::size_t>(4) * width_quads * height_quads, Scalar(0));
    }

    /// Wraps a row-major pixel image; both dimensions must be even.
    static BasicQuadField from_pixels(int width, int height, std::span<const Scalar> pixels,
                                      ExtensionMode extension = ExtensionMode::WholeSampleSymmetric) {
        if (width <= 0 || height <= 0 || width % 2 != 0 || height % 2 != 0) {
            throw std::invalid_argument("tile dimensions must be positive and even, got " + std::to_string(width) +
                                        "x" + std::to_string(height));
        }
        if (pixels.size() != static_cast<std::size_t>(width) * height) {
            throw std::invalid_argument("pixel count does not match tile dimensions");
        }
        BasicQuadField f(width / 2, height / 2, extension);
        std::copy(pixels.begin(), pixels.end(), f.data_.begin());
        return f;
    }

    [[nodiscard]] int width_quads() const { return width_quads_; }
    [[nodiscard]] int height_quads() const { return height_quads_; }
    [[nodiscard]] int pixel_width() const { return 2 * width_quads_; }
    [[nodiscard]] int pixel_height() const { return 2 * height_quads_; }
    [[nodiscard]] ExtensionMode extension() const { return extension_; }
    void set_extension(ExtensionMode mode) { extension_ = mode; }

    [[nodiscard]] std::size_t index(int m, int n, int component) const {
        return static_cast<std::size_t>(2 * n + (component >> 1)) * pixel_width() + 2 * m + (component & 1);
    }
    Scalar& at(int m, int n, int component) { return data_[index(m, n, component)]; }
    [[nodiscard]] const Scalar& at(int m, int n, int component) const { return data_[index(m, n, component)]; }

    Scalar& pixel(int x, int y) { return data_[static_cast<std::size_t>(y) * pixel_width() + x]; }
    [[nodiscard]] const Scalar& pixel(int x, int y) const {
        return data_[static_cast<std::size_t>(y) * pixel_width() + x];
    }

    std::span<Scalar> data() { return data_; }
    [[nodiscard]] std::span<const Scalar> data() const { return data_; }

    [[nodiscard]] bool same_shape(const BasicQuadField& other) const {
        return width_quads_ == other.width_quads_ && height_quads_ == other.height_quads_;
    }

    friend bool operator==(const BasicQuadField&, const BasicQuadField&) = default;

private:
    int width_quads_ = 0;
    int height_quads_ = 0;
    ExtensionMode extension_ = ExtensionMode::WholeSampleSymmetric;
    std::vector<Scalar> data_;
};

using QuadField = BasicQuadField<float>;

/// Splits the interleaved quads into LL, HL, LH, HH planes.
template <typename Scalar>
Subbands<Scalar> to_mallat(const BasicQuadField<Scalar>& tile) {
    Subbands<Scalar> planes;
    for (int c = 0; c < 4; ++c) {
        planes[c].resize(tile.height_quads(), tile.width_quads());
        for (int n = 0; n < tile.height_quads(); ++n) {
            for (int m = 0; m < tile.width_quads(); ++m) {
                planes[c](n, m) = tile.at(m, n, c);
            }
        }
    }
    return planes;
}

template <typename Scalar>
BasicQuadField<Scalar> from_mallat(const Subbands<Scalar>& planes,
                                   ExtensionMode extension = ExtensionMode::WholeSampleSymmetric) {
    const auto rows = planes[0].rows();
    const auto cols = planes[0].cols();
    for (const auto& p : planes) {
        if (p.rows() != rows || p.cols() != cols) {
            throw std::invalid_argument("subband planes differ in size");
        }
    }
    BasicQuadField<Scalar> tile(static_cast<int>(cols), static_cast<int>(rows), extension);
    for (int c = 0; c < 4; ++c) {
        for (int n = 0; n < rows; ++n) {
            for (int m = 0; m < cols; ++m) {
                tile.at(m, n, c) = planes[c](n, m);
            }
        }
    }
    return tile;
}

}  // namespace nsdwt
