#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "nsdwt/engine.hpp"
#include "nsdwt/poly2.hpp"
#include "nsdwt/quadfield.hpp"
#include "nsdwt/wavelets.hpp"

namespace nsdwt::testing {

inline QuadField random_tile(int width, int height, std::uint32_t seed,
                             ExtensionMode mode = ExtensionMode::WholeSampleSymmetric) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<float> dist(0.0f, 1.0f);
    std::vector<float> pixels(static_cast<std::size_t>(width) * height);
    for (auto& p : pixels) {
        p = dist(rng);
    }
    return QuadField::from_pixels(width, height, pixels, mode);
}

inline Plane<double> to_plane(const QuadField& tile) {
    Plane<double> p(tile.pixel_height(), tile.pixel_width());
    for (int y = 0; y < tile.pixel_height(); ++y) {
        for (int x = 0; x < tile.pixel_width(); ++x) {
            p(y, x) = tile.pixel(x, y);
        }
    }
    return p;
}

inline double max_abs_diff(const QuadField& a, const QuadField& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        worst = std::max(worst, std::abs(static_cast<double>(a.data()[i]) - b.data()[i]));
    }
    return worst;
}

/// Max abs difference between the engine's subbands and reference planes.
inline double max_abs_diff(const QuadField& tile, const Subbands<double>& planes) {
    double worst = 0.0;
    for (int c = 0; c < 4; ++c) {
        for (int n = 0; n < tile.height_quads(); ++n) {
            for (int m = 0; m < tile.width_quads(); ++m) {
                worst = std::max(worst, std::abs(static_cast<double>(tile.at(m, n, c)) - planes[c](n, m)));
            }
        }
    }
    return worst;
}

inline double max_abs_diff(const Subbands<double>& a, const Subbands<double>& b) {
    double worst = 0.0;
    for (int c = 0; c < 4; ++c) {
        worst = std::max(worst, (a[c] - b[c]).abs().maxCoeff());
    }
    return worst;
}

/// Random polynomial with up to `max_terms` terms, exponents in
/// [-range, range], small nonzero rational coefficients.
inline LaurentPoly2 random_poly(std::mt19937& rng, int max_terms, int range, bool horizontal_only) {
    std::uniform_int_distribution<int> count(1, max_terms);
    std::uniform_int_distribution<int> exponent(-range, range);
    std::uniform_int_distribution<int> num(-4, 4);
    std::uniform_int_distribution<int> den(1, 4);
    LaurentPoly2 p;
    while (p.is_zero()) {
        const int n = count(rng);
        for (int i = 0; i < n; ++i) {
            int v = 0;
            while (v == 0) {
                v = num(rng);
            }
            const int a = exponent(rng);
            const int b = horizontal_only ? 0 : exponent(rng);
            p += LaurentPoly2::monomial(Rational(v, den(rng)), a, b);
        }
    }
    return p;
}

/// Random custom wavelet: K in [1, 3] pairs of horizontal polynomials with
/// at most three terms each; about a third of them scaled.
inline WaveletSpec random_wavelet(std::mt19937& rng) {
    std::uniform_int_distribution<int> pairs(1, 3);
    WaveletSpec w;
    w.name = "random";
    const int k = pairs(rng);
    for (int i = 0; i < k; ++i) {
        w.pairs.push_back({random_poly(rng, 3, 2, true), random_poly(rng, 3, 2, true)});
    }
    if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
        w.scale_low = Rational(std::uniform_int_distribution<int>(2, 5)(rng), 3);
        w.scale_high = w.scale_low.reciprocal();
    }
    return w;
}

}  // namespace nsdwt::testing
