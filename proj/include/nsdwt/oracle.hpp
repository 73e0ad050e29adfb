#pragma once

#include <span>
#include <utility>
#include <vector>

#include "nsdwt/polymatrix.hpp"
#include "nsdwt/quadfield.hpp"
#include "nsdwt/wavelets.hpp"

/// Slow scalar reference transforms used to check the engine. Nothing here
/// shares indexing or boundary code with the engine.
namespace nsdwt::oracle {

using PolyMatrix2 = Eigen::Matrix<LaurentPoly2, 2, 2>;

/// Analysis filters in correlation form: for a signal x,
///   low[i]  = sum_k lowpass[k]  * x[2i + k]
///   high[i] = sum_k highpass[k] * x[2i + k]
/// where lowpass[k] is the coefficient of zm^k.
struct FilterBank {
    LaurentPoly2 lowpass;
    LaurentPoly2 highpass;
};

/// 1-D polyphase matrix of the lifting factorization, rows (L, H), columns
/// (even, odd): scaling * prod_k [1 U_k; 0 1][1 0; P_k 1].
PolyMatrix2 lifting_polyphase(const WaveletSpec& w);

/// Polyphase matrix assembled from the filters' even/odd parts.
PolyMatrix2 polyphase_from_filters(const FilterBank& fb);

FilterBank filters_from_lifting(const WaveletSpec& w);

/// Separable 2-D convolution with the filter bank followed by subsampling.
/// `pixels` must have even dimensions. Returns LL, HL, LH, HH planes.
Subbands<double> direct_transform(const Plane<double>& pixels, const FilterBank& fb, ExtensionMode extension);

/// Textbook in-place lifting on a 1-D signal of even length; returns the
/// (low, high) halves.
std::pair<std::vector<double>, std::vector<double>> naive_lifting_1d(std::span<const double> signal,
                                                                     const WaveletSpec& w,
                                                                     ExtensionMode extension);

/// naive_lifting_1d over every row, then over every column.
Subbands<double> naive_lifting_2d(const Plane<double>& pixels, const WaveletSpec& w, ExtensionMode extension);

}  // namespace nsdwt::oracle
