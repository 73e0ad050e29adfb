#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nsdwt/poly2.hpp"
#include "nsdwt/rational.hpp"

namespace nsdwt {

/// One predict/update pair of a lifting factorization. Both filters are
/// horizontal (zm only); the vertical variants are their transposes.
struct LiftingPair {
    LaurentPoly2 predict;
    LaurentPoly2 update;

    friend bool operator==(const LiftingPair&, const LiftingPair&) = default;
};

/// A wavelet given as an ordered list of lifting pairs followed by an
/// optional diagonal scaling of the low and high bands.
struct WaveletSpec {
    std::string name;
    std::vector<LiftingPair> pairs;
    Rational scale_low{1};
    Rational scale_high{1};

    [[nodiscard]] std::size_t pair_count() const { return pairs.size(); }
    [[nodiscard]] bool is_scaled() const { return !scale_low.is_one() || !scale_high.is_one(); }

    /// Same lifting structure; the name is not compared.
    [[nodiscard]] bool same_transform(const WaveletSpec& other) const {
        return pairs == other.pairs && scale_low == other.scale_low && scale_high == other.scale_high;
    }
};

class WaveletNotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class WaveletInvariantError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class WaveletParseError : public std::runtime_error {
public:
    WaveletParseError(const std::string& what, std::size_t line, std::size_t column)
        : std::runtime_error(what), line_(line), column_(column) {}
    [[nodiscard]] std::size_t line() const { return line_; }
    [[nodiscard]] std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Throws WaveletInvariantError when the spec is malformed.
void validate(const WaveletSpec& w);

std::vector<std::string> builtin_names();

/// "cdf53" or "cdf97". Throws WaveletNotFound for anything else.
WaveletSpec builtin(std::string_view name);

/// Parses the wavelet config format:
///
///     # comment
///     name = mywave
///     predict[1] = -1/2 -1/2*zm
///     update[1]  = 1/4 +1/4*zm^-1
///     scale_low  = 1
///     scale_high = 1
///
/// Pair indices start at 1 and must be contiguous. scale_high defaults to
/// the reciprocal of scale_low; both default to 1.
WaveletSpec load_custom(std::string_view text);

WaveletSpec load_custom_file(const std::filesystem::path& path);

/// Renders `w` in the config format accepted by load_custom.
std::string to_config(const WaveletSpec& w);

/// "cdf53" or "@path/to/file.cfg".
WaveletSpec resolve_wavelet(std::string_view name_or_file);

}  // namespace nsdwt
