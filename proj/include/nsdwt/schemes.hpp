#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nsdwt/polymatrix.hpp"
#include "nsdwt/wavelets.hpp"

namespace nsdwt {

enum class SchemeKind { SeparableLifting, SeparableConvolution, NonSeparableLifting, AdaptedNonSeparable };

inline constexpr std::array<SchemeKind, 4> kAllSchemes = {
    SchemeKind::SeparableLifting,
    SchemeKind::SeparableConvolution,
    SchemeKind::NonSeparableLifting,
    SchemeKind::AdaptedNonSeparable,
};

/// "sep-lifting", "sep-conv", "ns-lifting", "ns-adapted".
std::string_view scheme_name(SchemeKind kind);

/// Inverse of scheme_name; throws std::invalid_argument on unknown names.
SchemeKind parse_scheme_kind(std::string_view name);

/// One barrier-separated unit of work. A composite step holds several
/// matrices applied in order without synchronization; only the first part
/// may read neighbouring quads, the rest must be constant-only so that no
/// worker ever needs another worker's in-step results.
class Step {
public:
    explicit Step(PolyMatrix4 single);
    /// Throws std::invalid_argument if any part after the first is not
    /// constant-only, or if `parts` is empty.
    explicit Step(std::vector<PolyMatrix4> parts);

    /// Skips the composite check. Only for negative tests of the executor.
    static Step unchecked(std::vector<PolyMatrix4> parts);

    /// Single-part step equal to factors[n-1] * ... * factors[0]. All factors
    /// must act along the same axis (zm only or zn only; constants fit
    /// either). The factorization defines what the fused step computes next
    /// to the tile edges: exactly what the factors would compute one after
    /// another under the same extension mode.
    static Step fused(std::vector<PolyMatrix4> factors);

    [[nodiscard]] const std::vector<PolyMatrix4>& parts() const { return parts_; }
    [[nodiscard]] bool is_composite() const { return parts_.size() > 1; }

    /// Empty unless built with fused().
    [[nodiscard]] const std::vector<PolyMatrix4>& factors() const { return factors_; }
    /// 0 for horizontal, 1 for vertical, -1 when the factors are all constant
    /// or the step is not fused.
    [[nodiscard]] int factor_axis() const { return factor_axis_; }

    /// parts[n-1] * ... * parts[0].
    [[nodiscard]] PolyMatrix4 product() const;

    friend bool operator==(const Step& a, const Step& b);

private:
    struct NoCheck {};
    Step(std::vector<PolyMatrix4> parts, NoCheck) : parts_(std::move(parts)) {}

    std::vector<PolyMatrix4> parts_;
    std::vector<PolyMatrix4> factors_;
    int factor_axis_ = -1;
};

struct Scheme {
    std::string name;
    std::vector<Step> steps;
    WaveletSpec wavelet;
    bool inverse = false;

    /// Total transform: steps[n-1] * ... * steps[0].
    [[nodiscard]] PolyMatrix4 product() const;

    friend bool operator==(const Scheme& a, const Scheme& b) {
        return a.name == b.name && a.inverse == b.inverse && a.steps == b.steps &&
               a.wavelet.same_transform(b.wavelet);
    }
};

struct OpCount {
    int steps = 0;
    int macs_per_quad = 0;
    int copies_per_quad = 0;
};

struct EquivalenceVerdict {
    bool equal = false;
    int row = -1;
    int col = -1;
    LaurentPoly2 lhs;
    LaurentPoly2 rhs;

    [[nodiscard]] std::string describe() const;
};

// Elementary matrices, rows and columns ordered (LL, HL, LH, HH).
PolyMatrix4 horizontal_predict(const LaurentPoly2& p);
PolyMatrix4 vertical_predict(const LaurentPoly2& p_transposed);
PolyMatrix4 horizontal_update(const LaurentPoly2& u);
PolyMatrix4 vertical_update(const LaurentPoly2& u_transposed);
PolyMatrix4 spatial_predict(const LaurentPoly2& p);
PolyMatrix4 spatial_update(const LaurentPoly2& u);
PolyMatrix4 horizontal_scaling(const Rational& low, const Rational& high);
PolyMatrix4 vertical_scaling(const Rational& low, const Rational& high);
PolyMatrix4 scaling_2d(const Rational& low, const Rational& high);

Scheme build_separable_lifting(const WaveletSpec& w);
Scheme build_separable_convolution(const WaveletSpec& w);
Scheme build_nonseparable_lifting(const WaveletSpec& w);
Scheme build_adapted_nonseparable(const WaveletSpec& w);
Scheme build_scheme(SchemeKind kind, const WaveletSpec& w);

EquivalenceVerdict verify_equivalence(const Scheme& a, const Scheme& b);

OpCount count_ops(const Scheme& s);

/// Inverse transform. Steps run in reverse order; within a composite step
/// the constant parts are inverted in reverse order and the leading part is
/// conjugated so that it still comes first. Throws std::domain_error when a
/// part has no Laurent-polynomial inverse.
Scheme invert(const Scheme& s);

/// One line per step: "step 1: [..] then [..]".
std::string dump(const Scheme& s);

}  // namespace nsdwt
