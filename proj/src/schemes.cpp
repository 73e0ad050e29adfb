#include "nsdwt/schemes.hpp"

#include <sstream>
#include <stdexcept>

namespace nsdwt {

std::string_view scheme_name(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::SeparableLifting:
            return "sep-lifting";
        case SchemeKind::SeparableConvolution:
            return "sep-conv";
        case SchemeKind::NonSeparableLifting:
            return "ns-lifting";
        case SchemeKind::AdaptedNonSeparable:
            return "ns-adapted";
    }
    return "?";
}

SchemeKind parse_scheme_kind(std::string_view name) {
    for (SchemeKind k : kAllSchemes) {
        if (scheme_name(k) == name) {
            return k;
        }
    }
    throw std::invalid_argument("unknown scheme '" + std::string(name) +
                                "' (expected sep-lifting, sep-conv, ns-lifting or ns-adapted)");
}

Step::Step(PolyMatrix4 single) { parts_.push_back(std::move(single)); }

Step::Step(std::vector<PolyMatrix4> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) {
        throw std::invalid_argument("step without parts");
    }
    for (std::size_t i = 1; i < parts_.size(); ++i) {
        if (!is_constant_only(parts_[i])) {
            throw std::invalid_argument("composite step part " + std::to_string(i) +
                                        " reads neighbouring quads; only the first part may");
        }
    }
}

Step Step::unchecked(std::vector<PolyMatrix4> parts) { return Step(std::move(parts), NoCheck{}); }

Step Step::fused(std::vector<PolyMatrix4> factors) {
    if (factors.empty()) {
        throw std::invalid_argument("fused step without factors");
    }
    bool horizontal = false;
    bool vertical = false;
    for (const PolyMatrix4& f : factors) {
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) {
                horizontal = horizontal || !f(r, c).is_vertical();
                vertical = vertical || !f(r, c).is_horizontal();
            }
        }
    }
    if (horizontal && vertical) {
        throw std::invalid_argument("fused step factors must all act along one axis");
    }
    PolyMatrix4 product = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) {
        product = (factors[i] * product).eval();
    }
    Step step(std::vector<PolyMatrix4>{std::move(product)}, NoCheck{});
    step.factors_ = std::move(factors);
    step.factor_axis_ = horizontal ? 0 : (vertical ? 1 : -1);
    return step;
}

PolyMatrix4 Step::product() const {
    PolyMatrix4 m = parts_.front();
    for (std::size_t i = 1; i < parts_.size(); ++i) {
        m = (parts_[i] * m).eval();
    }
    return m;
}

bool operator==(const Step& a, const Step& b) {
    if (a.parts_.size() != b.parts_.size() || a.factors_.size() != b.factors_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.factors_.size(); ++i) {
        if (a.factors_[i] != b.factors_[i]) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.parts_.size(); ++i) {
        if (a.parts_[i] != b.parts_[i]) {
            return false;
        }
    }
    return true;
}

PolyMatrix4 Scheme::product() const {
    PolyMatrix4 m = poly_identity();
    for (const Step& step : steps) {
        m = (step.product() * m).eval();
    }
    return m;
}

std::string EquivalenceVerdict::describe() const {
    if (equal) {
        return "exact-equal";
    }
    std::ostringstream os;
    os << "mismatch at (" << subband_name(row) << ", " << subband_name(col) << "): " << lhs.str() << " vs "
       << rhs.str();
    return os.str();
}

namespace {

PolyMatrix4 zero_matrix() { return PolyMatrix4::Constant(LaurentPoly2()); }

}  // namespace

PolyMatrix4 horizontal_predict(const LaurentPoly2& p) {
    PolyMatrix4 m = poly_identity();
    m(HL, LL) = p;
    m(HH, LH) = p;
    return m;
}

PolyMatrix4 vertical_predict(const LaurentPoly2& p_transposed) {
    PolyMatrix4 m = poly_identity();
    m(LH, LL) = p_transposed;
    m(HH, HL) = p_transposed;
    return m;
}

PolyMatrix4 horizontal_update(const LaurentPoly2& u) {
    PolyMatrix4 m = poly_identity();
    m(LL, HL) = u;
    m(LH, HH) = u;
    return m;
}

PolyMatrix4 vertical_update(const LaurentPoly2& u_transposed) {
    PolyMatrix4 m = poly_identity();
    m(LL, LH) = u_transposed;
    m(HL, HH) = u_transposed;
    return m;
}

PolyMatrix4 spatial_predict(const LaurentPoly2& p) {
    const LaurentPoly2 pt = transpose(p);
    PolyMatrix4 m = poly_identity();
    m(HL, LL) = p;
    m(LH, LL) = pt;
    m(HH, LL) = p * pt;
    m(HH, HL) = pt;
    m(HH, LH) = p;
    return m;
}

PolyMatrix4 spatial_update(const LaurentPoly2& u) {
    const LaurentPoly2 ut = transpose(u);
    PolyMatrix4 m = poly_identity();
    m(LL, HL) = u;
    m(LL, LH) = ut;
    m(LL, HH) = u * ut;
    m(HL, HH) = ut;
    m(LH, HH) = u;
    return m;
}

PolyMatrix4 horizontal_scaling(const Rational& low, const Rational& high) {
    PolyMatrix4 m = zero_matrix();
    m(LL, LL) = low;
    m(HL, HL) = high;
    m(LH, LH) = low;
    m(HH, HH) = high;
    return m;
}

PolyMatrix4 vertical_scaling(const Rational& low, const Rational& high) {
    PolyMatrix4 m = zero_matrix();
    m(LL, LL) = low;
    m(HL, HL) = low;
    m(LH, LH) = high;
    m(HH, HH) = high;
    return m;
}

PolyMatrix4 scaling_2d(const Rational& low, const Rational& high) {
    return (vertical_scaling(low, high) * horizontal_scaling(low, high)).eval();
}

namespace {

Scheme start_scheme(SchemeKind kind, const WaveletSpec& w) {
    validate(w);
    Scheme s;
    s.name = std::string(scheme_name(kind));
    s.wavelet = w;
    return s;
}

void append_scaling(Scheme& s, const WaveletSpec& w) {
    if (w.is_scaled()) {
        s.steps.emplace_back(scaling_2d(w.scale_low, w.scale_high));
    }
}

// Builds an adapted composite from the full spatial matrix builder and the
// two constant separable halves; identity parts are dropped.
template <typename Spatial, typename Horizontal, typename Vertical>
Step adapted_step(const LaurentPoly2& filter, Spatial spatial, Horizontal horizontal, Vertical vertical) {
    auto [constant, rest] = split_constant(filter);
    std::vector<PolyMatrix4> parts;
    const PolyMatrix4 identity = poly_identity();
    for (PolyMatrix4 m : {spatial(rest), horizontal(constant), vertical(transpose(constant))}) {
        if (m != identity) {
            parts.push_back(std::move(m));
        }
    }
    if (parts.empty()) {
        parts.push_back(identity);
    }
    return Step(std::move(parts));
}

}  // namespace

Scheme build_separable_lifting(const WaveletSpec& w) {
    Scheme s = start_scheme(SchemeKind::SeparableLifting, w);
    for (const auto& [p, u] : w.pairs) {
        s.steps.emplace_back(horizontal_predict(p));
        s.steps.emplace_back(vertical_predict(transpose(p)));
        s.steps.emplace_back(horizontal_update(u));
        s.steps.emplace_back(vertical_update(transpose(u)));
    }
    append_scaling(s, w);
    return s;
}

Scheme build_nonseparable_lifting(const WaveletSpec& w) {
    Scheme s = start_scheme(SchemeKind::NonSeparableLifting, w);
    for (const auto& [p, u] : w.pairs) {
        s.steps.emplace_back(spatial_predict(p));
        s.steps.emplace_back(spatial_update(u));
    }
    append_scaling(s, w);
    return s;
}

Scheme build_adapted_nonseparable(const WaveletSpec& w) {
    Scheme s = start_scheme(SchemeKind::AdaptedNonSeparable, w);
    for (const auto& [p, u] : w.pairs) {
        s.steps.push_back(adapted_step(p, spatial_predict, horizontal_predict, vertical_predict));
        s.steps.push_back(adapted_step(u, spatial_update, horizontal_update, vertical_update));
    }
    append_scaling(s, w);
    return s;
}

Scheme build_separable_convolution(const WaveletSpec& w) {
    Scheme s = start_scheme(SchemeKind::SeparableConvolution, w);
    std::vector<PolyMatrix4> horizontal;
    std::vector<PolyMatrix4> vertical;
    for (const auto& [p, u] : w.pairs) {
        horizontal.push_back(horizontal_predict(p));
        horizontal.push_back(horizontal_update(u));
        vertical.push_back(vertical_predict(transpose(p)));
        vertical.push_back(vertical_update(transpose(u)));
    }
    if (w.is_scaled()) {
        horizontal.push_back(horizontal_scaling(w.scale_low, w.scale_high));
        vertical.push_back(vertical_scaling(w.scale_low, w.scale_high));
    }
    s.steps.push_back(Step::fused(std::move(horizontal)));
    s.steps.push_back(Step::fused(std::move(vertical)));
    return s;
}

Scheme build_scheme(SchemeKind kind, const WaveletSpec& w) {
    switch (kind) {
        case SchemeKind::SeparableLifting:
            return build_separable_lifting(w);
        case SchemeKind::SeparableConvolution:
            return build_separable_convolution(w);
        case SchemeKind::NonSeparableLifting:
            return build_nonseparable_lifting(w);
        case SchemeKind::AdaptedNonSeparable:
            return build_adapted_nonseparable(w);
    }
    throw std::invalid_argument("unknown scheme kind");
}

EquivalenceVerdict verify_equivalence(const Scheme& a, const Scheme& b) {
    const PolyMatrix4 ma = a.product();
    const PolyMatrix4 mb = b.product();
    EquivalenceVerdict v;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            if (ma(r, c) != mb(r, c)) {
                v.row = r;
                v.col = c;
                v.lhs = ma(r, c);
                v.rhs = mb(r, c);
                return v;
            }
        }
    }
    v.equal = true;
    return v;
}

OpCount count_ops(const Scheme& s) {
    OpCount ops;
    ops.steps = static_cast<int>(s.steps.size());
    for (const Step& step : s.steps) {
        for (const PolyMatrix4& part : step.parts()) {
            ops.macs_per_quad += count_macs(part);
            ops.copies_per_quad += count_copies(part);
        }
    }
    return ops;
}

namespace {

Step invert_step(const Step& step) {
    if (!step.factors().empty()) {
        std::vector<PolyMatrix4> factors;
        for (auto it = step.factors().rbegin(); it != step.factors().rend(); ++it) {
            factors.push_back(inverse(*it));
        }
        return Step::fused(std::move(factors));
    }
    const auto& parts = step.parts();
    const PolyMatrix4 lead_inverse = inverse(parts.front());
    if (parts.size() == 1) {
        return Step(lead_inverse);
    }
    // step = C_k ... C_1 X, so step^-1 = X^-1 C_1^-1 ... C_k^-1 = D' C_k^-1 ... C_1^-1
    // with D = C_1^-1 ... C_k^-1 and D' = D^-1 X^-1 D applied first.
    std::vector<PolyMatrix4> constant_inverses;
    PolyMatrix4 d = poly_identity();
    for (std::size_t i = 1; i < parts.size(); ++i) {
        PolyMatrix4 ci = inverse(parts[i]);
        d = (d * ci).eval();
        constant_inverses.push_back(std::move(ci));
    }
    const PolyMatrix4 d_inverse = inverse(d);
    std::vector<PolyMatrix4> out;
    out.push_back((d_inverse * lead_inverse * d).eval());
    for (auto it = constant_inverses.rbegin(); it != constant_inverses.rend(); ++it) {
        out.push_back(*it);
    }
    return Step(std::move(out));
}

}  // namespace

Scheme invert(const Scheme& s) {
    Scheme inv;
    inv.name = s.name;
    inv.wavelet = s.wavelet;
    inv.inverse = !s.inverse;
    for (auto it = s.steps.rbegin(); it != s.steps.rend(); ++it) {
        inv.steps.push_back(invert_step(*it));
    }
    return inv;
}

std::string dump(const Scheme& s) {
    std::ostringstream os;
    for (std::size_t i = 0; i < s.steps.size(); ++i) {
        os << "step " << i + 1 << ":";
        const auto& parts = s.steps[i].parts();
        for (std::size_t j = 0; j < parts.size(); ++j) {
            os << (j == 0 ? " " : " then ") << render(parts[j]);
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace nsdwt
