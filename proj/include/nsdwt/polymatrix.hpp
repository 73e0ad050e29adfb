#pragma once

#include <Eigen/Core>

#include <string>

#include "nsdwt/poly2.hpp"

namespace Eigen {

template <>
struct NumTraits<nsdwt::LaurentPoly2> : GenericNumTraits<nsdwt::LaurentPoly2> {
    using Real = nsdwt::LaurentPoly2;
    using NonInteger = nsdwt::LaurentPoly2;
    using Nested = nsdwt::LaurentPoly2;
    using Literal = nsdwt::LaurentPoly2;

    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 20,
        MulCost = 50,
    };

    // Exact arithmetic: no precision notion.
    static inline int digits10() { return 0; }
    static inline int max_digits10() { return 0; }
};

}  // namespace Eigen

namespace nsdwt {

/// Subband index within a quad; rows and columns of every PolyMatrix4
/// follow this order.
enum Subband : int { LL = 0, HL = 1, LH = 2, HH = 3 };

inline constexpr const char* subband_name(int c) {
    constexpr const char* names[] = {"LL", "HL", "LH", "HH"};
    return names[c];
}

/// One computation step acting on the (LL, HL, LH, HH) quadruple. Row r
/// lists the polynomials whose sum produces output subband r.
template <typename Scalar>
using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;

using PolyMatrix4 = Matrix4<LaurentPoly2>;

PolyMatrix4 poly_identity();

/// Entry-wise transpose of the polynomials (not the matrix).
PolyMatrix4 transpose_polys(const PolyMatrix4& m);

/// Every entry is a constant polynomial.
bool is_constant_only(const PolyMatrix4& m);

/// Only diagonal entries are nonzero.
bool is_diagonal(const PolyMatrix4& m);

/// Exact determinant by cofactor expansion.
LaurentPoly2 determinant(const PolyMatrix4& m);

/// Exact inverse. The determinant must be a single monomial c*zm^a*zn^b,
/// otherwise the inverse is not a Laurent polynomial matrix and
/// std::domain_error is thrown.
PolyMatrix4 inverse(const PolyMatrix4& m);

/// Number of multiply-accumulates for one quad: every monomial counts once
/// except a constant 1 on the diagonal, which is a plain copy.
int count_macs(const PolyMatrix4& m);

/// Number of diagonal entries that are exactly 1.
int count_copies(const PolyMatrix4& m);

/// "[a, b, c, d; e, f, g, h; ...]" with entries in poly text form.
std::string render(const PolyMatrix4& m);

/// Lowers the polynomials to a numeric scalar matrix by evaluating each
/// entry's coefficient sum; only meaningful for constant-only matrices.
template <typename Scalar>
Matrix4<Scalar> lower_constant(const PolyMatrix4& m) {
    Matrix4<Scalar> out;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            out(r, c) = static_cast<Scalar>(m(r, c).constant_term().to_double());
        }
    }
    return out;
}

}  // namespace nsdwt
