#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "nsdwt/rational.hpp"

namespace nsdwt {

/// Exponent pair of the monomial zm^a * zn^b. `a` is the horizontal offset
/// in quads, `b` the vertical one. Ordered by (b, a) so that iteration runs
/// row by row, left to right.
struct Exponent {
    int a = 0;
    int b = 0;

    friend bool operator==(const Exponent&, const Exponent&) = default;
    friend std::strong_ordering operator<=>(const Exponent& x, const Exponent& y) {
        if (auto c = x.b <=> y.b; c != 0) {
            return c;
        }
        return x.a <=> y.a;
    }
};

/// Sparse bivariate Laurent polynomial in zm (horizontal) and zn (vertical)
/// with exact rational coefficients. Zero coefficients are never stored;
/// the zero polynomial has no terms.
class LaurentPoly2 {
public:
    using Terms = std::map<Exponent, Rational>;

    LaurentPoly2() = default;
    // Implicit so that Eigen can build Scalar(0) and Scalar(1).
    LaurentPoly2(long constant);            // NOLINT(google-explicit-constructor)
    LaurentPoly2(const Rational& constant);  // NOLINT(google-explicit-constructor)

    static LaurentPoly2 monomial(const Rational& coeff, int a, int b = 0);
    static LaurentPoly2 zm(int power = 1) { return monomial(Rational(1), power, 0); }
    static LaurentPoly2 zn(int power = 1) { return monomial(Rational(1), 0, power); }

    [[nodiscard]] const Terms& terms() const { return terms_; }
    [[nodiscard]] std::size_t term_count() const { return terms_.size(); }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    [[nodiscard]] bool is_constant() const;
    [[nodiscard]] bool is_horizontal() const;
    [[nodiscard]] bool is_vertical() const;
    [[nodiscard]] bool is_one() const;
    /// Single nonzero term (a unit of the Laurent ring over the rationals).
    [[nodiscard]] bool is_monomial() const { return terms_.size() == 1; }

    /// Coefficient of zm^a zn^b (zero when absent).
    [[nodiscard]] Rational coeff(int a, int b = 0) const;
    [[nodiscard]] Rational constant_term() const { return coeff(0, 0); }

    LaurentPoly2& operator+=(const LaurentPoly2& rhs);
    LaurentPoly2& operator-=(const LaurentPoly2& rhs);
    LaurentPoly2& operator*=(const LaurentPoly2& rhs);

    friend LaurentPoly2 operator+(LaurentPoly2 p, const LaurentPoly2& q) { return p += q; }
    friend LaurentPoly2 operator-(LaurentPoly2 p, const LaurentPoly2& q) { return p -= q; }
    friend LaurentPoly2 operator*(const LaurentPoly2& p, const LaurentPoly2& q);
    friend LaurentPoly2 operator-(const LaurentPoly2& p);

    friend bool operator==(const LaurentPoly2& p, const LaurentPoly2& q) { return p.terms_ == q.terms_; }

    /// Textual form such as "-1/2 -1/2*zm" or "1/4*zm^-1*zn".
    [[nodiscard]] std::string str() const;

private:
    void accumulate(const Exponent& e, const Rational& c);

    Terms terms_;
};

LaurentPoly2 add(const LaurentPoly2& p, const LaurentPoly2& q);
LaurentPoly2 mul(const LaurentPoly2& p, const LaurentPoly2& q);

/// Swaps the horizontal and vertical variables.
LaurentPoly2 transpose(const LaurentPoly2& p);

/// p = p0 + p1 where p0 is the constant term alone.
std::pair<LaurentPoly2, LaurentPoly2> split_constant(const LaurentPoly2& p);

/// Polyphase split of a horizontal polynomial:
/// g(z) = g_even(z^2) + z * g_odd(z^2). Throws std::invalid_argument when g
/// has any zn dependence.
std::pair<LaurentPoly2, LaurentPoly2> even_odd_split(const LaurentPoly2& g);

/// Inverse of even_odd_split.
LaurentPoly2 even_odd_merge(const LaurentPoly2& g_even, const LaurentPoly2& g_odd);

inline std::size_t term_count(const LaurentPoly2& p) { return p.term_count(); }

/// Parse error carrying a 1-based column within the parsed text.
class PolyParseError : public std::runtime_error {
public:
    PolyParseError(const std::string& what, std::size_t column)
        : std::runtime_error(what), column_(column) {}
    [[nodiscard]] std::size_t column() const { return column_; }

private:
    std::size_t column_;
};

/// Parses the textual form produced by LaurentPoly2::str(). Whitespace is
/// ignored; '*' between coefficient and variables is optional; exponents may
/// be written zm^-1 or zm^(-1); coefficients may be integers, fractions, or
/// exact decimals.
LaurentPoly2 parse_poly(std::string_view text);

std::ostream& operator<<(std::ostream& os, const LaurentPoly2& p);

}  // namespace nsdwt
