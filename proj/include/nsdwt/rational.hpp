#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace nsdwt {

/// Exact rational number, always kept in lowest terms with a positive
/// denominator. Backed by GMP's mpq_class.
class Rational {
public:
    Rational() = default;
    Rational(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
    Rational(long numerator, long denominator);
    explicit Rational(const mpq_class& value);

    /// Parses "n", "-n/d", or an exact decimal such as "-1.586134342059924".
    /// Throws std::invalid_argument on malformed input or a zero denominator.
    static Rational parse(std::string_view text);

    [[nodiscard]] mpz_class numerator() const { return value_.get_num(); }
    [[nodiscard]] mpz_class denominator() const { return value_.get_den(); }
    [[nodiscard]] const mpq_class& raw() const { return value_; }

    [[nodiscard]] bool is_zero() const { return sgn(value_) == 0; }
    [[nodiscard]] bool is_one() const { return value_ == 1; }
    [[nodiscard]] int sign() const { return sgn(value_); }

    [[nodiscard]] double to_double() const { return value_.get_d(); }
    [[nodiscard]] Rational reciprocal() const;

    /// "3", "-1/2".
    [[nodiscard]] std::string str() const;

    Rational& operator+=(const Rational& rhs);
    Rational& operator-=(const Rational& rhs);
    Rational& operator*=(const Rational& rhs);
    Rational& operator/=(const Rational& rhs);

    friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
    friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
    friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
    friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }
    friend Rational operator-(const Rational& x);

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
    mpq_class value_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace nsdwt
