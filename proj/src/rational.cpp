#include "nsdwt/rational.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>

namespace nsdwt {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (std::isdigit(static_cast<unsigned char>(c)) == 0) {
            return false;
        }
    }
    return true;
}

}  // namespace

Rational::Rational(long numerator, long denominator) {
    if (denominator == 0) {
        throw std::invalid_argument("rational with zero denominator");
    }
    value_ = mpq_class(numerator, denominator);
    value_.canonicalize();
}

Rational::Rational(const mpq_class& value) : value_(value) { value_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    mpq_class value;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        auto num = body.substr(0, slash);
        auto den = body.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) {
            throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
        }
        mpz_class d(std::string(den), 10);
        if (d == 0) {
            throw std::invalid_argument("rational with zero denominator");
        }
        value = mpq_class(mpz_class(std::string(num), 10), d);
    } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
        auto whole = body.substr(0, dot);
        auto frac = body.substr(dot + 1);
        if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
            (!frac.empty() && !all_digits(frac))) {
            throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
        }
        std::string digits = std::string(whole) + std::string(frac);
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
        value = mpq_class(mpz_class(digits, 10), scale);
    } else {
        if (!all_digits(body)) {
            throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
        }
        value = mpq_class(mpz_class(std::string(body), 10));
    }
    value.canonicalize();
    if (negative) {
        value = -value;
    }
    return Rational(value);
}

Rational Rational::reciprocal() const {
    if (is_zero()) {
        throw std::domain_error("reciprocal of zero");
    }
    return Rational(mpq_class(1) / value_);
}

std::string Rational::str() const { return value_.get_str(10); }

Rational& Rational::operator+=(const Rational& rhs) {
    value_ += rhs.value_;
    return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
    value_ -= rhs.value_;
    return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
    value_ *= rhs.value_;
    return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
    if (rhs.is_zero()) {
        throw std::domain_error("division by zero");
    }
    value_ /= rhs.value_;
    return *this;
}

Rational operator-(const Rational& x) { return Rational(mpq_class(-x.value_)); }

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.value_, b.value_);
    if (c < 0) {
        return std::strong_ordering::less;
    }
    if (c > 0) {
        return std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace nsdwt
