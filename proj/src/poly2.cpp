#include "nsdwt/poly2.hpp"

#include <cctype>
#include <ostream>
#include <sstream>

namespace nsdwt {

LaurentPoly2::LaurentPoly2(long constant) : LaurentPoly2(Rational(constant)) {}

LaurentPoly2::LaurentPoly2(const Rational& constant) {
    if (!constant.is_zero()) {
        terms_.emplace(Exponent{0, 0}, constant);
    }
}

LaurentPoly2 LaurentPoly2::monomial(const Rational& coeff, int a, int b) {
    LaurentPoly2 p;
    if (!coeff.is_zero()) {
        p.terms_.emplace(Exponent{a, b}, coeff);
    }
    return p;
}

bool LaurentPoly2::is_constant() const {
    for (const auto& [e, c] : terms_) {
        if (e.a != 0 || e.b != 0) {
            return false;
        }
    }
    return true;
}

bool LaurentPoly2::is_horizontal() const {
    for (const auto& [e, c] : terms_) {
        if (e.b != 0) {
            return false;
        }
    }
    return true;
}

bool LaurentPoly2::is_vertical() const {
    for (const auto& [e, c] : terms_) {
        if (e.a != 0) {
            return false;
        }
    }
    return true;
}

bool LaurentPoly2::is_one() const {
    return terms_.size() == 1 && terms_.begin()->first == Exponent{0, 0} && terms_.begin()->second.is_one();
}

Rational LaurentPoly2::coeff(int a, int b) const {
    auto it = terms_.find(Exponent{a, b});
    return it == terms_.end() ? Rational() : it->second;
}

void LaurentPoly2::accumulate(const Exponent& e, const Rational& c) {
    if (c.is_zero()) {
        return;
    }
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) {
            terms_.erase(it);
        }
    }
}

LaurentPoly2& LaurentPoly2::operator+=(const LaurentPoly2& rhs) {
    for (const auto& [e, c] : rhs.terms_) {
        accumulate(e, c);
    }
    return *this;
}

LaurentPoly2& LaurentPoly2::operator-=(const LaurentPoly2& rhs) {
    for (const auto& [e, c] : rhs.terms_) {
        accumulate(e, -c);
    }
    return *this;
}

LaurentPoly2& LaurentPoly2::operator*=(const LaurentPoly2& rhs) {
    *this = *this * rhs;
    return *this;
}

LaurentPoly2 operator*(const LaurentPoly2& p, const LaurentPoly2& q) {
    LaurentPoly2 r;
    for (const auto& [ep, cp] : p.terms_) {
        for (const auto& [eq, cq] : q.terms_) {
            r.accumulate(Exponent{ep.a + eq.a, ep.b + eq.b}, cp * cq);
        }
    }
    return r;
}

LaurentPoly2 operator-(const LaurentPoly2& p) {
    LaurentPoly2 r;
    for (const auto& [e, c] : p.terms_) {
        r.terms_.emplace(e, -c);
    }
    return r;
}

LaurentPoly2 add(const LaurentPoly2& p, const LaurentPoly2& q) { return p + q; }
LaurentPoly2 mul(const LaurentPoly2& p, const LaurentPoly2& q) { return p * q; }

LaurentPoly2 transpose(const LaurentPoly2& p) {
    LaurentPoly2 r;
    for (const auto& [e, c] : p.terms()) {
        r += LaurentPoly2::monomial(c, e.b, e.a);
    }
    return r;
}

std::pair<LaurentPoly2, LaurentPoly2> split_constant(const LaurentPoly2& p) {
    LaurentPoly2 p0(p.constant_term());
    return {p0, p - p0};
}

std::pair<LaurentPoly2, LaurentPoly2> even_odd_split(const LaurentPoly2& g) {
    if (!g.is_horizontal()) {
        throw std::invalid_argument("even_odd_split expects a polynomial in zm only, got " + g.str());
    }
    LaurentPoly2 even;
    LaurentPoly2 odd;
    for (const auto& [e, c] : g.terms()) {
        if (e.a % 2 == 0) {
            even += LaurentPoly2::monomial(c, e.a / 2);
        } else {
            odd += LaurentPoly2::monomial(c, (e.a - 1) / 2);
        }
    }
    return {even, odd};
}

LaurentPoly2 even_odd_merge(const LaurentPoly2& g_even, const LaurentPoly2& g_odd) {
    if (!g_even.is_horizontal() || !g_odd.is_horizontal()) {
        throw std::invalid_argument("even_odd_merge expects polynomials in zm only");
    }
    LaurentPoly2 g;
    for (const auto& [e, c] : g_even.terms()) {
        g += LaurentPoly2::monomial(c, 2 * e.a);
    }
    for (const auto& [e, c] : g_odd.terms()) {
        g += LaurentPoly2::monomial(c, 2 * e.a + 1);
    }
    return g;
}

namespace {

void append_variable(std::ostringstream& os, const char* name, int power, bool& first_factor) {
    if (power == 0) {
        return;
    }
    if (!first_factor) {
        os << '*';
    }
    os << name;
    if (power != 1) {
        os << '^' << power;
    }
    first_factor = false;
}

}  // namespace

std::string LaurentPoly2::str() const {
    if (terms_.empty()) {
        return "0";
    }
    std::ostringstream os;
    bool first_term = true;
    for (const auto& [e, c] : terms_) {
        if (!first_term) {
            os << ' ';
        }
        const bool has_vars = e.a != 0 || e.b != 0;
        Rational magnitude = c.sign() < 0 ? -c : c;
        if (c.sign() < 0) {
            os << '-';
        } else if (!first_term) {
            os << '+';
        }
        bool first_factor = true;
        if (!has_vars || !magnitude.is_one()) {
            os << magnitude.str();
            first_factor = false;
        }
        append_variable(os, "zm", e.a, first_factor);
        append_variable(os, "zn", e.b, first_factor);
        first_term = false;
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const LaurentPoly2& p) { return os << p.str(); }

namespace {

class PolyParser {
public:
    explicit PolyParser(std::string_view text) : text_(text) {}

    LaurentPoly2 parse() {
        skip_ws();
        if (at_end()) {
            fail("empty polynomial");
        }
        LaurentPoly2 result;
        bool first = true;
        while (true) {
            skip_ws();
            if (at_end()) {
                break;
            }
            bool negative = false;
            if (peek() == '+' || peek() == '-') {
                negative = peek() == '-';
                ++pos_;
                skip_ws();
            } else if (!first) {
                fail("expected '+' or '-' between terms");
            }
            LaurentPoly2 term = parse_term();
            result += negative ? -term : term;
            first = false;
        }
        return result;
    }

private:
    [[nodiscard]] bool at_end() const { return pos_ >= text_.size(); }
    [[nodiscard]] char peek() const { return text_[pos_]; }

    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek())) != 0) {
            ++pos_;
        }
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw PolyParseError(what + " at column " + std::to_string(pos_ + 1), pos_ + 1);
    }

    LaurentPoly2 parse_term() {
        Rational coeff(1);
        int a = 0;
        int b = 0;
        bool have_factor = false;
        skip_ws();
        if (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) != 0 || peek() == '.')) {
            coeff = parse_number();
            have_factor = true;
        }
        while (true) {
            skip_ws();
            if (at_end()) {
                break;
            }
            std::size_t save = pos_;
            if (peek() == '*') {
                if (!have_factor) {
                    fail("unexpected '*'");
                }
                ++pos_;
                skip_ws();
            }
            if (!at_end() && peek() == 'z') {
                ++pos_;
                if (at_end() || (peek() != 'm' && peek() != 'n')) {
                    fail("unknown variable, expected zm or zn");
                }
                const bool horizontal = peek() == 'm';
                ++pos_;
                int power = 1;
                skip_ws();
                if (!at_end() && peek() == '^') {
                    ++pos_;
                    power = parse_exponent();
                }
                (horizontal ? a : b) += power;
                have_factor = true;
            } else if (pos_ != save) {
                fail("expected variable after '*'");
            } else {
                break;
            }
        }
        if (!have_factor) {
            fail("expected coefficient or variable");
        }
        return LaurentPoly2::monomial(coeff, a, b);
    }

    Rational parse_number() {
        std::size_t start = pos_;
        while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) != 0 || peek() == '.')) {
            ++pos_;
        }
        std::size_t save = pos_;
        skip_ws();
        if (!at_end() && peek() == '/') {
            ++pos_;
            skip_ws();
            std::size_t den_start = pos_;
            while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())) != 0) {
                ++pos_;
            }
            if (den_start == pos_) {
                fail("expected denominator");
            }
            std::string num(text_.substr(start, save - start));
            std::string den(text_.substr(den_start, pos_ - den_start));
            try {
                return Rational::parse(num) / Rational::parse(den);
            } catch (const std::exception& e) {
                pos_ = start;
                fail(e.what());
            }
        }
        pos_ = save;
        try {
            return Rational::parse(text_.substr(start, save - start));
        } catch (const std::exception& e) {
            pos_ = start;
            fail(e.what());
        }
    }

    int parse_exponent() {
        skip_ws();
        bool paren = false;
        if (!at_end() && peek() == '(') {
            paren = true;
            ++pos_;
            skip_ws();
        }
        bool negative = false;
        if (!at_end() && (peek() == '-' || peek() == '+')) {
            negative = peek() == '-';
            ++pos_;
        }
        std::size_t start = pos_;
        long value = 0;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())) != 0) {
            value = value * 10 + (peek() - '0');
            if (value > 1'000'000) {
                fail("exponent out of range");
            }
            ++pos_;
        }
        if (start == pos_) {
            fail("expected integer exponent");
        }
        if (paren) {
            skip_ws();
            if (at_end() || peek() != ')') {
                fail("expected ')'");
            }
            ++pos_;
        }
        return static_cast<int>(negative ? -value : value);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

LaurentPoly2 parse_poly(std::string_view text) { return PolyParser(text).parse(); }

}  // namespace nsdwt
