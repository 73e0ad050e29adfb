#include "nsdwt/wavelets.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace nsdwt {

void validate(const WaveletSpec& w) {
    if (w.pairs.empty()) {
        throw WaveletInvariantError("wavelet '" + w.name + "' has no lifting pairs");
    }
    for (std::size_t k = 0; k < w.pairs.size(); ++k) {
        const auto& pair = w.pairs[k];
        const std::string where = "wavelet '" + w.name + "' pair " + std::to_string(k + 1);
        if (pair.predict.is_zero()) {
            throw WaveletInvariantError(where + ": predict polynomial is zero");
        }
        if (pair.update.is_zero()) {
            throw WaveletInvariantError(where + ": update polynomial is zero");
        }
        if (!pair.predict.is_horizontal() || !pair.update.is_horizontal()) {
            throw WaveletInvariantError(where + ": lifting polynomials must depend on zm only");
        }
    }
    if (w.scale_low.is_zero() || w.scale_high.is_zero()) {
        throw WaveletInvariantError("wavelet '" + w.name + "': scaling factors must be nonzero");
    }
}

std::vector<std::string> builtin_names() { return {"cdf53", "cdf97"}; }

namespace {

LaurentPoly2 two_tap(const Rational& c, int other) {
    return LaurentPoly2::monomial(c, 0) + LaurentPoly2::monomial(c, other);
}

WaveletSpec make_cdf53() {
    WaveletSpec w;
    w.name = "cdf53";
    w.pairs.push_back({two_tap(Rational(-1, 2), 1), two_tap(Rational(1, 4), -1)});
    return w;
}

WaveletSpec make_cdf97() {
    // 16 significant digits of the irrational lifting constants
    const Rational alpha = Rational::parse("-1.586134342059924");
    const Rational beta = Rational::parse("-0.052980118572961");
    const Rational gamma = Rational::parse("0.882911075530934");
    const Rational delta = Rational::parse("0.443506852043971");
    const Rational zeta = Rational::parse("1.230174104914001");
    WaveletSpec w;
    w.name = "cdf97";
    w.pairs.push_back({two_tap(alpha, 1), two_tap(beta, -1)});
    w.pairs.push_back({two_tap(gamma, 1), two_tap(delta, -1)});
    w.scale_low = zeta.reciprocal();
    w.scale_high = zeta;
    return w;
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])) != 0) {
        ++b;
    }
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])) != 0) {
        --e;
    }
    return std::string(s.substr(b, e - b));
}

std::string strip_spaces(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c)) == 0) {
            out += c;
        }
    }
    return out;
}

}  // namespace

WaveletSpec builtin(std::string_view name) {
    if (name == "cdf53") {
        return make_cdf53();
    }
    if (name == "cdf97") {
        return make_cdf97();
    }
    std::string available;
    for (const auto& n : builtin_names()) {
        available += (available.empty() ? "" : ", ") + n;
    }
    throw WaveletNotFound("unknown wavelet '" + std::string(name) + "' (available: " + available + ")");
}

WaveletSpec load_custom(std::string_view text) {
    std::map<int, LaurentPoly2> predicts;
    std::map<int, LaurentPoly2> updates;
    std::optional<Rational> scale_low;
    std::optional<Rational> scale_high;
    std::string name = "custom";

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view raw = text.substr(start, end - start);
        ++line_no;
        start = end + 1;

        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        if (trim(line).empty()) {
            if (end == text.size()) {
                break;
            }
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw WaveletParseError("line " + std::to_string(line_no) + ": expected '<key> = <value>'", line_no, 1);
        }
        const std::string key = strip_spaces(line.substr(0, eq));
        const std::string_view value_view = line.substr(eq + 1);
        const std::size_t value_column = eq + 2;
        auto value_error = [&](const std::string& what, std::size_t column) {
            return WaveletParseError("line " + std::to_string(line_no) + ", column " + std::to_string(column) +
                                         ": " + what,
                                     line_no, column);
        };

        if (key == "name") {
            name = trim(value_view);
            if (name.empty()) {
                throw value_error("empty name", value_column);
            }
        } else if (key == "scale_low" || key == "scale_high") {
            Rational r;
            try {
                r = Rational::parse(strip_spaces(value_view));
            } catch (const std::exception& e) {
                throw value_error(e.what(), value_column);
            }
            (key == "scale_low" ? scale_low : scale_high) = r;
        } else if (key.starts_with("predict[") || key.starts_with("update[")) {
            const bool is_predict = key.starts_with("predict[");
            const std::size_t open = key.find('[');
            if (key.back() != ']') {
                throw value_error("expected ']' in key '" + key + "'", 1);
            }
            const std::string index_text = key.substr(open + 1, key.size() - open - 2);
            int index = 0;
            try {
                std::size_t used = 0;
                index = std::stoi(index_text, &used);
                if (used != index_text.size()) {
                    throw std::invalid_argument(index_text);
                }
            } catch (const std::exception&) {
                throw value_error("bad pair index '" + index_text + "'", 1);
            }
            if (index < 1) {
                throw value_error("pair index must be >= 1", 1);
            }
            LaurentPoly2 p;
            try {
                p = parse_poly(value_view);
            } catch (const PolyParseError& e) {
                throw value_error(e.what(), eq + 1 + e.column());
            }
            auto& slot = is_predict ? predicts : updates;
            if (!slot.emplace(index, p).second) {
                throw value_error("duplicate key '" + key + "'", 1);
            }
        } else {
            throw value_error("unknown key '" + key + "'", 1);
        }
        if (end == text.size()) {
            break;
        }
    }

    WaveletSpec w;
    w.name = name;
    const int pair_count = static_cast<int>(std::max(predicts.size(), updates.size()));
    for (int k = 1; k <= pair_count; ++k) {
        auto p = predicts.find(k);
        auto u = updates.find(k);
        if (p == predicts.end() || u == updates.end()) {
            throw WaveletInvariantError("pair " + std::to_string(k) +
                                        " needs both predict[k] and update[k] (indices are contiguous from 1)");
        }
        w.pairs.push_back({p->second, u->second});
    }
    if (scale_low) {
        w.scale_low = *scale_low;
        w.scale_high = scale_high ? *scale_high : (scale_low->is_zero() ? Rational(0) : scale_low->reciprocal());
    } else if (scale_high) {
        w.scale_high = *scale_high;
        w.scale_low = scale_high->is_zero() ? Rational(0) : scale_high->reciprocal();
    }
    validate(w);
    return w;
}

WaveletSpec load_custom_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open wavelet config '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_custom(buf.str());
}

std::string to_config(const WaveletSpec& w) {
    std::ostringstream os;
    os << "name = " << w.name << '\n';
    for (std::size_t k = 0; k < w.pairs.size(); ++k) {
        os << "predict[" << k + 1 << "] = " << w.pairs[k].predict.str() << '\n';
        os << "update[" << k + 1 << "] = " << w.pairs[k].update.str() << '\n';
    }
    os << "scale_low = " << w.scale_low.str() << '\n';
    os << "scale_high = " << w.scale_high.str() << '\n';
    return os.str();
}

WaveletSpec resolve_wavelet(std::string_view name_or_file) {
    if (name_or_file.starts_with('@')) {
        return load_custom_file(std::filesystem::path(std::string(name_or_file.substr(1))));
    }
    return builtin(name_or_file);
}

}  // namespace nsdwt
