#include "nsdwt/oracle.hpp"

#include <stdexcept>

namespace nsdwt::oracle {

namespace {

PolyMatrix2 identity2() {
    PolyMatrix2 m;
    m << LaurentPoly2(1), LaurentPoly2(), LaurentPoly2(), LaurentPoly2(1);
    return m;
}

// Mirror an out-of-range index back into [0, n) one reflection at a time.
long mirror(long i, long n) {
    if (n == 1) {
        return 0;
    }
    while (i < 0 || i >= n) {
        if (i < 0) {
            i = -i;
        }
        if (i >= n) {
            i = 2 * (n - 1) - i;
        }
    }
    return i;
}

double sample(const std::vector<double>& x, long i, ExtensionMode extension) {
    const long n = static_cast<long>(x.size());
    if (i >= 0 && i < n) {
        return x[i];
    }
    if (extension == ExtensionMode::ZeroPad) {
        return 0.0;
    }
    return x[mirror(i, n)];
}

std::vector<std::pair<int, double>> taps(const LaurentPoly2& p) {
    std::vector<std::pair<int, double>> out;
    for (const auto& [e, c] : p.terms()) {
        out.emplace_back(e.a, c.to_double());
    }
    return out;
}

// One analysis stage: returns (low, high) of length x.size() / 2.
std::pair<std::vector<double>, std::vector<double>> analyze(const std::vector<double>& x,
                                                            const std::vector<std::pair<int, double>>& low_taps,
                                                            const std::vector<std::pair<int, double>>& high_taps,
                                                            ExtensionMode extension) {
    const long half = static_cast<long>(x.size()) / 2;
    std::vector<double> low(half);
    std::vector<double> high(half);
    for (long i = 0; i < half; ++i) {
        double l = 0.0;
        double h = 0.0;
        for (const auto& [k, g] : low_taps) {
            l += g * sample(x, 2 * i + k, extension);
        }
        for (const auto& [k, g] : high_taps) {
            h += g * sample(x, 2 * i + k, extension);
        }
        low[i] = l;
        high[i] = h;
    }
    return {low, high};
}

void require_even(const Plane<double>& pixels) {
    if (pixels.rows() <= 0 || pixels.cols() <= 0 || pixels.rows() % 2 != 0 || pixels.cols() % 2 != 0) {
        throw std::invalid_argument("oracle transforms need positive even dimensions");
    }
}

}  // namespace

PolyMatrix2 lifting_polyphase(const WaveletSpec& w) {
    PolyMatrix2 total = identity2();
    for (const auto& [p, u] : w.pairs) {
        PolyMatrix2 predict = identity2();
        predict(1, 0) = p;
        PolyMatrix2 update = identity2();
        update(0, 1) = u;
        total = (update * predict * total).eval();
    }
    PolyMatrix2 scale = identity2();
    scale(0, 0) = w.scale_low;
    scale(1, 1) = w.scale_high;
    return (scale * total).eval();
}

PolyMatrix2 polyphase_from_filters(const FilterBank& fb) {
    auto [low_even, low_odd] = even_odd_split(fb.lowpass);
    auto [high_even, high_odd] = even_odd_split(fb.highpass);
    PolyMatrix2 m;
    m << low_even, low_odd, high_even, high_odd;
    return m;
}

FilterBank filters_from_lifting(const WaveletSpec& w) {
    const PolyMatrix2 t = lifting_polyphase(w);
    return FilterBank{even_odd_merge(t(0, 0), t(0, 1)), even_odd_merge(t(1, 0), t(1, 1))};
}

Subbands<double> direct_transform(const Plane<double>& pixels, const FilterBank& fb, ExtensionMode extension) {
    require_even(pixels);
    const long rows = pixels.rows();
    const long cols = pixels.cols();
    const auto low_taps = taps(fb.lowpass);
    const auto high_taps = taps(fb.highpass);

    // horizontal pass: row_low / row_high are rows x cols/2
    Plane<double> row_low(rows, cols / 2);
    Plane<double> row_high(rows, cols / 2);
    for (long y = 0; y < rows; ++y) {
        std::vector<double> line(cols);
        for (long x = 0; x < cols; ++x) {
            line[x] = pixels(y, x);
        }
        auto [l, h] = analyze(line, low_taps, high_taps, extension);
        for (long i = 0; i < cols / 2; ++i) {
            row_low(y, i) = l[i];
            row_high(y, i) = h[i];
        }
    }

    Subbands<double> out;
    for (auto& p : out) {
        p.resize(rows / 2, cols / 2);
    }
    auto vertical = [&](const Plane<double>& src, Plane<double>& low_out, Plane<double>& high_out) {
        for (long x = 0; x < cols / 2; ++x) {
            std::vector<double> line(rows);
            for (long y = 0; y < rows; ++y) {
                line[y] = src(y, x);
            }
            auto [l, h] = analyze(line, low_taps, high_taps, extension);
            for (long j = 0; j < rows / 2; ++j) {
                low_out(j, x) = l[j];
                high_out(j, x) = h[j];
            }
        }
    };
    vertical(row_low, out[LL], out[LH]);
    vertical(row_high, out[HL], out[HH]);
    return out;
}

std::pair<std::vector<double>, std::vector<double>> naive_lifting_1d(std::span<const double> signal,
                                                                     const WaveletSpec& w,
                                                                     ExtensionMode extension) {
    if (signal.empty() || signal.size() % 2 != 0) {
        throw std::invalid_argument("naive lifting needs a non-empty even-length signal");
    }
    std::vector<double> x(signal.begin(), signal.end());
    const long half = static_cast<long>(x.size()) / 2;
    for (const auto& [p, u] : w.pairs) {
        const auto p_taps = taps(p);
        const auto u_taps = taps(u);
        // predict: odd samples from even neighbours
        for (long i = 0; i < half; ++i) {
            double acc = 0.0;
            for (const auto& [a, c] : p_taps) {
                acc += c * sample(x, 2 * (i + a), extension);
            }
            x[2 * i + 1] += acc;
        }
        // update: even samples from odd neighbours
        for (long i = 0; i < half; ++i) {
            double acc = 0.0;
            for (const auto& [a, c] : u_taps) {
                acc += c * sample(x, 2 * (i + a) + 1, extension);
            }
            x[2 * i] += acc;
        }
    }
    const double sl = w.scale_low.to_double();
    const double sh = w.scale_high.to_double();
    std::vector<double> low(half);
    std::vector<double> high(half);
    for (long i = 0; i < half; ++i) {
        low[i] = sl * x[2 * i];
        high[i] = sh * x[2 * i + 1];
    }
    return {low, high};
}

Subbands<double> naive_lifting_2d(const Plane<double>& pixels, const WaveletSpec& w, ExtensionMode extension) {
    require_even(pixels);
    const long rows = pixels.rows();
    const long cols = pixels.cols();
    Plane<double> row_low(rows, cols / 2);
    Plane<double> row_high(rows, cols / 2);
    for (long y = 0; y < rows; ++y) {
        std::vector<double> line(cols);
        for (long x = 0; x < cols; ++x) {
            line[x] = pixels(y, x);
        }
        auto [l, h] = naive_lifting_1d(line, w, extension);
        for (long i = 0; i < cols / 2; ++i) {
            row_low(y, i) = l[i];
            row_high(y, i) = h[i];
        }
    }
    Subbands<double> out;
    for (auto& p : out) {
        p.resize(rows / 2, cols / 2);
    }
    auto vertical = [&](const Plane<double>& src, Plane<double>& low_out, Plane<double>& high_out) {
        for (long x = 0; x < cols / 2; ++x) {
            std::vector<double> line(rows);
            for (long y = 0; y < rows; ++y) {
                line[y] = src(y, x);
            }
            auto [l, h] = naive_lifting_1d(line, w, extension);
            for (long j = 0; j < rows / 2; ++j) {
                low_out(j, x) = l[j];
                high_out(j, x) = h[j];
            }
        }
    };
    vertical(row_low, out[LL], out[LH]);
    vertical(row_high, out[HL], out[HH]);
    return out;
}

}  // namespace nsdwt::oracle
