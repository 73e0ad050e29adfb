#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "nsdwt/oracle.hpp"
#include "nsdwt/wavelets.hpp"

using namespace nsdwt;

TEST_CASE("builtin lookup") {
    CHECK(builtin_names() == std::vector<std::string>{"cdf53", "cdf97"});
    CHECK(builtin("cdf53").name == "cdf53");
    CHECK_THROWS_AS(builtin("haar"), WaveletNotFound);
    CHECK_THROWS_AS(resolve_wavelet("db4"), WaveletNotFound);
}

TEST_CASE("cdf53 structure") {
    const WaveletSpec w = builtin("cdf53");
    REQUIRE(w.pair_count() == 1);
    CHECK_FALSE(w.is_scaled());
    const LaurentPoly2& p = w.pairs[0].predict;
    const LaurentPoly2& u = w.pairs[0].update;
    CHECK(p == parse_poly("-1/2 - 1/2 zm"));
    CHECK(u == parse_poly("1/4 + 1/4 zm^-1"));
    // exactly one constant and one non-constant term
    auto [p0, p1] = split_constant(p);
    CHECK(p0.term_count() == 1);
    CHECK(p1.term_count() == 1);
}

TEST_CASE("cdf97 structure") {
    const WaveletSpec w = builtin("cdf97");
    REQUIRE(w.pair_count() == 2);
    CHECK(w.is_scaled());
    CHECK(w.scale_low * w.scale_high == Rational(1));
    CHECK(w.pairs[0].predict.coeff(0, 0).to_double() == doctest::Approx(-1.586134342059924));
    CHECK(w.pairs[0].update.coeff(-1, 0).to_double() == doctest::Approx(-0.052980118572961));
    CHECK(w.pairs[1].predict.coeff(1, 0).to_double() == doctest::Approx(0.882911075530934));
    CHECK(w.pairs[1].update.coeff(0, 0).to_double() == doctest::Approx(0.443506852043971));
    CHECK(w.scale_high.to_double() == doctest::Approx(1.230174104914001));
    for (const auto& pair : w.pairs) {
        CHECK(pair.predict.is_horizontal());
        CHECK(pair.update.is_horizontal());
    }
}

TEST_CASE("custom config round trip") {
    const WaveletSpec cdf53 = builtin("cdf53");
    const WaveletSpec loaded = load_custom(R"(
# the 5/3 wavelet written out by hand
name = mine
predict[1] = -1/2 -1/2*zm
update[1]  = 1/4 + 1/4 zm^-1
)");
    CHECK(loaded.name == "mine");
    CHECK(loaded.same_transform(cdf53));

    for (const std::string& name : builtin_names()) {
        const WaveletSpec w = builtin(name);
        CHECK(load_custom(to_config(w)).same_transform(w));
    }
}

TEST_CASE("custom config with three pairs and scaling") {
    const WaveletSpec w = load_custom(R"(
predict[1] = -1 * zm
update[1]  = 1/2
predict[2] = 1/3 + 1/3 zm
update[2]  = -1/4 zm^-1
predict[3] = 2
update[3]  = 1/8 + 1/8 zm^-1
scale_low  = 2
)");
    CHECK(w.pair_count() == 3);
    CHECK(w.scale_low == Rational(2));
    CHECK(w.scale_high == Rational(1, 2));
}

TEST_CASE("custom config errors") {
    CHECK_THROWS_AS(load_custom("predict[1] = 0\nupdate[1] = 1/4\n"), WaveletInvariantError);
    CHECK_THROWS_AS(load_custom("predict[1] = -1/2 zn\nupdate[1] = 1/4\n"), WaveletInvariantError);
    CHECK_THROWS_AS(load_custom("predict[1] = 1\nupdate[1] = 1\nscale_low = 0\n"), std::exception);
    CHECK_THROWS_AS(load_custom("predict[1] = 1\n"), std::exception);
    CHECK_THROWS_AS(load_custom("predict[1] = 1\nupdate[1] = 1\npredict[3] = 1\nupdate[3] = 1\n"),
                    std::exception);
    CHECK_THROWS_AS(load_custom(""), std::exception);

    try {
        load_custom("name = x\npredict[1] = -1/2 + ? zm\nupdate[1] = 1/4\n");
        FAIL("expected parse error");
    } catch (const WaveletParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() > 0);
    }
    try {
        load_custom("name = x\nwibble = 3\n");
        FAIL("expected parse error");
    } catch (const WaveletParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("wavelet files resolve with @") {
    const auto path = std::filesystem::temp_directory_path() / "nsdwt_test_wavelet.cfg";
    {
        std::ofstream out(path);
        out << to_config(builtin("cdf97"));
    }
    CHECK(resolve_wavelet("@" + path.string()).same_transform(builtin("cdf97")));
    std::filesystem::remove(path);
    CHECK_THROWS(resolve_wavelet("@" + path.string()));
}

TEST_CASE("builtin lifting is unimodular and annihilates constants") {
    for (const std::string& name : builtin_names()) {
        const WaveletSpec w = builtin(name);
        // the polyphase matrix has determinant 1, so it is invertible
        const auto poly = oracle::lifting_polyphase(w);
        CHECK(poly(0, 0) * poly(1, 1) - poly(0, 1) * poly(1, 0) == LaurentPoly2(1));
        // a constant signal has no high-band energy away from the edges
        std::vector<double> ones(32, 1.0);
        auto [low, high] = oracle::naive_lifting_1d(ones, w, ExtensionMode::WholeSampleSymmetric);
        for (double h : high) {
            CHECK(std::abs(h) < 1e-9);
        }
    }
}
