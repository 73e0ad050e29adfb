#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>

#include <unistd.h>

#include "nsdwt/imageio.hpp"
#include "support.hpp"

using namespace nsdwt;
using namespace nsdwt::imageio;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("nsdwt_imageio_" + std::to_string(::getpid()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path operator/(const char* name) const { return path / name; }
};

void write_bytes(const fs::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary);
    out << bytes;
}

}  // namespace

TEST_CASE("f32le") {
    TempDir dir;
    SUBCASE("four values with a 2x2 size") {
        const float values[] = {1.0f, -2.5f, 0.125f, 3.0e7f};
        std::string bytes(reinterpret_cast<const char*>(values), sizeof(values));
        write_bytes(dir / "a.f32", bytes);
        const RawImage img = load(dir / "a.f32", Format::F32LE, 2, 2);
        CHECK(img.width == 2);
        CHECK(img.height == 2);
        CHECK(img.at(1, 0) == -2.5f);
        CHECK(img.at(1, 1) == 3.0e7f);
    }
    SUBCASE("byte count mismatch") {
        write_bytes(dir / "b.f32", std::string(12, '\0'));
        CHECK_THROWS_AS(load(dir / "b.f32", Format::F32LE, 2, 2), ImageError);
    }
    SUBCASE("missing dimensions") {
        write_bytes(dir / "c.f32", std::string(16, '\0'));
        CHECK_THROWS_AS(load(dir / "c.f32", Format::F32LE), ImageError);
    }
    SUBCASE("NaN rejected") {
        const float values[] = {0.0f, std::numeric_limits<float>::quiet_NaN()};
        write_bytes(dir / "d.f32", std::string(reinterpret_cast<const char*>(values), sizeof(values)));
        CHECK_THROWS_AS(load(dir / "d.f32", Format::F32LE, 2, 1), ImageError);
    }
    SUBCASE("store then load is bit-identical") {
        const QuadField tile = testing::random_tile(10, 6, 3);
        RawImage img = from_tile(tile);
        img.pixels[5] = -0.0f;
        img.pixels[7] = std::numeric_limits<float>::denorm_min();
        store(img, dir / "e.f32", Format::F32LE);
        const RawImage back = load(dir / "e.f32", Format::F32LE, 10, 6);
        CHECK(std::memcmp(back.pixels.data(), img.pixels.data(), img.pixels.size() * 4) == 0);
        CHECK(fs::file_size(dir / "e.f32") == 240);
    }
    CHECK_THROWS_AS(load(dir / "missing.f32", Format::F32LE, 2, 2), ImageError);
}

TEST_CASE("pgm") {
    TempDir dir;
    SUBCASE("all 255 normalizes to one") {
        write_bytes(dir / "a.pgm", std::string("P5\n# comment\n2 2\n255\n") + std::string(4, '\xff'));
        const RawImage img = load(dir / "a.pgm", Format::PGM);
        CHECK(img.width == 2);
        CHECK(std::all_of(img.pixels.begin(), img.pixels.end(), [](float v) { return v == 1.0f; }));
    }
    SUBCASE("malformed headers") {
        write_bytes(dir / "b.pgm", "P2\n2 2\n255\n0 0 0 0");
        CHECK_THROWS_AS(load(dir / "b.pgm", Format::PGM), ImageError);
        write_bytes(dir / "c.pgm", "P5\n2 x\n255\n");
        CHECK_THROWS_AS(load(dir / "c.pgm", Format::PGM), ImageError);
        write_bytes(dir / "d.pgm", "P5\n2 2\n65535\n" + std::string(8, '\0'));
        CHECK_THROWS_AS(load(dir / "d.pgm", Format::PGM), ImageError);
        write_bytes(dir / "e.pgm", "P5\n2 2\n255\n" + std::string(3, '\0'));
        CHECK_THROWS_AS(load(dir / "e.pgm", Format::PGM), ImageError);
    }
    SUBCASE("export clamps then quantizes") {
        const RawImage img{4, 1, {-1.0f, 0.5f, 1.0f, 7.0f}};
        store(img, dir / "f.pgm", Format::PGM);
        const RawImage back = load(dir / "f.pgm", Format::PGM);
        CHECK(back.pixels[0] == 0.0f);
        CHECK(back.pixels[1] == doctest::Approx(128.0f / 255.0f));
        CHECK(back.pixels[2] == 1.0f);
        CHECK(back.pixels[3] == 1.0f);
    }
}

TEST_CASE("format selection") {
    CHECK(format_for("x/y.PGM") == Format::PGM);
    CHECK(format_for("x/y.raw") == Format::F32LE);
    CHECK(parse_format("pgm") == Format::PGM);
    CHECK_THROWS_AS(parse_format("png"), std::invalid_argument);
}

TEST_CASE("layouts") {
    const QuadField tile = testing::random_tile(8, 8, 9);
    const RawImage mosaic = to_mallat_image(tile);
    CHECK(mosaic.width == 8);
    CHECK(mosaic.height == 8);
    for (int n = 0; n < 4; ++n) {
        for (int m = 0; m < 4; ++m) {
            CHECK(mosaic.at(m, n) == tile.at(m, n, LL));
            CHECK(mosaic.at(4 + m, n) == tile.at(m, n, HL));
            CHECK(mosaic.at(m, 4 + n) == tile.at(m, n, LH));
            CHECK(mosaic.at(4 + m, 4 + n) == tile.at(m, n, HH));
        }
    }
    CHECK(from_mallat_image(mosaic) == tile);
    CHECK(to_tile(from_tile(tile)) == tile);
    CHECK_THROWS_AS(from_mallat_image(RawImage{3, 2, std::vector<float>(6)}), ImageError);
}
