#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "nsdwt/imageio.hpp"
#include "support.hpp"

using namespace nsdwt;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result dwt(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("nsdwt_cli_" + std::to_string(::getpid()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const char* name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const std::string kFixtures = NSDWT_FIXTURES;

}  // namespace

TEST_CASE("usage errors exit with 2") {
    CHECK(dwt({}).code == 2);
    CHECK(dwt({"transmogrify"}).code == 2);
    CHECK(dwt({"ops", "--wavelet", "haar"}).code == 2);
    CHECK(dwt({"ops", "--scheme", "fast"}).code == 2);
    CHECK(dwt({"forward", "--output", "x"}).code == 2);
    CHECK(dwt({"help"}).code == 2);
    const Result help = dwt({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("forward") != std::string::npos);
}

TEST_CASE("forward and inverse round trip through files") {
    TempDir dir;
    const QuadField tile = testing::random_tile(40, 24, 77);
    imageio::store(imageio::from_tile(tile), dir / "in.f32", imageio::Format::F32LE);

    for (const char* scheme : {"sep-lifting", "sep-conv", "ns-lifting", "ns-adapted"}) {
        for (const char* layout : {"quad", "mallat"}) {
            for (const char* ext : {"symmetric", "zero"}) {
                CAPTURE(scheme);
                CAPTURE(layout);
                CAPTURE(ext);
                const Result f = dwt({"forward", "--input", dir / "in.f32", "--output", dir / "c.f32", "--size", "40x24",
                                      "--scheme", scheme, "--layout", layout, "--extension", ext, "--wavelet",
                                      "cdf97", "--threads", "3"});
                REQUIRE(f.code == 0);
                const Result i = dwt({"inverse", "--input", dir / "c.f32", "--output", dir / "back.f32", "--size",
                                      "40x24", "--scheme", scheme, "--layout", layout, "--extension", ext,
                                      "--wavelet", "cdf97"});
                REQUIRE(i.code == 0);
                const auto back = imageio::load(dir / "back.f32", imageio::Format::F32LE, 40, 24);
                CHECK(testing::max_abs_diff(imageio::to_tile(back), tile) < 1e-4);
            }
        }
    }
}

TEST_CASE("mallat output puts LL in the top-left quadrant") {
    TempDir dir;
    std::vector<float> ones(8 * 8, 0.25f);
    imageio::store({8, 8, ones}, dir / "flat.f32", imageio::Format::F32LE);
    REQUIRE(dwt({"forward", "--input", dir / "flat.f32", "--output", dir / "m.f32", "--size", "8x8", "--layout",
                 "mallat"})
                .code == 0);
    const auto m = imageio::load(dir / "m.f32", imageio::Format::F32LE, 8, 8);
    CHECK(m.at(1, 2) == doctest::Approx(0.25f));
    CHECK(std::abs(m.at(5, 1)) < 1e-6f);
    CHECK(std::abs(m.at(6, 6)) < 1e-6f);
}

TEST_CASE("thread count does not change the output bytes") {
    TempDir dir;
    imageio::store(imageio::from_tile(testing::random_tile(64, 48, 5)), dir / "in.f32", imageio::Format::F32LE);
    REQUIRE(dwt({"forward", "--input", dir / "in.f32", "--output", dir / "t1.f32", "--size", "64x48", "--scheme",
                 "ns-adapted", "--threads", "1"})
                .code == 0);
    REQUIRE(dwt({"forward", "--input", dir / "in.f32", "--output", dir / "t8.f32", "--size", "64x48", "--scheme",
                 "ns-adapted", "--threads", "8"})
                .code == 0);
    CHECK(slurp(dir / "t1.f32") == slurp(dir / "t8.f32"));
}

TEST_CASE("transform input validation") {
    TempDir dir;
    imageio::store({4, 4, std::vector<float>(16, 0.0f)}, dir / "in.f32", imageio::Format::F32LE);
    CHECK(dwt({"forward", "--input", dir / "in.f32", "--output", dir / "o.f32"}).code == 2);  // no --size
    CHECK(dwt({"forward", "--input", dir / "in.f32", "--output", dir / "o.f32", "--size", "4x5"}).code == 2);
    CHECK(dwt({"forward", "--input", dir / "in.f32", "--output", dir / "o.f32", "--size", "four"}).code == 2);
    CHECK(dwt({"forward", "--input", dir / "missing.f32", "--output", dir / "o.f32", "--size", "4x4"}).code == 2);
    CHECK(dwt({"forward", "--input", dir / "in.f32", "--output", dir / "o.f32", "--size", "4x4", "--layout", "zig"})
              .code == 2);
    CHECK(dwt({"forward", "--input", dir / "in.f32", "--output", dir / "o.f32", "--size", "4x4", "--threads", "0"})
              .code == 2);
    CHECK(dwt({"forward", "--input", dir / "in.f32", "--output", dir / "o.f32", "--size", "4x4", "--extension",
               "periodic"})
              .code == 2);
    CHECK_FALSE(fs::exists(dir / "o.f32"));

    // PGM input carries its own size; PGM output is clamped
    imageio::store({4, 4, std::vector<float>(16, 0.5f)}, dir / "in.pgm", imageio::Format::PGM);
    CHECK(dwt({"forward", "--input", dir / "in.pgm", "--output", dir / "o.pgm", "--layout", "mallat"}).code == 0);
    CHECK(imageio::load(dir / "o.pgm", imageio::Format::PGM).width == 4);
}

TEST_CASE("verify") {
    const Result ok = dwt({"verify", "--sizes", "32,64"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("all ") != std::string::npos);
    CHECK(ok.out.find("FAIL") == std::string::npos);

    const Result custom = dwt({"verify", "--wavelet", "@" + kFixtures + "/cdf53_copy.cfg", "--sizes", "32"});
    CHECK(custom.code == 0);
    CHECK(custom.out.find("verify cdf53-copy") == 0);

    const Result bad = dwt({"verify", "--wavelet", "@" + kFixtures + "/sign_error.cfg", "--sizes", "32"});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("vanishing-moment") != std::string::npos);

    CHECK(dwt({"verify", "--sizes", "31"}).code == 2);
    CHECK(dwt({"verify", "--wavelet", "@/nonexistent.cfg"}).code == 2);
}

TEST_CASE("ops") {
    const Result r = dwt({"ops", "--wavelet", "cdf53"});
    CHECK(r.code == 0);
    CHECK(r.out.find("steps                    4            2            2            2") != std::string::npos);
    CHECK(r.out.find("MACs/quad               16           28           24           18") != std::string::npos);

    const Result r97 = dwt({"ops", "--wavelet", "cdf97"});
    CHECK(r97.out.find("steps                    9            2            5            5") != std::string::npos);

    const Result d = dwt({"ops", "--scheme", "ns-lifting", "--dump"});
    CHECK(d.code == 0);
    CHECK(d.out.find("step 1: [1, 0, 0, 0; -1/2 -1/2*zm, 1, 0, 0; -1/2 -1/2*zn, 0, 1, 0;") != std::string::npos);
}

TEST_CASE("bench") {
    TempDir dir;
    const Result r = dwt({"bench", "--experiment", "threads", "--runs", "3", "--warmup", "1", "--threads", "1,2",
                          "--sizes", "64", "--csv", dir / "t.csv"});
    CHECK(r.code == 0);
    CHECK(r.out.find("machine: ") == 0);
    const std::string csv = slurp(dir / "t.csv");
    CHECK(csv.rfind("experiment,scheme,wavelet,threads,width,height,runs,median_ns_per_pel,min_ns_per_pel,"
                    "max_ns_per_pel\n",
                    0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);

    const Result image = dwt({"bench", "--experiment", "image", "--runs", "3", "--warmup", "0", "--edges", "64,128",
                              "--tile", "64", "--scheme", "sep-lifting,ns-lifting", "--csv", dir / "i.csv"});
    CHECK(image.code == 0);
    CHECK(image.out.find("speedup over sep-lifting") != std::string::npos);

    CHECK(dwt({"bench", "--runs", "2"}).code == 2);
    CHECK(dwt({"bench", "--experiment", "tilesize", "--sizes", "65", "--runs", "3"}).code == 2);
    CHECK(dwt({"bench", "--experiment", "power"}).code == 2);

    // the guard compares engine with oracle; filter quality is verify's job
    const Result custom = dwt({"bench", "--experiment", "tilesize", "--runs", "3", "--warmup", "0", "--sizes", "32",
                               "--wavelet", "@" + kFixtures + "/sign_error.cfg"});
    CHECK(custom.code == 0);
}
