// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "nsdwt/bench.hpp"
#include "nsdwt/engine.hpp"
#include "nsdwt/oracle.hpp"
#include "nsdwt/schemes.hpp"
#include "support.hpp"

using namespace nsdwt;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<WaveletSpec> builtins() { return {builtin("cdf53"), builtin("cdf97")}; }

constexpr ExtensionMode kModes[] = {ExtensionMode::WholeSampleSymmetric, ExtensionMode::ZeroPad};

Outcome symbolic_equivalence() {
    const auto start = Clock::now();
    std::vector<WaveletSpec> wavelets = builtins();
    std::mt19937 rng(20240601);
    for (int i = 0; i < 50; ++i) {
        wavelets.push_back(testing::random_wavelet(rng));
    }
    int compared = 0;
    for (const WaveletSpec& w : wavelets) {
        std::vector<Scheme> schemes;
        for (SchemeKind k : kAllSchemes) {
            schemes.push_back(build_scheme(k, w));
        }
        for (std::size_t a = 0; a < schemes.size(); ++a) {
            for (std::size_t b = a + 1; b < schemes.size(); ++b) {
                const EquivalenceVerdict v = verify_equivalence(schemes[a], schemes[b]);
                ++compared;
                if (!v.equal) {
                    return {false, w.name + ": " + schemes[a].name + " vs " + schemes[b].name + ": " + v.describe()};
                }
            }
        }
    }
    const double elapsed = seconds_since(start);
    std::ostringstream os;
    os << wavelets.size() << " wavelets, " << compared << " pairwise comparisons exact-equal, " << elapsed
       << " s (limit 10 s)";
    return {elapsed < 10.0, os.str()};
}

Outcome step_counts() {
    struct Row {
        const char* wavelet;
        SchemeKind kind;
        int steps;
    };
    const Row expected[] = {
        {"cdf53", SchemeKind::SeparableLifting, 4},    {"cdf53", SchemeKind::NonSeparableLifting, 2},
        {"cdf53", SchemeKind::AdaptedNonSeparable, 2}, {"cdf53", SchemeKind::SeparableConvolution, 2},
        {"cdf97", SchemeKind::SeparableLifting, 9},    {"cdf97", SchemeKind::NonSeparableLifting, 5},
        {"cdf97", SchemeKind::AdaptedNonSeparable, 5}, {"cdf97", SchemeKind::SeparableConvolution, 2},
    };
    std::ostringstream os;
    bool ok = true;
    for (const Row& r : expected) {
        const int got = count_ops(build_scheme(r.kind, builtin(r.wavelet))).steps;
        os << r.wavelet << '/' << scheme_name(r.kind) << '=' << got << ' ';
        ok = ok && got == r.steps;
    }
    return {ok, os.str() + "(cdf97 lifting counts include one scaling step)"};
}

Outcome mac_ordering() {
    const WaveletSpec w = builtin("cdf53");
    const int sep_lifting = count_ops(build_separable_lifting(w)).macs_per_quad;
    const int adapted = count_ops(build_adapted_nonseparable(w)).macs_per_quad;
    const int ns_lifting = count_ops(build_nonseparable_lifting(w)).macs_per_quad;
    const int sep_conv = count_ops(build_separable_convolution(w)).macs_per_quad;
    std::ostringstream os;
    os << "sep-lifting " << sep_lifting << " < ns-adapted " << adapted << " < ns-lifting " << ns_lifting
       << " < sep-conv " << sep_conv << " (frozen 16, 18, 24, 28)";
    const bool ordered = sep_lifting < adapted && adapted < ns_lifting && ns_lifting < sep_conv;
    const bool frozen = sep_lifting == 16 && adapted == 18 && ns_lifting == 24 && sep_conv == 28;
    return {ordered && frozen, os.str()};
}

Outcome isolation() {
    std::mt19937 rng(4242);
    std::uniform_int_distribution<int> edge(4, 48);
    std::uniform_int_distribution<int> threads(2, 9);
    long structural_violations = 0;
    long cross_band = 0;
    long later_part = 0;
    long inflight = 0;
    for (int run = 0; run < 100; ++run) {
        const WaveletSpec w = run % 3 == 0 ? builtin(run % 2 == 0 ? "cdf53" : "cdf97") : testing::random_wavelet(rng);
        const Scheme s = run % 2 == 0 ? build_adapted_nonseparable(w) : invert(build_adapted_nonseparable(w));
        for (const Step& step : s.steps) {
            for (std::size_t p = 1; p < step.parts().size(); ++p) {
                structural_violations += is_constant_only(step.parts()[p]) ? 0 : 1;
            }
        }
        const ExtensionMode mode = kModes[run % 2];
        const QuadField tile = testing::random_tile(2 * edge(rng), 2 * edge(rng), static_cast<std::uint32_t>(run), mode);
        Transform t(s, threads(rng));
        IsolationTracer tracer;
        QuadField out;
        t.apply_traced(tile, out, tracer);
        const auto report = tracer.analyze();
        cross_band += report.cross_band_in_step_reads;
        later_part += report.later_part_neighbour_reads;
        inflight += report.inflight_reads;
    }
    std::ostringstream os;
    os << "100 traced runs: " << structural_violations << " non-constant later parts, " << cross_band
       << " cross-band in-step reads, " << later_part << " later-part neighbour reads (" << inflight
       << " in-flight reads)";
    return {structural_violations == 0 && cross_band == 0 && later_part == 0 && inflight > 0, os.str()};
}

Outcome reconstruction() {
    const auto start = Clock::now();
    double worst = 0.0;
    std::string worst_case;
    int combos = 0;
    for (const WaveletSpec& w : builtins()) {
        for (SchemeKind k : kAllSchemes) {
            const Scheme s = build_scheme(k, w);
            Transform fwd(s, default_thread_count());
            Transform inv(invert(s), default_thread_count());
            for (ExtensionMode mode : kModes) {
                for (int size : {64, 256}) {
                    for (std::uint32_t seed = 1; seed <= 3; ++seed) {
                        const QuadField tile = testing::random_tile(size, size, seed * 31 + size, mode);
                        const double err = testing::max_abs_diff(inv.apply(fwd.apply(tile)), tile);
                        if (err > worst) {
                            worst = err;
                            worst_case = w.name + "/" + std::string(scheme_name(k)) + "/" +
                                         std::string(extension_name(mode)) + "/" + std::to_string(size);
                        }
                    }
                    ++combos;
                }
            }
        }
    }
    const double elapsed = seconds_since(start);
    std::ostringstream os;
    os << combos << " combinations, max error " << worst << " at " << worst_case << " (tolerance 1e-4), " << elapsed
       << " s (limit 30 s)";
    return {worst < 1e-4 && elapsed < 30.0, os.str()};
}

Outcome oracle_equivalence() {
    const auto start = Clock::now();
    double worst = 0.0;
    std::string worst_case;
    for (const WaveletSpec& w : builtins()) {
        const oracle::FilterBank fb = oracle::filters_from_lifting(w);
        for (std::uint32_t seed = 1; seed <= 5; ++seed) {
            const QuadField tile = testing::random_tile(64, 64, 1000 + seed);
            const Subbands<double> expected =
                oracle::direct_transform(testing::to_plane(tile), fb, ExtensionMode::WholeSampleSymmetric);
            for (SchemeKind k : kAllSchemes) {
                Transform t(build_scheme(k, w), default_thread_count());
                const double err = testing::max_abs_diff(t.apply(tile), expected);
                if (err > worst) {
                    worst = err;
                    worst_case = w.name + "/" + std::string(scheme_name(k));
                }
            }
        }
    }
    const double elapsed = seconds_since(start);
    std::ostringstream os;
    os << "direct filter bank, symmetric extension, 64x64: max error " << worst << " at " << worst_case
       << " (tolerance 1e-3), " << elapsed << " s (limit 30 s)";
    return {worst < 1e-3 && elapsed < 30.0, os.str()};
}

Outcome determinism() {
    const int max_threads = default_thread_count();
    const QuadField tile = testing::random_tile(512, 512, 512);
    int compared = 0;
    for (const WaveletSpec& w : builtins()) {
        for (SchemeKind k : kAllSchemes) {
            const Scheme s = build_scheme(k, w);
            Transform serial(s, 1);
            const QuadField reference = serial.apply(tile);
            for (int threads : {2, 7, max_threads}) {
                Transform t(s, threads);
                const QuadField out = t.apply(tile);
                ++compared;
                if (std::memcmp(out.data().data(), reference.data().data(), out.data().size_bytes()) != 0) {
                    return {false, w.name + "/" + std::string(scheme_name(k)) + " differs at " +
                                       std::to_string(threads) + " threads"};
                }
            }
        }
    }
    return {true, "512x512, threads {1, 2, 7, " + std::to_string(max_threads) + "}: " + std::to_string(compared) +
                      " comparisons byte-identical"};
}

Outcome benchmark_protocol() {
    const int max_threads = default_thread_count();
    const auto start = Clock::now();
    std::size_t rows = 0;
    bool axes_ok = true;
    for (bench::Experiment e : {bench::Experiment::Threads, bench::Experiment::TileSize, bench::Experiment::Image}) {
        bench::BenchConfig cfg;
        cfg.experiment = e;
        cfg.runs = 5;
        if (e == bench::Experiment::TileSize) {
            cfg.size_list = {128, 256, 512, 1024, 2048};
        } else if (e == bench::Experiment::Image) {
            cfg.size_list = {1024, 2048};
        }
        const bench::BenchReport report = bench::run(cfg);
        rows += report.rows.size();
        for (const bench::BenchRow& r : report.rows) {
            axes_ok = axes_ok && !r.skipped && r.runs == 5 && r.median_ns_per_pel > 0.0;
        }
        if (e == bench::Experiment::Threads) {
            axes_ok = axes_ok && report.rows.size() == 4u * static_cast<std::size_t>(max_threads) &&
                      report.rows.front().width == 1024;
        }
    }
    const double smoke = seconds_since(start);

    // Scaling sanity at 2048x2048: max threads against one thread.
    bench::BenchConfig scaling;
    scaling.experiment = bench::Experiment::Threads;
    scaling.runs = 5;
    scaling.size_list = {2048};
    scaling.thread_list = {1, max_threads};
    const bench::BenchReport report = bench::run(scaling);
    std::ostringstream os;
    bool faster = true;
    for (std::size_t i = 0; i + 1 < report.rows.size(); i += 2) {
        const auto& one = report.rows[i];
        const auto& many = report.rows[i + 1];
        os << one.scheme << ' ' << one.median_ns_per_pel << " -> " << many.median_ns_per_pel << "; ";
        faster = faster && many.median_ns_per_pel < one.median_ns_per_pel;
    }
    std::ostringstream head;
    head << "(a) smoke run, runs=5, edges<=2048: " << rows << " rows in " << smoke << " s (limit 300 s) "
         << (axes_ok && smoke < 300.0 ? "ok" : "FAILED") << "; (b) 2048x2048 ns/pel at 1 -> " << max_threads
         << " threads: " << os.str() << (faster ? "ok" : "FAILED");
    if (max_threads == 1) {
        head << " (this machine exposes a single hardware thread, so max threads equals 1)";
    }
    return {axes_ok && smoke < 300.0 && faster, head.str()};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> check;
    };
    const Criterion criteria[] = {
        {1, "symbolic equivalence", symbolic_equivalence},
        {2, "step counts", step_counts},
        {3, "MAC ordering", mac_ordering},
        {4, "adapted-scheme isolation", isolation},
        {5, "perfect reconstruction", reconstruction},
        {6, "oracle equivalence", oracle_equivalence},
        {7, "parallel determinism", determinism},
        {8, "benchmark protocol", benchmark_protocol},
    };
    int failures = 0;
    for (const Criterion& c : criteria) {
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
    return failures == 0 ? 0 : 1;
}
