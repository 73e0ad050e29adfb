#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "nsdwt/bench.hpp"
#include "nsdwt/engine.hpp"
#include "nsdwt/imageio.hpp"
#include "nsdwt/oracle.hpp"
#include "nsdwt/schemes.hpp"

namespace nsdwt::cli {

namespace {

/// Bad flags or unreadable inputs; mapped to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string wavelet = "cdf53";
    std::string scheme = "ns-adapted";
    int threads = default_thread_count();
    std::string extension = "symmetric";
};

struct TransformOptions {
    Common common;
    std::string input;
    std::string output;
    std::string size;
    std::string format;
    std::string output_format;
    std::string layout = "quad";
};

struct VerifyOptions {
    Common common;
    std::vector<int> sizes = {64, 256};
    std::vector<std::string> extensions = {"symmetric", "zero"};
};

struct OpsOptions {
    std::string wavelet = "cdf53";
    std::string scheme;
    bool dump = false;
};

struct BenchOptions {
    std::string wavelet = "cdf53";
    std::vector<std::string> schemes;
    std::string experiment = "threads";
    int runs = 100;
    int warmup = 3;
    std::vector<int> threads;
    std::vector<int> sizes;
    int tile = 1024;
    std::string extension = "symmetric";
    std::string csv;
    unsigned seed = 1;
};

// --- validation helpers -----------------------------------------------------

WaveletSpec wavelet_or_usage(const std::string& name) {
    try {
        return resolve_wavelet(name);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

SchemeKind scheme_or_usage(const std::string& name) {
    try {
        return parse_scheme_kind(name);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

ExtensionMode extension_or_usage(const std::string& name) {
    try {
        return parse_extension(name);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

std::pair<int, int> parse_size(const std::string& text) {
    const auto x = text.find_first_of("xX");
    int w = 0;
    int h = 0;
    try {
        if (x == std::string::npos) {
            throw std::invalid_argument(text);
        }
        std::size_t used = 0;
        w = std::stoi(text.substr(0, x), &used);
        if (used != x) {
            throw std::invalid_argument(text);
        }
        h = std::stoi(text.substr(x + 1), &used);
        if (used != text.size() - x - 1) {
            throw std::invalid_argument(text);
        }
    } catch (const std::exception&) {
        throw UsageError("--size expects WxH, got '" + text + "'");
    }
    if (w <= 0 || h <= 0) {
        throw UsageError("--size dimensions must be positive");
    }
    return {w, h};
}

imageio::Format format_or_usage(const std::string& explicit_name, const std::string& path) {
    if (explicit_name.empty()) {
        return imageio::format_for(path);
    }
    try {
        return imageio::parse_format(explicit_name);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

void check_threads(int threads) {
    if (threads < 1) {
        throw UsageError("--threads must be positive");
    }
}

// --- forward / inverse ------------------------------------------------------

int cmd_transform(const TransformOptions& o, bool forward_direction, std::ostream& out) {
    const WaveletSpec wavelet = wavelet_or_usage(o.common.wavelet);
    const SchemeKind kind = scheme_or_usage(o.common.scheme);
    const ExtensionMode mode = extension_or_usage(o.common.extension);
    check_threads(o.common.threads);
    if (o.layout != "quad" && o.layout != "mallat") {
        throw UsageError("--layout must be quad or mallat");
    }
    const imageio::Format in_format = format_or_usage(o.format, o.input);
    const imageio::Format out_format = format_or_usage(o.output_format, o.output);
    int width = 0;
    int height = 0;
    if (!o.size.empty()) {
        std::tie(width, height) = parse_size(o.size);
    } else if (in_format == imageio::Format::F32LE) {
        throw UsageError("f32le input needs --size WxH");
    }

    imageio::RawImage image;
    try {
        image = imageio::load(o.input, in_format, width, height);
    } catch (const imageio::ImageError& e) {
        throw UsageError(e.what());
    }
    if (image.width % 2 != 0 || image.height % 2 != 0) {
        throw UsageError("image dimensions must be even, got " + std::to_string(image.width) + "x" +
                         std::to_string(image.height));
    }

    const Scheme scheme = build_scheme(kind, wavelet);
    const bool mallat = o.layout == "mallat";
    QuadField result;
    if (forward_direction) {
        Transform transform(scheme, o.common.threads);
        result = transform.apply(imageio::to_tile(image, mode));
    } else {
        const QuadField coefficients = mallat ? imageio::from_mallat_image(image, mode) : imageio::to_tile(image, mode);
        Transform transform(invert(scheme), o.common.threads);
        result = transform.apply(coefficients);
    }
    const imageio::RawImage stored =
        forward_direction && mallat ? imageio::to_mallat_image(result) : imageio::from_tile(result);
    try {
        imageio::store(stored, o.output, out_format);
    } catch (const imageio::ImageError& e) {
        throw UsageError(e.what());
    }
    out << (forward_direction ? "forward" : "inverse") << ' ' << scheme.name << ' ' << wavelet.name << ' '
        << image.width << 'x' << image.height << " -> " << o.output << '\n';
    return kExitOk;
}

// --- verify -----------------------------------------------------------------

struct CheckResult {
    std::string check;
    std::string scheme;
    std::string mode;
    std::string size;
    bool pass = false;
    std::string detail;
};

QuadField random_tile(int size, std::uint32_t seed, ExtensionMode mode) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<float> dist(0.0f, 1.0f);
    QuadField tile(size / 2, size / 2, mode);
    for (float& v : tile.data()) {
        v = dist(rng);
    }
    return tile;
}

Plane<double> pixels_of(const QuadField& tile) {
    Plane<double> p(tile.pixel_height(), tile.pixel_width());
    for (int y = 0; y < p.rows(); ++y) {
        for (int x = 0; x < p.cols(); ++x) {
            p(y, x) = tile.pixel(x, y);
        }
    }
    return p;
}

// Largest deviation from `expected` over quads at least `margin` away from
// every edge; reports the location through `where`.
double worst_deviation(const QuadField& got, const Subbands<double>& expected, int margin, std::string& where) {
    double worst = 0.0;
    for (int c = 0; c < 4; ++c) {
        for (int n = margin; n < got.height_quads() - margin; ++n) {
            for (int m = margin; m < got.width_quads() - margin; ++m) {
                const double d = std::abs(got.at(m, n, c) - expected[c](n, m));
                if (!(d <= worst)) {
                    worst = d;
                    where = std::string(subband_name(c)) + " quad (" + std::to_string(m) + ", " + std::to_string(n) +
                            ")";
                }
            }
        }
    }
    return worst;
}

std::string format_error(double value) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(2) << value;
    return os.str();
}

std::vector<CheckResult> run_verify_suite(const WaveletSpec& wavelet, const VerifyOptions& o,
                                          const std::vector<ExtensionMode>& modes) {
    std::vector<CheckResult> results;
    const oracle::FilterBank fb = oracle::filters_from_lifting(wavelet);

    Rational high_sum(0);
    for (const auto& [e, c] : fb.highpass.terms()) {
        high_sum += c;
    }
    Rational low_sum(0);
    for (const auto& [e, c] : fb.lowpass.terms()) {
        low_sum += c;
    }
    results.push_back({"vanishing-moment", "-", "-", "-", high_sum.is_zero(),
                       "highpass tap sum " + high_sum.str()});
    results.push_back({"dc-gain", "-", "-", "-", !low_sum.is_zero(), "lowpass tap sum " + low_sum.str()});

    int reach = 0;
    for (const LaurentPoly2* f : {&fb.lowpass, &fb.highpass}) {
        for (const auto& [e, c] : f->terms()) {
            reach = std::max(reach, std::abs(e.a));
        }
    }
    const int margin = (reach + 1) / 2 + 1;

    const Scheme reference = build_separable_lifting(wavelet);
    for (SchemeKind kind : kAllSchemes) {
        const Scheme scheme = build_scheme(kind, wavelet);
        const std::string name(scheme_name(kind));

        const EquivalenceVerdict v = verify_equivalence(reference, scheme);
        results.push_back({"equivalence", name, "-", "-", v.equal, v.describe()});

        const Scheme inv = invert(scheme);
        const bool inverse_ok = (inv.product() * scheme.product()).eval() == poly_identity();
        results.push_back({"symbolic-inverse", name, "-", "-", inverse_ok, inverse_ok ? "inverse * forward = I" : "inverse * forward != I"});

        bool structural = true;
        for (const Step& step : scheme.steps) {
            for (std::size_t p = 1; p < step.parts().size(); ++p) {
                structural = structural && is_constant_only(step.parts()[p]);
            }
        }
        Transform traced(scheme, std::max(4, o.common.threads));
        IsolationTracer tracer;
        QuadField sink;
        traced.apply_traced(random_tile(40, 3, ExtensionMode::WholeSampleSymmetric), sink, tracer);
        const auto report = tracer.analyze();
        results.push_back({"isolation", name, "-", "-", structural && report.ok(),
                           std::to_string(report.cross_band_in_step_reads) + " cross-band reads, " +
                               std::to_string(report.later_part_neighbour_reads) + " later-part neighbour reads"});

        for (ExtensionMode mode : modes) {
            const std::string mode_name(extension_name(mode));
            for (int size : o.sizes) {
                const std::string size_name = std::to_string(size) + "x" + std::to_string(size);
                const QuadField tile = random_tile(size, static_cast<std::uint32_t>(size) + 7, mode);
                const Plane<double> pixels = pixels_of(tile);
                Transform forward_t(scheme, o.common.threads);
                const QuadField coefficients = forward_t.apply(tile);

                const Subbands<double> lifted = oracle::naive_lifting_2d(pixels, wavelet, mode);
                double scale = 1.0;
                for (const auto& plane : lifted) {
                    scale = std::max(scale, plane.abs().maxCoeff());
                }
                std::string where;
                const double lift_err = worst_deviation(coefficients, lifted, 0, where);
                results.push_back({"oracle-lifting", name, mode_name, size_name, lift_err <= 1e-4 * scale,
                                   "max error " + format_error(lift_err) + (where.empty() ? "" : " at " + where)});

                if (mode == ExtensionMode::WholeSampleSymmetric && size / 2 > 2 * margin) {
                    const Subbands<double> direct = oracle::direct_transform(pixels, fb, mode);
                    where.clear();
                    const double direct_err = worst_deviation(coefficients, direct, margin, where);
                    results.push_back({"oracle-filterbank", name, mode_name, size_name, direct_err <= 1e-3 * scale,
                                       "interior max error " + format_error(direct_err) +
                                           (where.empty() ? "" : " at " + where)});
                }

                Transform inverse_t(inv, o.common.threads);
                const QuadField back = inverse_t.apply(coefficients);
                double pr = 0.0;
                for (std::size_t i = 0; i < back.data().size(); ++i) {
                    pr = std::max(pr, std::abs(static_cast<double>(back.data()[i]) - tile.data()[i]));
                }
                results.push_back({"reconstruction", name, mode_name, size_name, pr < 1e-4,
                                   "max error " + format_error(pr)});
            }
        }

        const QuadField tile = random_tile(96, 21, ExtensionMode::WholeSampleSymmetric);
        Transform serial(scheme, 1);
        const QuadField expected = serial.apply(tile);
        std::string mismatch;
        for (int threads : {2, 7, std::max(o.common.threads, 2)}) {
            Transform parallel(scheme, threads);
            const QuadField got = parallel.apply(tile);
            if (std::memcmp(got.data().data(), expected.data().data(), got.data().size_bytes()) != 0) {
                mismatch = "differs at " + std::to_string(threads) + " threads";
                break;
            }
        }
        results.push_back({"determinism", name, "-", "96x96", mismatch.empty(),
                           mismatch.empty() ? "bit-identical for 1, 2, 7, " + std::to_string(std::max(o.common.threads, 2)) + " threads" : mismatch});
    }
    return results;
}

int cmd_verify(const VerifyOptions& o, std::ostream& out, std::ostream& err) {
    const WaveletSpec wavelet = wavelet_or_usage(o.common.wavelet);
    check_threads(o.common.threads);
    std::vector<ExtensionMode> modes;
    for (const std::string& e : o.extensions) {
        modes.push_back(extension_or_usage(e));
    }
    for (int s : o.sizes) {
        if (s <= 0 || s % 2 != 0) {
            throw UsageError("--sizes must be positive and even");
        }
    }

    const std::vector<CheckResult> results = run_verify_suite(wavelet, o, modes);
    out << "verify " << wavelet.name << " (" << wavelet.pair_count() << " lifting pairs)\n";
    out << std::left << std::setw(19) << "check" << std::setw(13) << "scheme" << std::setw(11) << "extension"
        << std::setw(10) << "size" << std::setw(6) << "result" << "detail\n";
    const CheckResult* first_failure = nullptr;
    for (const CheckResult& r : results) {
        out << std::setw(19) << r.check << std::setw(13) << r.scheme << std::setw(11) << r.mode << std::setw(10)
            << r.size << std::setw(6) << (r.pass ? "pass" : "FAIL") << r.detail << '\n';
        if (!r.pass && first_failure == nullptr) {
            first_failure = &r;
        }
    }
    if (first_failure != nullptr) {
        err << "verification failed: " << first_failure->check;
        if (first_failure->scheme != "-") {
            err << " [" << first_failure->scheme;
            if (first_failure->mode != "-") {
                err << ", " << first_failure->mode << ", " << first_failure->size;
            }
            err << "]";
        }
        err << ": " << first_failure->detail << '\n';
        return kExitVerificationFailed;
    }
    out << "all " << results.size() << " checks passed\n";
    return kExitOk;
}

// --- ops --------------------------------------------------------------------

int cmd_ops(const OpsOptions& o, std::ostream& out) {
    const WaveletSpec wavelet = wavelet_or_usage(o.wavelet);
    std::vector<SchemeKind> kinds(kAllSchemes.begin(), kAllSchemes.end());
    if (!o.scheme.empty()) {
        kinds = {scheme_or_usage(o.scheme)};
    }
    std::vector<Scheme> schemes;
    std::vector<OpCount> counts;
    for (SchemeKind k : kinds) {
        schemes.push_back(build_scheme(k, wavelet));
        counts.push_back(count_ops(schemes.back()));
    }
    out << "wavelet " << wavelet.name << '\n';
    out << std::left << std::setw(13) << "" << std::right;
    for (const Scheme& s : schemes) {
        out << std::setw(13) << s.name;
    }
    out << '\n';
    auto row = [&](const char* label, auto field) {
        out << std::left << std::setw(13) << label << std::right;
        for (const OpCount& c : counts) {
            out << std::setw(13) << field(c);
        }
        out << '\n';
    };
    row("steps", [](const OpCount& c) { return c.steps; });
    row("MACs/quad", [](const OpCount& c) { return c.macs_per_quad; });
    row("copies/quad", [](const OpCount& c) { return c.copies_per_quad; });
    out << std::left;
    if (o.dump) {
        for (const Scheme& s : schemes) {
            out << '\n' << s.name << ":\n" << dump(s);
        }
    }
    return kExitOk;
}

// --- bench ------------------------------------------------------------------

int cmd_bench(const BenchOptions& o, std::ostream& out, std::ostream& err) {
    bench::BenchConfig cfg;
    try {
        cfg.experiment = bench::parse_experiment(o.experiment);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    cfg.wavelet = wavelet_or_usage(o.wavelet);
    if (!o.schemes.empty()) {
        cfg.schemes.clear();
        for (const std::string& s : o.schemes) {
            cfg.schemes.push_back(scheme_or_usage(s));
        }
    }
    cfg.runs = o.runs;
    cfg.warmup_runs = o.warmup;
    cfg.thread_list = o.threads;
    cfg.size_list = o.sizes;
    cfg.tile_size = o.tile;
    cfg.extension = extension_or_usage(o.extension);
    cfg.seed = o.seed;
    try {
        cfg = bench::with_defaults(cfg);
        bench::validate(cfg);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }

    bench::BenchReport report;
    try {
        report = bench::run(cfg);
    } catch (const bench::CorrectnessError& e) {
        err << "benchmark aborted: " << e.what() << '\n';
        return kExitVerificationFailed;
    }
    bench::print_summary(report, out);
    if (!o.csv.empty()) {
        try {
            bench::write_csv(report, o.csv);
        } catch (const std::exception& e) {
            throw UsageError(e.what());
        }
        out << "wrote " << o.csv << '\n';
    }
    return kExitOk;
}

void add_common(CLI::App& cmd, Common& c) {
    cmd.add_option("--wavelet", c.wavelet, "Wavelet name (cdf53, cdf97) or @config-file")->capture_default_str();
    cmd.add_option("--scheme", c.scheme, "sep-lifting, sep-conv, ns-lifting or ns-adapted")->capture_default_str();
    cmd.add_option("--threads", c.threads, "Worker threads")->capture_default_str();
    cmd.add_option("--extension", c.extension, "Boundary extension: symmetric or zero")->capture_default_str();
}

void add_transform(CLI::App& cmd, TransformOptions& t) {
    add_common(cmd, t.common);
    cmd.add_option("--input", t.input, "Input image")->required();
    cmd.add_option("--output", t.output, "Output image")->required();
    cmd.add_option("--size", t.size, "Image size WxH (required for f32le input)");
    cmd.add_option("--format", t.format, "Input format f32le or pgm (default: by extension)");
    cmd.add_option("--output-format", t.output_format, "Output format f32le or pgm (default: by extension)");
    cmd.add_option("--layout", t.layout, "Coefficient layout: quad (interleaved) or mallat (subband mosaic)")
        ->capture_default_str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multi-threaded 2-D discrete wavelet transform with four computation schemes", "dwt"};
    app.require_subcommand(1);

    TransformOptions fwd;
    TransformOptions inv;
    VerifyOptions verify;
    OpsOptions ops;
    BenchOptions bench_opts;

    CLI::App* forward_cmd = app.add_subcommand("forward", "Forward transform of an image");
    add_transform(*forward_cmd, fwd);
    CLI::App* inverse_cmd = app.add_subcommand("inverse", "Inverse transform of a coefficient image");
    add_transform(*inverse_cmd, inv);

    CLI::App* verify_cmd = app.add_subcommand("verify", "Run the equivalence, oracle and reconstruction checks");
    add_common(*verify_cmd, verify.common);
    verify_cmd->add_option("--sizes", verify.sizes, "Tile edge lengths")->delimiter(',')->capture_default_str();
    verify_cmd->add_option("--extensions", verify.extensions, "Extension modes to check")
        ->delimiter(',')
        ->capture_default_str();

    CLI::App* ops_cmd = app.add_subcommand("ops", "Steps and multiply-accumulates per scheme");
    ops_cmd->add_option("--wavelet", ops.wavelet, "Wavelet name or @config-file")->capture_default_str();
    ops_cmd->add_option("--scheme", ops.scheme, "Limit to one scheme");
    ops_cmd->add_flag("--dump", ops.dump, "Print the step matrices");

    CLI::App* bench_cmd = app.add_subcommand("bench", "Timing experiments (median ns per pixel)");
    bench_cmd->add_option("--experiment", bench_opts.experiment, "threads, tilesize or image")->capture_default_str();
    bench_cmd->add_option("--wavelet", bench_opts.wavelet, "Wavelet name or @config-file")->capture_default_str();
    bench_cmd->add_option("--scheme,--schemes", bench_opts.schemes, "Schemes to time (default: all)")
        ->delimiter(',');
    bench_cmd->add_option("--runs", bench_opts.runs, "Timed runs per row (at least 3)")->capture_default_str();
    bench_cmd->add_option("--warmup", bench_opts.warmup, "Untimed runs before timing")->capture_default_str();
    bench_cmd->add_option("--threads", bench_opts.threads, "Thread counts")->delimiter(',');
    bench_cmd->add_option("--sizes,--edges", bench_opts.sizes, "Tile sizes or image edges")->delimiter(',');
    bench_cmd->add_option("--tile", bench_opts.tile, "Tile edge for the image experiment")->capture_default_str();
    bench_cmd->add_option("--extension", bench_opts.extension, "symmetric or zero")->capture_default_str();
    bench_cmd->add_option("--csv", bench_opts.csv, "Write results as CSV to this path");
    bench_cmd->add_option("--seed", bench_opts.seed, "Input generator seed")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "dwt: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (forward_cmd->parsed()) {
            return cmd_transform(fwd, true, out);
        }
        if (inverse_cmd->parsed()) {
            return cmd_transform(inv, false, out);
        }
        if (verify_cmd->parsed()) {
            return cmd_verify(verify, out, err);
        }
        if (ops_cmd->parsed()) {
            return cmd_ops(ops, out);
        }
        if (bench_cmd->parsed()) {
            return cmd_bench(bench_opts, out, err);
        }
    } catch (const UsageError& e) {
        err << "dwt: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace nsdwt::cli
