#include "nsdwt/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <new>
#include <ostream>
#include <random>
#include <sstream>

#include "nsdwt/engine.hpp"
#include "nsdwt/oracle.hpp"

namespace nsdwt::bench {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<int> powers_of_two(int lo, int hi) {
    std::vector<int> out;
    for (int v = lo; v <= hi; v *= 2) {
        out.push_back(v);
    }
    return out;
}

QuadField random_field(int width, int height, std::uint32_t seed, ExtensionMode mode) {
    QuadField f(width / 2, height / 2, mode);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<float> dist(0.0f, 1.0f);
    for (float& v : f.data()) {
        v = dist(rng);
    }
    return f;
}

// Bytes held by an image sweep row: input and output images plus the
// engine's spare buffer.
std::uint64_t image_bytes(int edge, int tile) {
    return 2ull * edge * edge * sizeof(float) + 1ull * tile * tile * sizeof(float);
}

std::uint64_t available_memory() {
    std::ifstream in("/proc/meminfo");
    std::string key;
    std::uint64_t kb = 0;
    std::string unit;
    while (in >> key >> kb >> unit) {
        if (key == "MemAvailable:") {
            return kb * 1024;
        }
    }
    return 0;
}

struct Timing {
    double median = 0.0;
    double min = 0.0;
    double max = 0.0;
};

// Times `body` cfg.runs times after cfg.warmup_runs untimed calls.
template <typename Body>
Timing measure(const BenchConfig& cfg, double pixels, Body&& body) {
    for (int i = 0; i < cfg.warmup_runs; ++i) {
        body();
    }
    std::vector<double> samples;
    samples.reserve(cfg.runs);
    for (int i = 0; i < cfg.runs; ++i) {
        const auto start = Clock::now();
        body();
        const auto stop = Clock::now();
        samples.push_back(std::chrono::duration<double, std::nano>(stop - start).count() / pixels);
    }
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    return {median(samples), *lo, *hi};
}

BenchRow make_row(const BenchConfig& cfg, SchemeKind kind, int threads, int width, int height) {
    BenchRow row;
    row.experiment = std::string(experiment_name(cfg.experiment));
    row.scheme = std::string(scheme_name(kind));
    row.wavelet = cfg.wavelet.name;
    row.threads = threads;
    row.width = width;
    row.height = height;
    row.runs = cfg.runs;
    return row;
}

void fill(BenchRow& row, const Timing& t) {
    row.median_ns_per_pel = t.median;
    row.min_ns_per_pel = t.min;
    row.max_ns_per_pel = t.max;
}

// One tile, `threads` workers, forward transform only.
BenchRow time_tile(const BenchConfig& cfg, const Scheme& scheme, SchemeKind kind, int threads, int size) {
    BenchRow row = make_row(cfg, kind, threads, size, size);
    try {
        const QuadField input = random_field(size, size, cfg.seed, cfg.extension);
        QuadField output(input.width_quads(), input.height_quads(), cfg.extension);
        Transform transform(scheme, threads);
        fill(row, measure(cfg, static_cast<double>(size) * size, [&] { transform.apply(input, output); }));
    } catch (const std::bad_alloc&) {
        row.skipped = true;
        row.runs = 0;
    }
    return row;
}

std::vector<Scheme> build_all(const BenchConfig& cfg) {
    std::vector<Scheme> schemes;
    for (SchemeKind k : cfg.schemes) {
        schemes.push_back(build_scheme(k, cfg.wavelet));
    }
    return schemes;
}

BenchConfig prepare(const BenchConfig& cfg, Experiment expected) {
    BenchConfig c = with_defaults(cfg);
    c.experiment = expected;
    validate(c);
    return c;
}

}  // namespace

std::string_view experiment_name(Experiment e) {
    switch (e) {
        case Experiment::Threads:
            return "threads";
        case Experiment::TileSize:
            return "tilesize";
        case Experiment::Image:
            return "image";
    }
    return "?";
}

Experiment parse_experiment(std::string_view name) {
    for (Experiment e : {Experiment::Threads, Experiment::TileSize, Experiment::Image}) {
        if (experiment_name(e) == name) {
            return e;
        }
    }
    throw std::invalid_argument("unknown experiment '" + std::string(name) + "' (expected threads, tilesize or image)");
}

void validate(const BenchConfig& cfg) {
    if (cfg.runs < 3) {
        throw BenchConfigError("runs must be at least 3");
    }
    if (cfg.warmup_runs < 0) {
        throw BenchConfigError("warmup runs must not be negative");
    }
    if (cfg.schemes.empty()) {
        throw BenchConfigError("no schemes selected");
    }
    for (int t : cfg.thread_list) {
        if (t < 1) {
            throw BenchConfigError("thread counts must be positive");
        }
    }
    for (int s : cfg.size_list) {
        if (s <= 0 || s % 2 != 0) {
            throw BenchConfigError("sizes must be positive and even (got " + std::to_string(s) + ")");
        }
    }
    if (cfg.tile_size <= 0 || cfg.tile_size % 2 != 0) {
        throw BenchConfigError("tile size must be positive and even");
    }
    nsdwt::validate(cfg.wavelet);
}

BenchConfig with_defaults(BenchConfig cfg) {
    const int max_threads = default_thread_count();
    if (cfg.wavelet.pairs.empty()) {
        cfg.wavelet = builtin("cdf53");
    }
    switch (cfg.experiment) {
        case Experiment::Threads:
            if (cfg.thread_list.empty()) {
                for (int t = 1; t <= max_threads; ++t) {
                    cfg.thread_list.push_back(t);
                }
            }
            if (cfg.size_list.empty()) {
                cfg.size_list = {1024};
            }
            break;
        case Experiment::TileSize:
            if (cfg.thread_list.empty()) {
                cfg.thread_list = {max_threads};
            }
            if (cfg.size_list.empty()) {
                cfg.size_list = powers_of_two(128, 4096);
            }
            break;
        case Experiment::Image:
            if (cfg.thread_list.empty()) {
                cfg.thread_list = {max_threads};
            }
            if (cfg.size_list.empty()) {
                cfg.size_list = powers_of_two(1024, 8192);
            }
            break;
    }
    return cfg;
}

double median(std::vector<double> samples) {
    if (samples.empty()) {
        throw std::invalid_argument("median of no samples");
    }
    const std::size_t mid = samples.size() / 2;
    std::nth_element(samples.begin(), samples.begin() + mid, samples.end());
    if (samples.size() % 2 == 1) {
        return samples[mid];
    }
    const double upper = samples[mid];
    const double lower = *std::max_element(samples.begin(), samples.begin() + mid);
    return (lower + upper) / 2.0;
}

MachineInfo machine_info() {
    MachineInfo info;
    info.cores = default_thread_count();
    std::ifstream in("/proc/cpuinfo");
    std::string line;
    while (std::getline(in, line)) {
        const auto colon = line.find(':');
        if (colon == std::string::npos) {
            continue;
        }
        std::string key = line.substr(0, colon);
        key.erase(key.find_last_not_of(" \t") + 1);
        std::string value = line.substr(colon + 1);
        value.erase(0, value.find_first_not_of(" \t"));
        if (key == "model name" && info.cpu_model.empty()) {
            info.cpu_model = value;
        } else if (key == "cpu MHz" && info.nominal_mhz == 0.0) {
            info.nominal_mhz = std::strtod(value.c_str(), nullptr);
        }
    }
    if (info.cpu_model.empty()) {
        info.cpu_model = "unknown";
    }
    return info;
}

void correctness_guard(const std::vector<Scheme>& schemes, ExtensionMode extension) {
    constexpr int kCrop = 64;
    const QuadField crop = random_field(kCrop, kCrop, 64, extension);
    Plane<double> pixels(kCrop, kCrop);
    for (int y = 0; y < kCrop; ++y) {
        for (int x = 0; x < kCrop; ++x) {
            pixels(y, x) = crop.pixel(x, y);
        }
    }
    for (const Scheme& scheme : schemes) {
        const Subbands<double> expected = oracle::naive_lifting_2d(pixels, scheme.wavelet, extension);
        double scale = 1.0;
        for (const auto& plane : expected) {
            scale = std::max(scale, plane.abs().maxCoeff());
        }
        Transform transform(scheme, 1);
        const QuadField got = transform.apply(crop);
        for (int c = 0; c < 4; ++c) {
            for (int n = 0; n < crop.height_quads(); ++n) {
                for (int m = 0; m < crop.width_quads(); ++m) {
                    const double diff = std::abs(got.at(m, n, c) - expected[c](n, m));
                    if (!(diff <= 1e-4 * scale)) {
                        std::ostringstream os;
                        os << "correctness check failed for " << scheme.name << " (" << scheme.wavelet.name
                           << "): subband " << subband_name(c) << " quad (" << m << ", " << n << ") differs by "
                           << diff;
                        throw CorrectnessError(os.str());
                    }
                }
            }
        }
    }
}

BenchReport run_threads_sweep(const BenchConfig& in) {
    const BenchConfig cfg = prepare(in, Experiment::Threads);
    const std::vector<Scheme> schemes = build_all(cfg);
    correctness_guard(schemes, cfg.extension);
    BenchReport report{machine_info(), {}};
    for (int size : cfg.size_list) {
        for (std::size_t i = 0; i < schemes.size(); ++i) {
            for (int threads : cfg.thread_list) {
                report.rows.push_back(time_tile(cfg, schemes[i], cfg.schemes[i], threads, size));
            }
        }
    }
    return report;
}

BenchReport run_tilesize_sweep(const BenchConfig& in) {
    const BenchConfig cfg = prepare(in, Experiment::TileSize);
    const std::vector<Scheme> schemes = build_all(cfg);
    correctness_guard(schemes, cfg.extension);
    BenchReport report{machine_info(), {}};
    const int threads = cfg.thread_list.front();
    for (std::size_t i = 0; i < schemes.size(); ++i) {
        for (int size : cfg.size_list) {
            report.rows.push_back(time_tile(cfg, schemes[i], cfg.schemes[i], threads, size));
        }
    }
    return report;
}

BenchReport run_image_sweep(const BenchConfig& in) {
    const BenchConfig cfg = prepare(in, Experiment::Image);
    const std::vector<Scheme> schemes = build_all(cfg);
    correctness_guard(schemes, cfg.extension);
    BenchReport report{machine_info(), {}};
    const int threads = cfg.thread_list.front();
    const std::uint64_t memory = available_memory();
    for (std::size_t i = 0; i < schemes.size(); ++i) {
        for (int edge : cfg.size_list) {
            BenchRow row = make_row(cfg, cfg.schemes[i], threads, edge, edge);
            const int tile = std::min(cfg.tile_size, edge);
            if (memory != 0 && image_bytes(edge, tile) > memory) {
                row.skipped = true;
                row.runs = 0;
                report.rows.push_back(row);
                continue;
            }
            try {
                // Independent tiles, all resident in memory before timing.
                std::vector<QuadField> inputs;
                std::vector<QuadField> outputs;
                std::uint32_t seed = cfg.seed;
                for (int y = 0; y < edge; y += tile) {
                    for (int x = 0; x < edge; x += tile) {
                        const int w = std::min(tile, edge - x);
                        const int h = std::min(tile, edge - y);
                        inputs.push_back(random_field(w, h, seed++, cfg.extension));
                        outputs.emplace_back(w / 2, h / 2, cfg.extension);
                    }
                }
                Transform transform(schemes[i], threads);
                fill(row, measure(cfg, static_cast<double>(edge) * edge, [&] {
                         for (std::size_t t = 0; t < inputs.size(); ++t) {
                             transform.apply(inputs[t], outputs[t]);
                         }
                     }));
            } catch (const std::bad_alloc&) {
                row.skipped = true;
                row.runs = 0;
            }
            report.rows.push_back(row);
        }
    }
    return report;
}

BenchReport run(const BenchConfig& cfg) {
    switch (cfg.experiment) {
        case Experiment::Threads:
            return run_threads_sweep(cfg);
        case Experiment::TileSize:
            return run_tilesize_sweep(cfg);
        case Experiment::Image:
            return run_image_sweep(cfg);
    }
    throw BenchConfigError("unknown experiment");
}

void write_csv(const BenchReport& report, std::ostream& out) {
    out << kCsvHeader << '\n';
    out << std::setprecision(6);
    for (const BenchRow& r : report.rows) {
        out << r.experiment << ',' << r.scheme << ',' << r.wavelet << ',' << r.threads << ',' << r.width << ','
            << r.height << ',' << r.runs << ',';
        if (r.skipped) {
            out << "skipped,skipped,skipped\n";
        } else {
            out << r.median_ns_per_pel << ',' << r.min_ns_per_pel << ',' << r.max_ns_per_pel << '\n';
        }
    }
}

void write_csv(const BenchReport& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    write_csv(report, out);
    if (!out) {
        throw std::runtime_error("write to '" + path.string() + "' failed");
    }
}

void print_summary(const BenchReport& report, std::ostream& out) {
    const MachineInfo& m = report.machine;
    out << "machine: " << m.cpu_model << ", " << m.cores << " hardware threads";
    if (m.nominal_mhz > 0.0) {
        out << ", " << std::fixed << std::setprecision(0) << m.nominal_mhz << " MHz";
    }
    out << '\n';

    out << std::left << std::setw(11) << "experiment" << std::setw(13) << "scheme" << std::right << std::setw(8)
        << "threads" << std::setw(8) << "width" << std::setw(8) << "height" << std::setw(6) << "runs"
        << std::setw(12) << "median" << std::setw(12) << "min" << std::setw(12) << "max" << "  (ns/pel)\n";
    out << std::fixed << std::setprecision(3);
    for (const BenchRow& r : report.rows) {
        out << std::left << std::setw(11) << r.experiment << std::setw(13) << r.scheme << std::right
            << std::setw(8) << r.threads << std::setw(8) << r.width << std::setw(8) << r.height << std::setw(6)
            << r.runs;
        if (r.skipped) {
            out << std::setw(12) << "skipped" << '\n';
        } else {
            out << std::setw(12) << r.median_ns_per_pel << std::setw(12) << r.min_ns_per_pel << std::setw(12)
                << r.max_ns_per_pel << '\n';
        }
    }

    // Speedup of each scheme over sep-lifting at matching (threads, size).
    std::map<std::tuple<int, int, int>, double> baseline;
    for (const BenchRow& r : report.rows) {
        if (!r.skipped && r.scheme == scheme_name(SchemeKind::SeparableLifting)) {
            baseline[{r.threads, r.width, r.height}] = r.median_ns_per_pel;
        }
    }
    bool header = false;
    for (const BenchRow& r : report.rows) {
        auto it = baseline.find({r.threads, r.width, r.height});
        if (r.skipped || it == baseline.end() || r.scheme == scheme_name(SchemeKind::SeparableLifting)) {
            continue;
        }
        if (!header) {
            out << "speedup over sep-lifting (sep-lifting ns/pel / scheme ns/pel):\n";
            header = true;
        }
        out << "  " << std::left << std::setw(13) << r.scheme << std::right << " threads " << std::setw(3)
            << r.threads << "  " << r.width << "x" << r.height << ": " << std::setprecision(3)
            << it->second / r.median_ns_per_pel << '\n';
    }

    // Parallel speedup against the one-thread row of the same scheme/size.
    std::map<std::tuple<std::string, int, int>, double> serial;
    for (const BenchRow& r : report.rows) {
        if (!r.skipped && r.threads == 1) {
            serial[{r.scheme, r.width, r.height}] = r.median_ns_per_pel;
        }
    }
    header = false;
    for (const BenchRow& r : report.rows) {
        auto it = serial.find({r.scheme, r.width, r.height});
        if (r.skipped || r.threads == 1 || it == serial.end()) {
            continue;
        }
        if (!header) {
            out << "speedup over one thread:\n";
            header = true;
        }
        out << "  " << std::left << std::setw(13) << r.scheme << std::right << " threads " << std::setw(3)
            << r.threads << "  " << r.width << "x" << r.height << ": " << it->second / r.median_ns_per_pel << '\n';
    }
    out.unsetf(std::ios::floatfield);
    out << std::left;
    out.unsetf(std::ios::adjustfield);
}

}  // namespace nsdwt::bench
