#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nsdwt/quadfield.hpp"
#include "nsdwt/schemes.hpp"

namespace nsdwt::bench {

enum class Experiment { Threads, TileSize, Image };

std::string_view experiment_name(Experiment e);
/// "threads", "tilesize" or "image"; throws std::invalid_argument.
Experiment parse_experiment(std::string_view name);

/// Empty lists take the experiment's defaults:
///   threads:  threads 1..max at 1024x1024
///   tilesize: sizes 128..4096 (powers of two) at max threads
///   image:    edges 1024..8192 (powers of two), tiles of `tile_size`, max threads
struct BenchConfig {
    Experiment experiment = Experiment::Threads;
    std::vector<SchemeKind> schemes{kAllSchemes.begin(), kAllSchemes.end()};
    WaveletSpec wavelet;
    int runs = 100;
    int warmup_runs = 3;
    std::vector<int> thread_list;
    std::vector<int> size_list;
    int tile_size = 1024;
    ExtensionMode extension = ExtensionMode::WholeSampleSymmetric;
    std::uint32_t seed = 1;
};

class BenchConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when the pre-bench check finds the engine disagreeing with the
/// oracle; nothing is timed in that case.
class CorrectnessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Throws BenchConfigError on runs < 3, odd or non-positive sizes, etc.
void validate(const BenchConfig& cfg);

/// Fills in the experiment's default lists.
BenchConfig with_defaults(BenchConfig cfg);

struct BenchRow {
    std::string experiment;
    std::string scheme;
    std::string wavelet;
    int threads = 0;
    int width = 0;
    int height = 0;
    int runs = 0;
    double median_ns_per_pel = 0.0;
    double min_ns_per_pel = 0.0;
    double max_ns_per_pel = 0.0;
    bool skipped = false;
};

struct MachineInfo {
    int cores = 1;
    std::string cpu_model;
    double nominal_mhz = 0.0;  // 0 when unknown
};

MachineInfo machine_info();

struct BenchReport {
    MachineInfo machine;
    std::vector<BenchRow> rows;
};

/// Order-statistic median; the middle element for odd counts, the mean of
/// the two middle elements for even counts.
double median(std::vector<double> samples);

/// Forward transform of a 64x64 random crop with every scheme, compared
/// with the lifting oracle for the scheme's own wavelet. Throws
/// CorrectnessError naming the scheme on a mismatch.
void correctness_guard(const std::vector<Scheme>& schemes, ExtensionMode extension);

BenchReport run_threads_sweep(const BenchConfig& cfg);
BenchReport run_tilesize_sweep(const BenchConfig& cfg);
BenchReport run_image_sweep(const BenchConfig& cfg);
/// Dispatches on cfg.experiment.
BenchReport run(const BenchConfig& cfg);

inline constexpr std::string_view kCsvHeader =
    "experiment,scheme,wavelet,threads,width,height,runs,median_ns_per_pel,min_ns_per_pel,max_ns_per_pel";

void write_csv(const BenchReport& report, std::ostream& out);
void write_csv(const BenchReport& report, const std::filesystem::path& path);

/// Machine metadata, the result table, and speedup ratios against
/// sep-lifting (and against one thread for the thread sweep).
void print_summary(const BenchReport& report, std::ostream& out);

}  // namespace nsdwt::bench
