#include "nsdwt/engine.hpp"

#include <map>
#include <thread>
#include <unordered_map>
#include <utility>

namespace nsdwt {

std::string_view extension_name(ExtensionMode mode) {
    return mode == ExtensionMode::ZeroPad ? "zero" : "symmetric";
}

ExtensionMode parse_extension(std::string_view name) {
    if (name == "symmetric" || name == "wss" || name == "whole-sample-symmetric") {
        return ExtensionMode::WholeSampleSymmetric;
    }
    if (name == "zero" || name == "zero-pad") {
        return ExtensionMode::ZeroPad;
    }
    throw std::invalid_argument("unknown extension mode '" + std::string(name) + "' (expected symmetric or zero)");
}

std::vector<Band> partition(int height_quads, int threads) {
    if (height_quads <= 0 || threads <= 0) {
        throw std::invalid_argument("partition needs positive height and thread count");
    }
    const int count = std::min(threads, height_quads);
    const int base = height_quads / count;
    const int extra = height_quads % count;
    std::vector<Band> bands;
    bands.reserve(count);
    int begin = 0;
    for (int i = 0; i < count; ++i) {
        const int size = base + (i < extra ? 1 : 0);
        bands.push_back({begin, begin + size});
        begin += size;
    }
    return bands;
}

int default_thread_count() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void IsolationTracer::reset(std::vector<Band> bands) {
    bands_ = std::move(bands);
    logs_.assign(bands_.size(), Log{});
}

IsolationTracer::Report IsolationTracer::analyze() const {
    Report report;
    std::unordered_map<int, std::unordered_map<const void*, int>> writers;
    for (std::size_t b = 0; b < logs_.size(); ++b) {
        for (const Access& w : logs_[b].writes) {
            writers[w.step][w.address] = static_cast<int>(b);
        }
        report.writes += static_cast<long>(logs_[b].writes.size());
        report.snapshot_reads += static_cast<long>(logs_[b].reads.size());
        report.inflight_reads += logs_[b].inflight_reads;
        report.later_part_neighbour_reads += logs_[b].later_part_neighbour_reads;
        report.later_part_cross_band_reads += logs_[b].later_part_cross_band_reads;
    }
    for (std::size_t b = 0; b < logs_.size(); ++b) {
        for (const Access& r : logs_[b].reads) {
            auto step = writers.find(r.step);
            if (step == writers.end()) {
                continue;
            }
            auto w = step->second.find(r.address);
            if (w != step->second.end() && w->second != static_cast<int>(b)) {
                ++report.cross_band_in_step_reads;
            }
        }
    }
    return report;
}

ExactEdgeKernels edge_kernels(const std::vector<PolyMatrix4>& factors, int axis, int extent, ExtensionMode mode) {
    ExactEdgeKernels out;
    out.axis = axis;
    if (axis < 0 || extent <= 0) {
        return out;
    }
    // Total reach of the chained factors on each side.
    int reach_lo = 0;
    int reach_hi = 0;
    for (const PolyMatrix4& f : factors) {
        int lo = 0;
        int hi = 0;
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) {
                for (const auto& [e, coeff] : f(r, c).terms()) {
                    const int off = axis == 0 ? e.a : e.b;
                    lo = std::min(lo, off);
                    hi = std::max(hi, off);
                }
            }
        }
        reach_lo -= lo;
        reach_hi += hi;
    }

    using Form = std::map<std::pair<int, int>, Rational>;  // (source, position) -> weight
    for (int p = 0; p < extent; ++p) {
        if (p >= reach_lo && p < extent - reach_hi) {
            continue;
        }
        auto& rows = out.kernels.emplace_back();
        out.positions.push_back(p);
        for (int r = 0; r < 4; ++r) {
            Form form{{{r, p}, Rational(1)}};
            for (auto f = factors.rbegin(); f != factors.rend(); ++f) {
                Form next;
                for (const auto& [key, weight] : form) {
                    const auto [row, q] = key;
                    for (int c = 0; c < 4; ++c) {
                        const int phase = axis == 0 ? (c & 1) : (c >> 1);
                        for (const auto& [e, coeff] : (*f)(row, c).terms()) {
                            const int src = detail::resolve_quad(q + (axis == 0 ? e.a : e.b), phase, extent, mode);
                            if (src >= 0) {
                                next[{c, src}] += weight * coeff;
                            }
                        }
                    }
                }
                std::erase_if(next, [](const auto& kv) { return kv.second.is_zero(); });
                form = std::move(next);
            }
            for (const auto& [key, weight] : form) {
                rows[r].push_back({key.first, key.second, weight});
            }
        }
    }
    return out;
}

ExecPlan make_plan(const Scheme& scheme, int threads, int height_quads) {
    return ExecPlan{scheme, threads, partition(height_quads, threads)};
}

namespace {

QuadField run_plan(const QuadField& tile, const Scheme& scheme, const ExecPlan& plan) {
    if (plan.threads < 1) {
        throw std::invalid_argument("plan thread count must be positive");
    }
    if (static_cast<int>(plan.partition.size()) > plan.threads) {
        throw std::invalid_argument("plan has more bands than threads");
    }
    Transform transform(scheme, plan.threads);
    QuadField out;
    transform.apply(tile, out, std::span<const Band>(plan.partition));
    return out;
}

}  // namespace

QuadField forward(const QuadField& tile, const ExecPlan& plan) { return run_plan(tile, plan.scheme, plan); }

QuadField inverse(const QuadField& tile, const ExecPlan& plan) { return run_plan(tile, invert(plan.scheme), plan); }

template class BasicTransform<float>;
template class BasicTransform<double>;

}  // namespace nsdwt
