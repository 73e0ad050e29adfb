#pragma once

#include <algorithm>
#include <array>
#include <barrier>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsdwt/quadfield.hpp"
#include "nsdwt/schemes.hpp"
#include "nsdwt/worker_pool.hpp"

namespace nsdwt {

/// Half-open range of quad rows owned by one worker.
struct Band {
    int begin = 0;
    int end = 0;

    [[nodiscard]] int size() const { return end - begin; }
    [[nodiscard]] bool contains(int n) const { return n >= begin && n < end; }
    friend bool operator==(const Band&, const Band&) = default;
};

/// Contiguous bands covering [0, height_quads), min(threads, height_quads)
/// of them, sizes differing by at most one (larger bands first).
std::vector<Band> partition(int height_quads, int threads);

/// Worker count used when none is requested.
int default_thread_count();

// ---------------------------------------------------------------------------
// Lowered kernels

template <typename Scalar>
struct KernelTerm {
    int source = 0;  // input subband
    int da = 0;      // horizontal quad offset
    int db = 0;      // vertical quad offset
    Scalar coeff{};
};

/// One matrix lowered to per-row term lists. Terms run column by column,
/// and within an entry by ascending (b, a).
template <typename Scalar>
struct KernelPart {
    std::array<std::vector<KernelTerm<Scalar>>, 4> rows;
    std::array<bool, 4> copy_row{};  // row is the plain identity
};

template <typename Scalar>
struct KernelStep {
    std::vector<KernelPart<Scalar>> parts;
    /// Factorization of a fused step, kept to derive its edge kernels.
    std::vector<PolyMatrix4> factors;
    int factor_axis = -1;
};

/// Exact edge kernels of a fused step for one tile extent: for each position
/// along the factor axis where a factor would read past the tile, the
/// per-output linear form over (source subband, absolute position).
struct ExactEdgeTerm {
    int source = 0;
    int position = 0;
    Rational coeff;
};

struct ExactEdgeKernels {
    int axis = -1;
    std::vector<int> positions;  // ascending
    std::vector<std::array<std::vector<ExactEdgeTerm>, 4>> kernels;
};

/// Pulls every output at an edge position back through `factors` (applied
/// in order, each reading under `mode`). `extent` is in quads.
ExactEdgeKernels edge_kernels(const std::vector<PolyMatrix4>& factors, int axis, int extent, ExtensionMode mode);

template <typename Scalar>
struct EdgeTerm {
    int source = 0;
    int position = 0;
    Scalar coeff{};
};

template <typename Scalar>
struct EdgeKernels {
    int axis = -1;
    /// Kernel index per position along the axis, -1 for interior positions.
    std::vector<int> slot;
    std::vector<int> positions;
    std::vector<std::array<std::vector<EdgeTerm<Scalar>>, 4>> kernels;

    [[nodiscard]] bool empty() const { return positions.empty(); }
};

template <typename Scalar>
EdgeKernels<Scalar> lower_edges(const KernelStep<Scalar>& step, int width_quads, int height_quads,
                                ExtensionMode mode) {
    EdgeKernels<Scalar> out;
    if (step.factor_axis < 0) {
        return out;
    }
    const int extent = step.factor_axis == 0 ? width_quads : height_quads;
    const ExactEdgeKernels exact = edge_kernels(step.factors, step.factor_axis, extent, mode);
    out.axis = exact.axis;
    out.positions = exact.positions;
    out.slot.assign(static_cast<std::size_t>(extent), -1);
    for (std::size_t i = 0; i < exact.positions.size(); ++i) {
        out.slot[exact.positions[i]] = static_cast<int>(i);
        auto& rows = out.kernels.emplace_back();
        for (int r = 0; r < 4; ++r) {
            for (const ExactEdgeTerm& t : exact.kernels[i][r]) {
                rows[r].push_back({t.source, t.position, static_cast<Scalar>(t.coeff.to_double())});
            }
        }
    }
    return out;
}

template <typename Scalar>
struct LoweredScheme {
    std::string name;
    std::vector<KernelStep<Scalar>> steps;
};

template <typename Scalar>
KernelPart<Scalar> lower_part(const PolyMatrix4& m) {
    KernelPart<Scalar> part;
    for (int r = 0; r < 4; ++r) {
        bool identity_row = true;
        for (int c = 0; c < 4; ++c) {
            const LaurentPoly2& p = m(r, c);
            if (r == c ? !p.is_one() : !p.is_zero()) {
                identity_row = false;
            }
            for (const auto& [e, coeff] : p.terms()) {
                part.rows[r].push_back({c, e.a, e.b, static_cast<Scalar>(coeff.to_double())});
            }
        }
        part.copy_row[r] = identity_row;
    }
    return part;
}

template <typename Scalar>
LoweredScheme<Scalar> lower(const Scheme& scheme) {
    LoweredScheme<Scalar> out;
    out.name = scheme.name;
    for (const Step& step : scheme.steps) {
        KernelStep<Scalar> ks;
        for (const PolyMatrix4& m : step.parts()) {
            ks.parts.push_back(lower_part<Scalar>(m));
        }
        ks.factors = step.factors();
        ks.factor_axis = step.factor_axis();
        out.steps.push_back(std::move(ks));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Boundary resolution

namespace detail {

/// Whole-sample symmetric reflection of a pixel coordinate into [0, extent).
inline int reflect_pixel(int p, int extent) {
    if (extent == 1) {
        return 0;
    }
    const int period = 2 * extent - 2;
    p %= period;
    if (p < 0) {
        p += period;
    }
    return p < extent ? p : period - p;
}

/// Resolves quad index `q` of a component with the given phase (0 for the
/// low/even samples, 1 for high/odd) along an axis of `quads` quads. Returns
/// -1 when the read yields zero.
inline int resolve_quad(int q, int phase, int quads, ExtensionMode mode) {
    if (q >= 0 && q < quads) {
        return q;
    }
    if (mode == ExtensionMode::ZeroPad) {
        return -1;
    }
    return reflect_pixel(2 * q + phase, 2 * quads) >> 1;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Tracing hooks

/// No-op tracer used by the production path.
struct NullTracer {
    static constexpr bool enabled = false;
    void snapshot_read(int, int, int, const void*, int, int, int, int) {}
    void inflight_read(int, int, int, int, int) {}
    void write(int, int, const void*) {}
};

/// Records every buffer access of a run and checks worker isolation
/// afterwards. Each band appends to its own log, so recording is race-free.
class IsolationTracer {
public:
    static constexpr bool enabled = true;

    struct Report {
        long snapshot_reads = 0;
        long inflight_reads = 0;
        long writes = 0;
        /// Reads of a location that another band wrote during the same step.
        long cross_band_in_step_reads = 0;
        /// Reads of a neighbouring quad issued by a part after the first.
        long later_part_neighbour_reads = 0;
        /// Subset of the above where the neighbour belongs to another band.
        long later_part_cross_band_reads = 0;

        [[nodiscard]] bool ok() const {
            return cross_band_in_step_reads == 0 && later_part_neighbour_reads == 0 &&
                   later_part_cross_band_reads == 0;
        }
    };

    void reset(std::vector<Band> bands);

    void snapshot_read(int band, int step, int part, const void* address, int m, int n, int src_m, int src_n) {
        logs_[band].reads.push_back({step, address});
        if (part > 0 && (src_m != m || src_n != n)) {
            ++logs_[band].later_part_neighbour_reads;
            if (!bands_[band].contains(src_n)) {
                ++logs_[band].later_part_cross_band_reads;
            }
        }
    }
    void inflight_read(int band, int, int, int, int) { ++logs_[band].inflight_reads; }
    void write(int band, int step, const void* address) { logs_[band].writes.push_back({step, address}); }

    [[nodiscard]] Report analyze() const;

private:
    struct Access {
        int step;
        const void* address;
    };
    struct Log {
        std::vector<Access> reads;
        std::vector<Access> writes;
        long inflight_reads = 0;
        long later_part_neighbour_reads = 0;
        long later_part_cross_band_reads = 0;
    };
    std::vector<Band> bands_;
    std::vector<Log> logs_;
};

// ---------------------------------------------------------------------------
// Step kernel

/// Per-worker scratch: the in-flight values of one quad row, plus room for
/// the next part's results.
template <typename Scalar>
struct RowScratch {
    std::array<std::vector<Scalar>, 4> current;
    std::array<std::vector<Scalar>, 4> next;

    void ensure(int width_quads) {
        for (int c = 0; c < 4; ++c) {
            current[c].resize(static_cast<std::size_t>(width_quads));
            next[c].resize(static_cast<std::size_t>(width_quads));
        }
    }
};

/// Applies `step` to the quads of `band`, reading `src` (the step-input
/// snapshot) and writing `dst`. The first part reads neighbours from the
/// snapshot; later parts act on the quad's in-flight values. Quads outside
/// the band are left untouched in `dst`. `edges` replaces the first part's
/// result at the listed edge positions of a fused step.
template <typename Scalar, typename Tracer>
void apply_step_band(const BasicQuadField<Scalar>& src, BasicQuadField<Scalar>& dst, const KernelStep<Scalar>& step,
                     Band band, RowScratch<Scalar>& scratch, Tracer& tracer, int band_index, int step_index,
                     const EdgeKernels<Scalar>* edges = nullptr) {
    const int width = src.width_quads();
    const int height = src.height_quads();
    const int pixel_width = src.pixel_width();
    const ExtensionMode mode = src.extension();
    const Scalar* base = src.data().data();
    scratch.ensure(width);

    // Accumulates coeff * src(component, m + da, n + db) over the whole row.
    auto accumulate_term = [&](Scalar* acc, const KernelTerm<Scalar>& t, int n, int part) {
        const int phase_v = t.source >> 1;
        const int phase_h = t.source & 1;
        const int sn = detail::resolve_quad(n + t.db, phase_v, height, mode);
        if (sn < 0) {
            return;
        }
        const Scalar* row = base + static_cast<std::size_t>(2 * sn + phase_v) * pixel_width + phase_h;
        const int lo = std::clamp(-t.da, 0, width);
        const int hi = std::clamp(width - t.da, 0, width);
        auto edge = [&](int m) {
            const int sm = detail::resolve_quad(m + t.da, phase_h, width, mode);
            if (sm < 0) {
                return;
            }
            if constexpr (Tracer::enabled) {
                tracer.snapshot_read(band_index, step_index, part, row + 2 * sm, m, n, sm, sn);
            }
            acc[m] += t.coeff * row[2 * sm];
        };
        for (int m = 0; m < lo; ++m) {
            edge(m);
        }
        const Scalar* shifted = row + 2 * t.da;
        for (int m = lo; m < hi; ++m) {
            if constexpr (Tracer::enabled) {
                tracer.snapshot_read(band_index, step_index, part, shifted + 2 * m, m, n, m + t.da, sn);
            }
            acc[m] += t.coeff * shifted[2 * m];
        }
        for (int m = std::max(lo, hi); m < width; ++m) {
            edge(m);
        }
    };

    const auto& parts = step.parts;
    for (int n = band.begin; n < band.end; ++n) {
        const KernelPart<Scalar>& first = parts.front();
        for (int r = 0; r < 4; ++r) {
            Scalar* acc = scratch.current[r].data();
            if (first.copy_row[r]) {
                const Scalar* row = base + src.index(0, n, r);
                for (int m = 0; m < width; ++m) {
                    if constexpr (Tracer::enabled) {
                        tracer.snapshot_read(band_index, step_index, 0, row + 2 * m, m, n, m, n);
                    }
                    acc[m] = row[2 * m];
                }
                continue;
            }
            std::fill_n(acc, width, Scalar(0));
            for (const auto& t : first.rows[r]) {
                accumulate_term(acc, t, n, 0);
            }
        }

        if (edges != nullptr && !edges->empty()) {
            auto edge_value = [&](const std::vector<EdgeTerm<Scalar>>& terms, int m) {
                Scalar acc(0);
                for (const auto& t : terms) {
                    const int sm = edges->axis == 0 ? t.position : m;
                    const int sn = edges->axis == 0 ? n : t.position;
                    const Scalar* address = base + src.index(sm, sn, t.source);
                    if constexpr (Tracer::enabled) {
                        tracer.snapshot_read(band_index, step_index, 0, address, m, n, sm, sn);
                    }
                    acc += t.coeff * *address;
                }
                return acc;
            };
            if (edges->axis == 0) {
                for (std::size_t i = 0; i < edges->positions.size(); ++i) {
                    const int m = edges->positions[i];
                    for (int r = 0; r < 4; ++r) {
                        scratch.current[r][m] = edge_value(edges->kernels[i][r], m);
                    }
                }
            } else if (const int slot = edges->slot[n]; slot >= 0) {
                for (int r = 0; r < 4; ++r) {
                    for (int m = 0; m < width; ++m) {
                        scratch.current[r][m] = edge_value(edges->kernels[slot][r], m);
                    }
                }
            }
        }

        for (std::size_t p = 1; p < parts.size(); ++p) {
            const KernelPart<Scalar>& part = parts[p];
            for (int r = 0; r < 4; ++r) {
                if (part.copy_row[r]) {
                    continue;
                }
                Scalar* acc = scratch.next[r].data();
                std::fill_n(acc, width, Scalar(0));
                for (const auto& t : part.rows[r]) {
                    if (t.da == 0 && t.db == 0) {
                        const Scalar* in = scratch.current[t.source].data();
                        for (int m = 0; m < width; ++m) {
                            if constexpr (Tracer::enabled) {
                                tracer.inflight_read(band_index, step_index, static_cast<int>(p), m, n);
                            }
                            acc[m] += t.coeff * in[m];
                        }
                        continue;
                    }
                    // Only reachable through Step::unchecked: a later part
                    // asking for a neighbour falls back to the snapshot.
                    const int phase_v = t.source >> 1;
                    const int phase_h = t.source & 1;
                    const int sn = detail::resolve_quad(n + t.db, phase_v, height, mode);
                    for (int m = 0; m < width; ++m) {
                        const int sm = detail::resolve_quad(m + t.da, phase_h, width, mode);
                        if (sn < 0 || sm < 0) {
                            continue;
                        }
                        const Scalar* address = base + src.index(sm, sn, t.source);
                        if constexpr (Tracer::enabled) {
                            tracer.snapshot_read(band_index, step_index, static_cast<int>(p), address, m, n, sm, sn);
                        }
                        acc[m] += t.coeff * *address;
                    }
                }
            }
            for (int r = 0; r < 4; ++r) {
                if (!part.copy_row[r]) {
                    std::swap(scratch.current[r], scratch.next[r]);
                }
            }
        }

        Scalar* out_base = dst.data().data();
        for (int r = 0; r < 4; ++r) {
            Scalar* row = out_base + dst.index(0, n, r);
            const Scalar* acc = scratch.current[r].data();
            for (int m = 0; m < width; ++m) {
                row[2 * m] = acc[m];
                if constexpr (Tracer::enabled) {
                    tracer.write(band_index, step_index, row + 2 * m);
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Executor

/// Runs a lowered scheme over tiles with a persistent worker pool. Steps are
/// separated by a full barrier; each step reads the previous step's buffer
/// and writes the other one. One caller at a time per instance.
template <typename Scalar>
class BasicTransform {
public:
    using Field = BasicQuadField<Scalar>;

    BasicTransform(const Scheme& scheme, int threads)
        : lowered_(lower<Scalar>(scheme)), threads_(threads), pool_(std::make_unique<WorkerPool>(threads)) {
        if (threads < 1) {
            throw std::invalid_argument("thread count must be positive");
        }
    }

    [[nodiscard]] int threads() const { return threads_; }
    [[nodiscard]] const LoweredScheme<Scalar>& lowered() const { return lowered_; }

    Field apply(const Field& in) {
        Field out;
        apply(in, out);
        return out;
    }

    /// An empty `bands` means partition(in.height_quads(), threads()).
    void apply(const Field& in, Field& out, std::span<const Band> bands = {}) {
        NullTracer tracer;
        run(in, out, bands, tracer);
    }

    template <typename Tracer>
    void apply_traced(const Field& in, Field& out, Tracer& tracer,
                      std::span<const Band> bands = {}) {
        run(in, out, bands, tracer);
    }

private:
    template <typename Tracer>
    void run(const Field& in_ref, Field& out, std::span<const Band> requested, Tracer& tracer) {
        std::optional<Field> in_copy;
        if (&in_ref == &out) {
            in_copy = in_ref;
        }
        const Field& in = in_copy ? *in_copy : in_ref;

        std::vector<Band> bands;
        if (!requested.empty()) {
            bands.assign(requested.begin(), requested.end());
            check_bands(bands, in.height_quads());
        } else {
            bands = partition(in.height_quads(), threads_);
        }
        if (static_cast<int>(bands.size()) > pool_->size()) {
            throw std::invalid_argument("more bands than worker threads");
        }
        if constexpr (Tracer::enabled) {
            tracer.reset(bands);
        }

        prepare(out, in);
        const int step_count = static_cast<int>(lowered_.steps.size());
        if (step_count == 0) {
            std::copy(in.data().begin(), in.data().end(), out.data().begin());
            return;
        }
        prepare(spare_, in);
        scratch_.resize(bands.size());
        refresh_edges(in);

        // Step s writes `out` when (step_count - 1 - s) is even, so the last
        // step always lands in `out`.
        auto target = [&](int s) -> Field& { return (step_count - 1 - s) % 2 == 0 ? out : spare_; };
        const int workers = static_cast<int>(bands.size());
        std::barrier sync(workers);
        auto job = [&](int w) {
            for (int s = 0; s < step_count; ++s) {
                const Field& src = s == 0 ? in : target(s - 1);
                apply_step_band(src, target(s), lowered_.steps[s], bands[w], scratch_[w], tracer, w, s, &edges_[s]);
                if (workers > 1) {
                    sync.arrive_and_wait();
                }
            }
        };
        pool_->run(workers, job);
    }

    // Edge kernels depend on the tile shape and mode; rebuilt when they change.
    void refresh_edges(const Field& in) {
        const std::array<int, 3> key = {in.width_quads(), in.height_quads(), static_cast<int>(in.extension())};
        if (edges_key_ == key && edges_.size() == lowered_.steps.size()) {
            return;
        }
        edges_.clear();
        for (const auto& step : lowered_.steps) {
            edges_.push_back(lower_edges(step, key[0], key[1], in.extension()));
        }
        edges_key_ = key;
    }

    static void check_bands(const std::vector<Band>& bands, int height) {
        int next = 0;
        for (const Band& b : bands) {
            if (b.begin != next || b.end <= b.begin) {
                throw std::invalid_argument("plan bands must be disjoint, ordered and non-empty");
            }
            next = b.end;
        }
        if (next != height) {
            throw std::invalid_argument("plan bands do not cover the tile height (" + std::to_string(next) + " vs " +
                                        std::to_string(height) + ")");
        }
    }

    static void prepare(Field& f, const Field& like) {
        if (!f.same_shape(like)) {
            f = Field(like.width_quads(), like.height_quads(), like.extension());
        }
        f.set_extension(like.extension());
    }

    LoweredScheme<Scalar> lowered_;
    int threads_;
    std::unique_ptr<WorkerPool> pool_;
    Field spare_;
    std::vector<RowScratch<Scalar>> scratch_;
    std::vector<EdgeKernels<Scalar>> edges_;
    std::array<int, 3> edges_key_{-1, -1, -1};
};

using Transform = BasicTransform<float>;

extern template class BasicTransform<float>;
extern template class BasicTransform<double>;

// ---------------------------------------------------------------------------
// Plan-level API

struct ExecPlan {
    Scheme scheme;
    int threads = 1;
    std::vector<Band> partition;
};

/// Balanced row-band plan for tiles of `height_quads` quad rows.
ExecPlan make_plan(const Scheme& scheme, int threads, int height_quads);

/// Forward transform of `tile` under `plan`. Throws std::invalid_argument
/// on a dimension/plan mismatch.
QuadField forward(const QuadField& tile, const ExecPlan& plan);

/// Inverse transform: runs invert(plan.scheme).
QuadField inverse(const QuadField& tile, const ExecPlan& plan);

/// Serial application of one step to the quads of `band`; all other quads
/// are returned unchanged.
template <typename Scalar>
BasicQuadField<Scalar> apply_step(const BasicQuadField<Scalar>& tile, const Step& step, Band band) {
    if (band.begin < 0 || band.end > tile.height_quads() || band.begin > band.end) {
        throw std::invalid_argument("band outside the tile");
    }
    KernelStep<Scalar> kernel;
    for (const PolyMatrix4& m : step.parts()) {
        kernel.parts.push_back(lower_part<Scalar>(m));
    }
    kernel.factors = step.factors();
    kernel.factor_axis = step.factor_axis();
    const EdgeKernels<Scalar> edges =
        lower_edges(kernel, tile.width_quads(), tile.height_quads(), tile.extension());
    BasicQuadField<Scalar> out = tile;
    RowScratch<Scalar> scratch;
    NullTracer tracer;
    apply_step_band(tile, out, kernel, band, scratch, tracer, 0, 0, &edges);
    return out;
}

}  // namespace nsdwt
