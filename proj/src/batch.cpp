#include "dance/batch.hpp"

#include <cstdlib>
#include <cstring>
#include <exception>

#include <omp.h>

#include "dance/error.hpp"

namespace dance {

int resolve_jobs(int requested) {
    if (const char* env = std::getenv("DANCE_NO_PARALLEL"); env && std::strcmp(env, "1") == 0) return 1;
    if (requested > 0) return requested;
    return omp_get_max_threads();
}

Execution execution_for(int jobs) {
    return resolve_jobs(jobs) == 1 ? Execution::Serial : Execution::Parallel;
}

std::string_view render_method_name(RenderMethod m) { return m == RenderMethod::Dance ? "dance" : "cgr"; }

RenderMethod parse_render_method(std::string_view name) {
    if (name == "dance") return RenderMethod::Dance;
    if (name == "cgr") return RenderMethod::Cgr;
    throw UsageError("unknown render method '" + std::string(name) + "' (expected dance or cgr)");
}

RasterImage render_sequence(std::string_view residues, const RenderSettings& settings) {
    if (settings.method == RenderMethod::Cgr) {
        return rasterize_walk(cgr_walk(residues, settings.cgr), settings.raster);
    }
    const SegmentSet segments = generate_kaleidoscope(residues, settings.kaleidoscope);
    return rasterize(segments, settings.raster);
}

namespace {

RenderOutcome render_one(const ProteinSequence& seq, const RenderSettings& settings) {
    RenderOutcome out;
    try {
        out.image = render_sequence(seq.residues(), settings);
    } catch (const std::exception& ex) {
        out.error = seq.id() + ": " + ex.what();
    }
    return out;
}

}  // namespace

std::vector<RenderOutcome> render_batch(std::span<const ProteinSequence> seqs,
                                        const RenderSettings& settings, Execution exec, int jobs) {
    std::vector<RenderOutcome> out(seqs.size());
    const auto n = static_cast<std::ptrdiff_t>(seqs.size());
    if (exec == Execution::Serial) {
        for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = render_one(seqs[i], settings);
        return out;
    }
    const int threads = resolve_jobs(jobs);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = render_one(seqs[i], settings);
    return out;
}

}  // namespace dance
