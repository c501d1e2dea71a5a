#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dance/cgr.hpp"
#include "dance/exec.hpp"
#include "dance/kaleidoscope.hpp"
#include "dance/raster.hpp"
#include "dance/seqdata.hpp"

namespace dance {

enum class RenderMethod { Dance, Cgr };

std::string_view render_method_name(RenderMethod m);
RenderMethod parse_render_method(std::string_view name);

struct RenderSettings {
    RenderMethod method = RenderMethod::Dance;
    KaleidoscopeParams kaleidoscope;
    CgrParams cgr;
    RasterOptions raster;
};

/// One sequence to one image: DANCE segments rasterized on a fitted viewport,
/// or the CGR walk plotted as dots.
RasterImage render_sequence(std::string_view residues, const RenderSettings& settings);

struct RenderOutcome {
    std::optional<RasterImage> image;
    std::string error;  // set when image is empty
};

/// Renders every sequence. Outcomes are index-aligned with the input and do
/// not depend on the execution mode or job count.
std::vector<RenderOutcome> render_batch(std::span<const ProteinSequence> seqs,
                                        const RenderSettings& settings, Execution exec,
                                        int jobs = 0);

}  // namespace dance
