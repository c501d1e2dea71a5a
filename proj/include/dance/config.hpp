#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "dance/batch.hpp"
#include "dance/classify.hpp"
#include "dance/features.hpp"
#include "dance/seqdata.hpp"

namespace dance {

struct FeatureConfig {
    FeatureMode mode = FeatureMode::Pixels;
    std::size_t max_len = 0;  // 0: longest sequence in the dataset
    int downsample = 10;
};

enum class ModelKind { Knn, LogReg };

struct ClassifyConfig {
    ModelKind model = ModelKind::Knn;
    int k = 5;
    Metric metric = Metric::Euclidean;
    LogRegConfig logreg;  // seed is taken from RunConfig::seed
};

/// Every tunable of a pipeline run. Defaults: depth 4, pos (0,0), angle 0,
/// scale 10, 380x380 images, 20% test split, lr 0.003, batch 64, 10 epochs.
struct RunConfig {
    KaleidoscopeParams kaleidoscope;
    RasterOptions raster;
    CgrParams cgr;
    std::size_t fcgr_resolution = 16;
    FeatureConfig features;
    ClassifyConfig classify;
    SplitSpec split;
    std::uint64_t seed = 0;

    RenderSettings render_settings(RenderMethod method) const;
};

/// Overlays a JSON document on the defaults. Unknown keys at any level and
/// ill-typed values throw UsageError.
RunConfig run_config_from_json(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);
std::string run_config_to_json(const RunConfig& config);

}  // namespace dance
