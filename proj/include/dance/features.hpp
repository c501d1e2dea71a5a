#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dance/cgr.hpp"
#include "dance/raster.hpp"

namespace dance {

enum class FeatureMode { Ohe, Pixels, Fcgr };

std::string_view feature_mode_name(FeatureMode mode);
FeatureMode parse_feature_mode(std::string_view name);

struct FeatureVector {
    std::string source_id;
    std::vector<double> values;
};

/// Rectangular rows with labels aligned by index into class_names.
/// Rows without a known label carry label == -1.
struct FeatureMatrix {
    std::vector<std::string> ids;
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::vector<std::string> class_names;

    std::size_t size() const { return rows.size(); }
    std::size_t dim() const { return rows.empty() ? 0 : rows.front().size(); }

    /// Throws DataError when rows are ragged, values non-finite, or labels out of range.
    void validate() const;
};

/// 20 * max_len values; residue i sets index 20*i + rank(residue).
FeatureVector ohe_encode(std::string_view id, std::string_view residues, std::size_t max_len);

/// Inverse of ohe_encode; stops at the first all-zero position.
std::string ohe_decode(const std::vector<double>& values);

/// Block means of the ink indicator (pixel != background) over factor x factor
/// blocks, row-major.
FeatureVector pixels_features(std::string_view id, const RasterImage& image, int downsample);

/// Row-major grid counts over the total count; all zeros for an empty grid.
FeatureVector fcgr_features(std::string_view id, const FcgrGrid& grid);

// Persistence. CSV: header "id,label,f0,...,fN"; label may be empty.
std::string feature_matrix_to_csv(const FeatureMatrix& m);
FeatureMatrix feature_matrix_from_csv(std::string_view text);

// Binary: "DNCFEAT1", u64 rows, u64 dim, u32 class count and names, then per
// row (u32 id length, id bytes, i32 label, dim little-endian float32).
std::string feature_matrix_to_binary(const FeatureMatrix& m);
FeatureMatrix feature_matrix_from_binary(std::string_view bytes);

void save_feature_matrix(const FeatureMatrix& m, const std::filesystem::path& path);
FeatureMatrix load_feature_matrix(const std::filesystem::path& path);

}  // namespace dance
