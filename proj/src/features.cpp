#include "dance/features.hpp"

#include <cmath>

#include "dance/alphabet.hpp"
#include "dance/error.hpp"

namespace dance {

std::string_view feature_mode_name(FeatureMode mode) {
    switch (mode) {
        case FeatureMode::Ohe: return "ohe";
        case FeatureMode::Pixels: return "pixels";
        case FeatureMode::Fcgr: return "fcgr";
    }
    return "?";
}

FeatureMode parse_feature_mode(std::string_view name) {
    if (name == "ohe") return FeatureMode::Ohe;
    if (name == "pixels") return FeatureMode::Pixels;
    if (name == "fcgr") return FeatureMode::Fcgr;
    throw DataError("unknown feature mode '" + std::string(name) + "'");
}

void FeatureMatrix::validate() const {
    if (ids.size() != rows.size() || labels.size() != rows.size()) {
        throw DataError("feature matrix: ids, rows and labels are misaligned");
    }
    const std::size_t d = dim();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != d) throw DataError("feature matrix: ragged row '" + ids[i] + "'");
        for (double v : rows[i]) {
            if (!std::isfinite(v)) throw DataError("feature matrix: non-finite value in '" + ids[i] + "'");
        }
        if (labels[i] < -1 || labels[i] >= static_cast<int>(class_names.size())) {
            throw DataError("feature matrix: label out of range for '" + ids[i] + "'");
        }
    }
}

FeatureVector ohe_encode(std::string_view id, std::string_view residues, std::size_t max_len) {
    if (residues.size() > max_len) {
        throw DataError("ohe: sequence '" + std::string(id) + "' has length " +
                        std::to_string(residues.size()) + " > max_len " + std::to_string(max_len));
    }
    FeatureVector fv{std::string(id), std::vector<double>(kAlphabetSize * max_len, 0.0)};
    for (std::size_t i = 0; i < residues.size(); ++i) {
        const auto rank = residue_rank(residues[i]);
        if (!rank) throw DataError(std::string("ohe: unknown residue '") + residues[i] + "'");
        fv.values[kAlphabetSize * i + *rank] = 1.0;
    }
    return fv;
}

std::string ohe_decode(const std::vector<double>& values) {
    std::string out;
    for (std::size_t pos = 0; pos + kAlphabetSize <= values.size(); pos += kAlphabetSize) {
        std::size_t hit = kAlphabetSize;
        for (std::size_t r = 0; r < kAlphabetSize; ++r) {
            if (values[pos + r] != 0.0) hit = r;
        }
        if (hit == kAlphabetSize) break;
        out.push_back(kAminoAcids[hit]);
    }
    return out;
}

FeatureVector pixels_features(std::string_view id, const RasterImage& image, int downsample) {
    if (downsample < 1 || image.width() % downsample != 0 || image.height() % downsample != 0) {
        throw DataError("pixels: downsample factor " + std::to_string(downsample) +
                        " does not divide " + std::to_string(image.width()) + "x" +
                        std::to_string(image.height()));
    }
    const int bw = image.width() / downsample;
    const int bh = image.height() / downsample;
    std::vector<std::uint32_t> counts(static_cast<std::size_t>(bw) * bh, 0);
    for (int r = 0; r < image.height(); ++r) {
        const std::size_t block_row = static_cast<std::size_t>(r / downsample) * bw;
        for (int c = 0; c < image.width(); ++c) {
            if (image.at(c, r) != kBackground) ++counts[block_row + c / downsample];
        }
    }
    const double area = static_cast<double>(downsample) * downsample;
    FeatureVector fv{std::string(id), std::vector<double>(counts.size())};
    for (std::size_t i = 0; i < counts.size(); ++i) fv.values[i] = counts[i] / area;
    return fv;
}

FeatureVector fcgr_features(std::string_view id, const FcgrGrid& grid) {
    FeatureVector fv{std::string(id), std::vector<double>(grid.counts.size(), 0.0)};
    const std::uint64_t total = grid.total();
    if (total == 0) return fv;
    for (std::size_t i = 0; i < grid.counts.size(); ++i) {
        fv.values[i] = static_cast<double>(grid.counts[i]) / static_cast<double>(total);
    }
    return fv;
}

}  // namespace dance
