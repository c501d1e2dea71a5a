#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dance/exec.hpp"
#include "dance/features.hpp"

namespace dance {

struct PredictionItem {
    std::string id;
    std::optional<std::string> true_label;
    std::string pred;
    std::vector<double> proba;  // indexed like PredictionSet::class_names

    friend bool operator==(const PredictionItem&, const PredictionItem&) = default;
};

struct PredictionSet {
    std::vector<std::string> class_names;
    std::vector<PredictionItem> items;

    /// Throws DataError when probabilities are negative, do not sum to 1 within
    /// 1e-9, or labels fall outside class_names.
    void validate() const;

    friend bool operator==(const PredictionSet&, const PredictionSet&) = default;
};

/// [{"id": str, "true": str|null, "pred": str, "proba": [real]}]. proba is
/// ordered by the sorted class-name list.
std::string predictions_to_json(const PredictionSet& preds);

/// Accepts the bare array, or an object {"classes": [...], "predictions": [...]}.
/// For the bare array, class names are the sorted union of true and predicted
/// labels and must account for every proba entry.
PredictionSet predictions_from_json(std::string_view text);

// ---------------------------------------------------------------------------
// k-nearest neighbours

enum class Metric { Euclidean, Manhattan };

std::string_view metric_name(Metric m);
Metric parse_metric(std::string_view name);

struct KnnModel {
    int k = 5;
    Metric metric = Metric::Euclidean;
    FeatureMatrix train;
};

/// Requires every training row labeled and 1 <= k <= rows.
KnnModel knn_fit(FeatureMatrix train, int k, Metric metric);

/// The k nearest rows (distance ties to the lower training index) vote;
/// proba are vote fractions and vote ties go to the lower class index.
PredictionSet knn_predict(const KnnModel& model, const FeatureMatrix& queries,
                          Execution exec = Execution::Parallel);

// ---------------------------------------------------------------------------
// Multinomial logistic regression

struct LogRegConfig {
    double learning_rate = 0.003;
    int epochs = 10;
    int batch_size = 64;
    std::uint64_t seed = 0;
};

struct LogRegModel {
    std::vector<std::string> class_names;
    std::size_t dim = 0;
    // n_classes x (dim + 1), row-major; the last column of each row is the bias.
    std::vector<double> weights;
    LogRegConfig config;
    std::vector<double> loss_history;  // mean training NLL after each epoch

    std::size_t n_classes() const { return class_names.size(); }
};

/// Mean NLL of softmax(W x + b) over `rows` and its gradient with respect to
/// `weights` (same layout as LogRegModel::weights).
double logreg_objective(const std::vector<double>& weights, std::size_t n_classes,
                        const FeatureMatrix& data, std::span<const std::size_t> rows,
                        std::vector<double>* gradient);

/// Mini-batch gradient descent from zero weights; each epoch reshuffles the
/// rows with SplitMix64(seed) and walks batches of batch_size.
/// Throws DataError if the loss becomes NaN.
LogRegModel logreg_train(const FeatureMatrix& train, const LogRegConfig& config);

std::vector<double> logreg_proba(const LogRegModel& model, std::span<const double> row);
PredictionSet logreg_predict(const LogRegModel& model, const FeatureMatrix& queries);

// ---------------------------------------------------------------------------
// Model files

struct TrainedModel {
    std::variant<KnnModel, LogRegModel> impl;
    std::string feature_mode;
    double train_time_s = 0.0;
};

PredictionSet predict(const TrainedModel& model, const FeatureMatrix& queries,
                      Execution exec = Execution::Parallel);

/// "DNCMODL1", u32 format version, u8 kind (0 knn, 1 logreg), feature mode,
/// train time, class names, then the kind-specific payload. Little-endian.
std::string encode_model(const TrainedModel& model);
TrainedModel decode_model(std::string_view bytes);
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace dance
