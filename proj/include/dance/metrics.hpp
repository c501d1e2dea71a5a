#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dance/classify.hpp"

namespace dance {

/// counts[i][j]: items whose true class is i and predicted class is j, with
/// classes indexed by PredictionSet::class_names.
using ConfusionMatrix = std::vector<std::vector<std::uint64_t>>;

ConfusionMatrix confusion_matrix(const PredictionSet& preds);

struct ClassMetrics {
    std::string label;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::uint64_t support = 0;
    std::optional<double> auc;  // empty when the class has no positives or no negatives
};

struct EvalReport {
    double accuracy = 0.0;
    double precision_weighted = 0.0;
    double recall_weighted = 0.0;
    double f1_weighted = 0.0;
    double f1_macro = 0.0;
    double roc_auc_ovr = 0.0;        // support-weighted over scorable classes
    double roc_auc_ovr_macro = 0.0;  // unweighted over scorable classes
    double train_time_s = 0.0;
    std::vector<ClassMetrics> per_class;
};

/// Fills accuracy, the precision/recall/F1 family and per-class P/R/F1/support.
/// Zero denominators yield 0.
EvalReport classification_metrics(const PredictionSet& preds);

/// Mann-Whitney AUC with midranks for tied scores. nullopt when one side is empty.
std::optional<double> binary_auc(std::span<const std::uint8_t> positive, std::span<const double> scores);

struct OvrAuc {
    double weighted = 0.0;
    double macro = 0.0;
    std::vector<std::optional<double>> per_class;
};

/// Throws DataError with fewer than two distinct true classes.
OvrAuc roc_auc_ovr(const PredictionSet& preds);

/// Full report: classification metrics plus OvR AUC.
EvalReport evaluate(const PredictionSet& preds, double train_time_s = 0.0);

std::string eval_report_to_json(const EvalReport& report);

/// Columns: Acc., Prec., Recall, F1 (weighted), F1 (macro), ROC AUC, Train Time (sec.)
std::string format_eval_table(const EvalReport& report, std::string_view name);

}  // namespace dance
