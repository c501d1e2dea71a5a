#include "dance/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include <json.hpp>

#include "dance/error.hpp"

namespace dance {

namespace {

std::size_t index_of(const std::vector<std::string>& names, const std::string& label) {
    const auto it = std::find(names.begin(), names.end(), label);
    if (it == names.end()) throw DataError("metrics: unknown label '" + label + "'");
    return static_cast<std::size_t>(it - names.begin());
}

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

ConfusionMatrix confusion_matrix(const PredictionSet& preds) {
    if (preds.items.empty()) throw DataError("metrics: empty prediction set");
    const std::size_t n = preds.class_names.size();
    ConfusionMatrix cm(n, std::vector<std::uint64_t>(n, 0));
    for (const auto& item : preds.items) {
        if (!item.true_label) throw DataError("metrics: item '" + item.id + "' has no true label");
        ++cm[index_of(preds.class_names, *item.true_label)][index_of(preds.class_names, item.pred)];
    }
    return cm;
}

EvalReport classification_metrics(const PredictionSet& preds) {
    const ConfusionMatrix cm = confusion_matrix(preds);
    const std::size_t n = cm.size();
    EvalReport report;
    std::uint64_t total = 0;
    std::uint64_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
        correct += cm[i][i];
        total += std::accumulate(cm[i].begin(), cm[i].end(), std::uint64_t{0});
    }
    report.accuracy = static_cast<double>(correct) / static_cast<double>(total);

    double f1_sum = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        const double tp = static_cast<double>(cm[c][c]);
        std::uint64_t support = 0;
        std::uint64_t predicted = 0;
        for (std::size_t j = 0; j < n; ++j) {
            support += cm[c][j];
            predicted += cm[j][c];
        }
        ClassMetrics m;
        m.label = preds.class_names[c];
        m.support = support;
        m.precision = ratio(tp, static_cast<double>(predicted));
        m.recall = ratio(tp, static_cast<double>(support));
        m.f1 = ratio(2.0 * m.precision * m.recall, m.precision + m.recall);
        const double w = static_cast<double>(support) / static_cast<double>(total);
        report.precision_weighted += w * m.precision;
        report.recall_weighted += w * m.recall;
        report.f1_weighted += w * m.f1;
        f1_sum += m.f1;
        report.per_class.push_back(std::move(m));
    }
    report.f1_macro = f1_sum / static_cast<double>(n);
    return report;
}

std::optional<double> binary_auc(std::span<const std::uint8_t> positive, std::span<const double> scores) {
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Twice the midrank keeps tie ranks integral.
    double pos_rank_sum2 = 0.0;
    std::uint64_t n_pos = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double rank2 = static_cast<double>(i + 1 + j);  // 2 * mean of ranks i+1..j
        for (std::size_t t = i; t < j; ++t) {
            if (positive[order[t]]) {
                pos_rank_sum2 += rank2;
                ++n_pos;
            }
        }
        i = j;
    }
    const std::uint64_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) return std::nullopt;
    const double p = static_cast<double>(n_pos);
    const double u = 0.5 * pos_rank_sum2 - p * (p + 1.0) / 2.0;
    return u / (p * static_cast<double>(n_neg));
}

OvrAuc roc_auc_ovr(const PredictionSet& preds) {
    const std::size_t n_classes = preds.class_names.size();
    std::vector<std::size_t> truth;
    truth.reserve(preds.items.size());
    std::vector<std::uint64_t> support(n_classes, 0);
    for (const auto& item : preds.items) {
        if (!item.true_label) throw DataError("metrics: item '" + item.id + "' has no true label");
        truth.push_back(index_of(preds.class_names, *item.true_label));
        ++support[truth.back()];
    }
    if (std::count_if(support.begin(), support.end(), [](std::uint64_t s) { return s > 0; }) < 2) {
        throw DataError("metrics: ROC AUC needs at least two distinct true classes");
    }

    OvrAuc out;
    std::vector<std::uint8_t> positive(preds.items.size());
    std::vector<double> scores(preds.items.size());
    double weighted = 0.0;
    double weight_total = 0.0;
    double macro = 0.0;
    std::size_t scored = 0;
    for (std::size_t c = 0; c < n_classes; ++c) {
        for (std::size_t i = 0; i < preds.items.size(); ++i) {
            positive[i] = truth[i] == c ? 1 : 0;
            scores[i] = preds.items[i].proba[c];
        }
        const auto auc = binary_auc(positive, scores);
        out.per_class.push_back(auc);
        if (!auc) continue;
        weighted += static_cast<double>(support[c]) * *auc;
        weight_total += static_cast<double>(support[c]);
        macro += *auc;
        ++scored;
    }
    out.weighted = weighted / weight_total;
    out.macro = macro / static_cast<double>(scored);
    return out;
}

EvalReport evaluate(const PredictionSet& preds, double train_time_s) {
    preds.validate();
    EvalReport report = classification_metrics(preds);
    const OvrAuc auc = roc_auc_ovr(preds);
    report.roc_auc_ovr = auc.weighted;
    report.roc_auc_ovr_macro = auc.macro;
    for (std::size_t c = 0; c < report.per_class.size(); ++c) report.per_class[c].auc = auc.per_class[c];
    report.train_time_s = train_time_s;
    return report;
}

std::string eval_report_to_json(const EvalReport& r) {
    using nlohmann::ordered_json;
    ordered_json classes = ordered_json::array();
    for (const auto& m : r.per_class) {
        ordered_json row;
        row["label"] = m.label;
        row["precision"] = m.precision;
        row["recall"] = m.recall;
        row["f1"] = m.f1;
        row["support"] = m.support;
        row["auc"] = m.auc ? ordered_json(*m.auc) : ordered_json(nullptr);
        classes.push_back(std::move(row));
    }
    ordered_json doc;
    doc["accuracy"] = r.accuracy;
    doc["precision_weighted"] = r.precision_weighted;
    doc["recall_weighted"] = r.recall_weighted;
    doc["f1_weighted"] = r.f1_weighted;
    doc["f1_macro"] = r.f1_macro;
    doc["roc_auc_ovr"] = r.roc_auc_ovr;
    doc["train_time_s"] = r.train_time_s;
    doc["per_class"] = {{"classes", std::move(classes)},
                        {"auc_weighting", "support"},
                        {"auc_macro", r.roc_auc_ovr_macro}};
    return doc.dump(2) + "\n";
}

std::string format_eval_table(const EvalReport& r, std::string_view name) {
    char line[512];
    std::string out;
    std::snprintf(line, sizeof line, "%-24s %7s %7s %7s %14s %11s %8s %18s\n", "Model", "Acc.",
                  "Prec.", "Recall", "F1 (weighted)", "F1 (macro)", "ROC AUC", "Train Time (sec.)");
    out += line;
    std::snprintf(line, sizeof line, "%-24.24s %7.3f %7.3f %7.3f %14.3f %11.3f %8.3f %18.3f\n",
                  std::string(name).c_str(), r.accuracy, r.precision_weighted, r.recall_weighted,
                  r.f1_weighted, r.f1_macro, r.roc_auc_ovr, r.train_time_s);
    out += line;
    return out;
}

}  // namespace dance
