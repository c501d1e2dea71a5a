#include <algorithm>
#include <cmath>
#include <numeric>

#include "dance/classify.hpp"
#include "dance/error.hpp"

namespace dance {

namespace {

double distance(Metric metric, std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    if (metric == Metric::Euclidean) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = a[i] - b[i];
            acc += d * d;
        }
        return acc;  // squared; ordering is all that matters
    }
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::fabs(a[i] - b[i]);
    return acc;
}

PredictionItem predict_one(const KnnModel& model, const FeatureMatrix& queries, std::size_t q) {
    const FeatureMatrix& train = model.train;
    const std::size_t n = train.size();
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) dist[i] = {distance(model.metric, queries.rows[q], train.rows[i]), i};
    const auto k = static_cast<std::size_t>(model.k);
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

    const std::size_t n_classes = train.class_names.size();
    std::vector<std::size_t> votes(n_classes, 0);
    for (std::size_t j = 0; j < k; ++j) ++votes[static_cast<std::size_t>(train.labels[dist[j].second])];

    PredictionItem item;
    item.id = queries.ids[q];
    if (queries.labels[q] >= 0) item.true_label = queries.class_names[static_cast<std::size_t>(queries.labels[q])];
    const auto best = std::max_element(votes.begin(), votes.end());  // first maximum
    item.pred = train.class_names[static_cast<std::size_t>(best - votes.begin())];
    item.proba.resize(n_classes);
    for (std::size_t c = 0; c < n_classes; ++c) item.proba[c] = static_cast<double>(votes[c]) / static_cast<double>(k);
    return item;
}

}  // namespace

std::string_view metric_name(Metric m) { return m == Metric::Euclidean ? "euclidean" : "manhattan"; }

Metric parse_metric(std::string_view name) {
    if (name == "euclidean") return Metric::Euclidean;
    if (name == "manhattan") return Metric::Manhattan;
    throw DataError("unknown metric '" + std::string(name) + "'");
}

KnnModel knn_fit(FeatureMatrix train, int k, Metric metric) {
    train.validate();
    if (train.size() == 0) throw DataError("knn: empty training set");
    if (k < 1 || static_cast<std::size_t>(k) > train.size()) {
        throw DataError("knn: k=" + std::to_string(k) + " must lie in [1, " +
                        std::to_string(train.size()) + "]");
    }
    for (std::size_t i = 0; i < train.size(); ++i) {
        if (train.labels[i] < 0) throw DataError("knn: training row '" + train.ids[i] + "' is unlabeled");
    }
    return KnnModel{k, metric, std::move(train)};
}

PredictionSet knn_predict(const KnnModel& model, const FeatureMatrix& queries, Execution exec) {
    queries.validate();
    if (queries.size() > 0 && queries.dim() != model.train.dim()) {
        throw DataError("knn: query dimension " + std::to_string(queries.dim()) +
                        " does not match training dimension " + std::to_string(model.train.dim()));
    }
    PredictionSet out;
    out.class_names = model.train.class_names;
    out.items.resize(queries.size());
    const auto n = static_cast<std::ptrdiff_t>(queries.size());
    if (exec == Execution::Serial) {
        for (std::ptrdiff_t q = 0; q < n; ++q) out.items[q] = predict_one(model, queries, static_cast<std::size_t>(q));
    } else {
#pragma omp parallel for schedule(dynamic, 4)
        for (std::ptrdiff_t q = 0; q < n; ++q) out.items[q] = predict_one(model, queries, static_cast<std::size_t>(q));
    }
    return out;
}

}  // namespace dance
