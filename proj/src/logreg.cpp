#include <algorithm>
#include <cmath>
#include <numeric>

#include "dance/classify.hpp"
#include "dance/error.hpp"
#include "dance/rng.hpp"

namespace dance {

namespace {

// Softmax of W x + b into `out`; returns log of the normalizer minus the max
// logit shift, i.e. log-sum-exp of the logits.
double softmax_row(const std::vector<double>& weights, std::size_t n_classes,
                   std::span<const double> x, std::vector<double>& out) {
    const std::size_t stride = x.size() + 1;
    out.resize(n_classes);
    for (std::size_t c = 0; c < n_classes; ++c) {
        const double* w = weights.data() + c * stride;
        double z = w[x.size()];
        for (std::size_t j = 0; j < x.size(); ++j) z += w[j] * x[j];
        out[c] = z;
    }
    const double shift = *std::max_element(out.begin(), out.end());
    double sum = 0.0;
    for (auto& z : out) {
        z = std::exp(z - shift);
        sum += z;
    }
    for (auto& z : out) z /= sum;
    return shift + std::log(sum);
}

}  // namespace

double logreg_objective(const std::vector<double>& weights, std::size_t n_classes,
                        const FeatureMatrix& data, std::span<const std::size_t> rows,
                        std::vector<double>* gradient) {
    const std::size_t dim = data.dim();
    const std::size_t stride = dim + 1;
    if (gradient) gradient->assign(weights.size(), 0.0);
    if (rows.empty()) return 0.0;

    std::vector<double> p;
    double loss = 0.0;
    for (std::size_t r : rows) {
        const auto& x = data.rows[r];
        const auto y = static_cast<std::size_t>(data.labels[r]);
        const double lse = softmax_row(weights, n_classes, x, p);
        const double* wy = weights.data() + y * stride;
        double zy = wy[dim];
        for (std::size_t j = 0; j < dim; ++j) zy += wy[j] * x[j];
        loss += lse - zy;
        if (gradient) {
            for (std::size_t c = 0; c < n_classes; ++c) {
                const double coef = p[c] - (c == y ? 1.0 : 0.0);
                if (coef == 0.0) continue;
                double* g = gradient->data() + c * stride;
                for (std::size_t j = 0; j < dim; ++j) g[j] += coef * x[j];
                g[dim] += coef;
            }
        }
    }
    const double inv = 1.0 / static_cast<double>(rows.size());
    if (gradient) {
        for (auto& g : *gradient) g *= inv;
    }
    return loss * inv;
}

LogRegModel logreg_train(const FeatureMatrix& train, const LogRegConfig& config) {
    train.validate();
    if (train.class_names.size() < 2) throw DataError("logreg: at least 2 classes are required");
    if (train.size() == 0) throw DataError("logreg: empty training set");
    if (config.batch_size < 1 || config.epochs < 0 || !(config.learning_rate > 0.0)) {
        throw DataError("logreg: invalid training configuration");
    }
    for (std::size_t i = 0; i < train.size(); ++i) {
        if (train.labels[i] < 0) throw DataError("logreg: training row '" + train.ids[i] + "' is unlabeled");
    }

    LogRegModel model;
    model.class_names = train.class_names;
    model.dim = train.dim();
    model.config = config;
    model.weights.assign(model.n_classes() * (model.dim + 1), 0.0);

    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    SplitMix64 rng(config.seed);
    std::vector<double> grad;
    const auto batch = static_cast<std::size_t>(config.batch_size);
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(std::span<std::size_t>(order));
        for (std::size_t start = 0; start < order.size(); start += batch) {
            const std::size_t len = std::min(batch, order.size() - start);
            const double loss = logreg_objective(model.weights, model.n_classes(), train,
                                                 std::span<const std::size_t>(order).subspan(start, len), &grad);
            if (!std::isfinite(loss)) {
                throw DataError("logreg: loss diverged in epoch " + std::to_string(epoch + 1) +
                                "; try a lower learning rate");
            }
            for (std::size_t i = 0; i < grad.size(); ++i) model.weights[i] -= config.learning_rate * grad[i];
        }
        const double epoch_loss = logreg_objective(model.weights, model.n_classes(), train, order, nullptr);
        if (!std::isfinite(epoch_loss)) {
            throw DataError("logreg: loss diverged in epoch " + std::to_string(epoch + 1) +
                            "; try a lower learning rate");
        }
        model.loss_history.push_back(epoch_loss);
    }
    return model;
}

std::vector<double> logreg_proba(const LogRegModel& model, std::span<const double> row) {
    if (row.size() != model.dim) {
        throw DataError("logreg: feature dimension " + std::to_string(row.size()) +
                        " does not match model dimension " + std::to_string(model.dim));
    }
    std::vector<double> p;
    softmax_row(model.weights, model.n_classes(), row, p);
    return p;
}

PredictionSet logreg_predict(const LogRegModel& model, const FeatureMatrix& queries) {
    queries.validate();
    PredictionSet out;
    out.class_names = model.class_names;
    for (std::size_t q = 0; q < queries.size(); ++q) {
        PredictionItem item;
        item.id = queries.ids[q];
        if (queries.labels[q] >= 0) item.true_label = queries.class_names[static_cast<std::size_t>(queries.labels[q])];
        item.proba = logreg_proba(model, queries.rows[q]);
        const auto best = std::max_element(item.proba.begin(), item.proba.end());
        item.pred = model.class_names[static_cast<std::size_t>(best - item.proba.begin())];
        out.items.push_back(std::move(item));
    }
    return out;
}

}  // namespace dance
