#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>

#include "dance/classify.hpp"
#include "dance/error.hpp"
#include "dance/rng.hpp"

using namespace dance;

namespace {

FeatureMatrix matrix(std::vector<std::vector<double>> rows, std::vector<int> labels,
                     std::vector<std::string> classes) {
    FeatureMatrix m;
    for (std::size_t i = 0; i < rows.size(); ++i) m.ids.push_back("r" + std::to_string(i));
    m.rows = std::move(rows);
    m.labels = std::move(labels);
    m.class_names = std::move(classes);
    return m;
}

// Box-Muller from the uniform stream.
double gaussian(SplitMix64& rng) {
    const double u1 = 1.0 - rng.uniform();
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

FeatureMatrix blobs(SplitMix64& rng, std::size_t per_class, double spread) {
    const std::vector<std::vector<double>> centers{{0, 0, 0}, {10, 0, 0}, {0, 10, 0}, {0, 0, 10}};
    FeatureMatrix m;
    m.class_names = {"a", "b", "c", "d"};
    for (std::size_t c = 0; c < centers.size(); ++c) {
        for (std::size_t i = 0; i < per_class; ++i) {
            std::vector<double> row = centers[c];
            for (double& v : row) v += spread * gaussian(rng);
            m.ids.push_back("c" + std::to_string(c) + "_" + std::to_string(i));
            m.rows.push_back(std::move(row));
            m.labels.push_back(static_cast<int>(c));
        }
    }
    return m;
}

double accuracy(const PredictionSet& p) {
    std::size_t hit = 0;
    for (const auto& item : p.items) hit += item.true_label && *item.true_label == item.pred;
    return static_cast<double>(hit) / static_cast<double>(p.items.size());
}

}  // namespace

TEST_CASE("knn exact match") {
    const FeatureMatrix train = matrix({{0, 0}, {5, 5}, {9, 1}}, {0, 1, 2}, {"x", "y", "z"});
    const KnnModel m = knn_fit(train, 1, Metric::Euclidean);
    const PredictionSet p = knn_predict(m, train);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(p.items[i].pred == train.class_names[i]);
        CHECK(p.items[i].true_label == train.class_names[i]);
        CHECK(p.items[i].proba[i] == 1.0);
    }
}

TEST_CASE("knn tie rules") {
    const FeatureMatrix train = matrix({{0, 0}, {1, 1}}, {1, 0}, {"a", "b"});
    const FeatureMatrix query = matrix({{0.5, 0.5}}, {-1}, {"a", "b"});
    // equal distances: the lower training index is nearer
    const PredictionSet one = knn_predict(knn_fit(train, 1, Metric::Euclidean), query);
    CHECK(one.items[0].pred == "b");
    CHECK_FALSE(one.items[0].true_label.has_value());
    // equal votes: the lower class index wins
    const PredictionSet two = knn_predict(knn_fit(train, 2, Metric::Manhattan), query);
    CHECK(two.items[0].pred == "a");
    CHECK(two.items[0].proba == std::vector<double>{0.5, 0.5});
}

TEST_CASE("knn metrics differ") {
    // Euclidean: (3,0) is nearer than (2,2); Manhattan: (2,2) ties at 4 vs 3 -> (3,0) still nearer.
    // Use (2.2,2.2): Euclidean 3.11 vs 3; Manhattan 4.4 vs 3.
    const FeatureMatrix train = matrix({{3, 0}, {2, 2}}, {0, 1}, {"p", "q"});
    const FeatureMatrix query = matrix({{0, 0}}, {-1}, {"p", "q"});
    CHECK(knn_predict(knn_fit(train, 1, Metric::Euclidean), query).items[0].pred == "q");
    CHECK(knn_predict(knn_fit(train, 1, Metric::Manhattan), query).items[0].pred == "p");
    CHECK(parse_metric("euclidean") == Metric::Euclidean);
    CHECK(parse_metric("manhattan") == Metric::Manhattan);
    CHECK(metric_name(Metric::Manhattan) == "manhattan");
    CHECK_THROWS(parse_metric("cosine"));
}

TEST_CASE("knn on separated blobs, permutation invariance, serial equals parallel") {
    SplitMix64 rng(31);
    const FeatureMatrix train = blobs(rng, 40, 0.5);
    const FeatureMatrix test = blobs(rng, 10, 0.5);
    const KnnModel m = knn_fit(train, 5, Metric::Euclidean);
    const PredictionSet p = knn_predict(m, test, Execution::Serial);
    CHECK(accuracy(p) == 1.0);
    CHECK(knn_predict(m, test, Execution::Parallel) == p);

    FeatureMatrix shuffled = train;
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t i = 0; i < order.size(); ++i) {
        shuffled.ids[i] = train.ids[order[i]];
        shuffled.rows[i] = train.rows[order[i]];
        shuffled.labels[i] = train.labels[order[i]];
    }
    const PredictionSet q = knn_predict(knn_fit(shuffled, 5, Metric::Euclidean), test);
    for (std::size_t i = 0; i < p.items.size(); ++i) CHECK(q.items[i].pred == p.items[i].pred);
}

TEST_CASE("knn errors") {
    const FeatureMatrix train = matrix({{0, 0}, {1, 1}}, {0, 1}, {"a", "b"});
    CHECK_THROWS_AS(knn_fit(train, 3, Metric::Euclidean), DataError);
    CHECK_THROWS_AS(knn_fit(train, 0, Metric::Euclidean), DataError);
    CHECK_THROWS_AS(knn_fit(matrix({{0, 0}}, {-1}, {"a"}), 1, Metric::Euclidean), DataError);
    const KnnModel m = knn_fit(train, 1, Metric::Euclidean);
    CHECK_THROWS_AS(knn_predict(m, matrix({{0, 0, 0}}, {-1}, {"a", "b"})), DataError);
}

TEST_CASE("logreg with zero epochs is uniform") {
    const FeatureMatrix train = matrix({{1, 2}, {3, 4}, {5, 6}}, {0, 1, 2}, {"a", "b", "c"});
    const LogRegModel m = logreg_train(train, {.epochs = 0});
    for (const auto& item : logreg_predict(m, train).items) {
        for (double p : item.proba) CHECK(p == doctest::Approx(1.0 / 3.0));
    }
    CHECK(m.loss_history.empty());
}

TEST_CASE("logreg fits a single point") {
    const FeatureMatrix train = matrix({{1.0, -1.0}}, {1}, {"a", "b"});
    const LogRegModel m = logreg_train(train, {.learning_rate = 0.5, .epochs = 200, .batch_size = 1});
    CHECK(logreg_proba(m, train.rows[0])[1] > 0.99);
}

TEST_CASE("logreg separates a separable set") {
    SplitMix64 rng(37);
    FeatureMatrix train;
    train.class_names = {"neg", "pos"};
    for (int i = 0; i < 100; ++i) {
        const double x = 2 * rng.uniform() - 1;
        const double y = 2 * rng.uniform() - 1;
        const int label = x + y > 0 ? 1 : 0;
        const double shift = label ? 0.3 : -0.3;
        train.ids.push_back("p" + std::to_string(i));
        train.rows.push_back({x + shift, y + shift});
        train.labels.push_back(label);
    }
    const LogRegModel m = logreg_train(train, {.learning_rate = 0.5, .epochs = 200, .batch_size = 16, .seed = 3});
    CHECK(accuracy(logreg_predict(m, train)) == 1.0);
}

TEST_CASE("logreg gradient matches central differences") {
    SplitMix64 rng(41);
    for (int instance = 0; instance < 20; ++instance) {
        const std::size_t classes = 2 + rng.below(4);
        const std::size_t dim = 1 + rng.below(6);
        const std::size_t n = 1 + rng.below(12);
        FeatureMatrix data;
        for (std::size_t c = 0; c < classes; ++c) data.class_names.push_back("k" + std::to_string(c));
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> row(dim);
            for (double& v : row) v = 4 * rng.uniform() - 2;
            data.ids.push_back("i" + std::to_string(i));
            data.rows.push_back(std::move(row));
            data.labels.push_back(static_cast<int>(rng.below(classes)));
        }
        std::vector<double> w(classes * (dim + 1));
        for (double& v : w) v = 2 * rng.uniform() - 1;
        std::vector<std::size_t> rows(n);
        std::iota(rows.begin(), rows.end(), std::size_t{0});
        std::vector<double> grad;
        logreg_objective(w, classes, data, rows, &grad);
        REQUIRE(grad.size() == w.size());
        constexpr double h = 1e-5;
        for (std::size_t j = 0; j < w.size(); ++j) {
            auto wp = w, wm = w;
            wp[j] += h;
            wm[j] -= h;
            const double numeric = (logreg_objective(wp, classes, data, rows, nullptr) -
                                    logreg_objective(wm, classes, data, rows, nullptr)) /
                                   (2 * h);
            CHECK(std::fabs(numeric - grad[j]) < 1e-5);
        }
    }
}

TEST_CASE("full-batch descent does not increase the loss") {
    SplitMix64 rng(43);
    const FeatureMatrix train = blobs(rng, 20, 3.0);
    const LogRegModel m = logreg_train(
        train, {.learning_rate = 0.01, .epochs = 50, .batch_size = static_cast<int>(train.size())});
    REQUIRE(m.loss_history.size() == 50);
    for (std::size_t e = 1; e < m.loss_history.size(); ++e) CHECK(m.loss_history[e] <= m.loss_history[e - 1]);
}

TEST_CASE("logreg training is deterministic and rejects bad input") {
    SplitMix64 rng(47);
    const FeatureMatrix train = blobs(rng, 15, 2.0);
    const LogRegConfig cfg{.learning_rate = 0.01, .epochs = 5, .batch_size = 8, .seed = 9};
    CHECK(logreg_train(train, cfg).weights == logreg_train(train, cfg).weights);
    CHECK_THROWS_AS(logreg_train(train, {.learning_rate = 0.0}), DataError);
    CHECK_THROWS_AS(logreg_train(train, {.batch_size = 0}), DataError);
    CHECK_THROWS_AS(logreg_train(matrix({{1.0}}, {0}, {"only"}), {}), DataError);
    // weights overflow to infinity and the loss turns NaN
    const FeatureMatrix huge = matrix({{1e300}, {-1e300}}, {0, 1}, {"a", "b"});
    CHECK_THROWS_AS(logreg_train(huge, {.learning_rate = 1e10, .epochs = 3}), DataError);
}

TEST_CASE("model files round trip") {
    SplitMix64 rng(53);
    const FeatureMatrix train = blobs(rng, 10, 1.0);
    const FeatureMatrix test = blobs(rng, 5, 1.0);
    const TrainedModel knn{knn_fit(train, 3, Metric::Manhattan), "fcgr", 0.5};
    const TrainedModel lr{logreg_train(train, {.epochs = 3}), "pixels", 1.25};
    for (const TrainedModel& model : {knn, lr}) {
        const TrainedModel back = decode_model(encode_model(model));
        CHECK(back.feature_mode == model.feature_mode);
        CHECK(back.train_time_s == model.train_time_s);
        CHECK(predict(back, test) == predict(model, test));
    }
    const auto path = std::filesystem::temp_directory_path() / "dance_model_test.bin";
    save_model(lr, path);
    CHECK(predict(load_model(path), test) == predict(lr, test));
    std::filesystem::remove(path);
    const std::string bytes = encode_model(knn);
    CHECK_THROWS_AS(decode_model(bytes.substr(0, bytes.size() - 3)), DataError);
    CHECK_THROWS_AS(decode_model("DNCMODL9xxxx"), DataError);
}

TEST_CASE("prediction JSON") {
    PredictionSet p;
    p.class_names = {"a", "b"};
    p.items = {{"s1", "a", "a", {0.75, 0.25}}, {"s2", std::nullopt, "b", {0.0, 1.0}}};
    const std::string text = predictions_to_json(p);
    CHECK(text.front() == '[');
    CHECK(text.find("\"true\": null") != std::string::npos);
    CHECK(predictions_from_json(text) == p);

    const PredictionSet wrapped = predictions_from_json(
        R"({"classes": ["a", "b", "c"], "predictions": [{"id": "x", "true": "c", "pred": "a", "proba": [0.5, 0.25, 0.25]}]})");
    CHECK(wrapped.class_names == std::vector<std::string>{"a", "b", "c"});
    CHECK(wrapped.items[0].true_label == "c");

    CHECK_THROWS_AS(predictions_from_json(R"([{"id": "x", "true": "a", "pred": "a", "proba": [0.5, 0.6]}])"),
                    DataError);
    CHECK_THROWS_AS(predictions_from_json(R"({"oops": 1})"), DataError);
    CHECK_THROWS_AS(predictions_from_json("not json"), DataError);
}
