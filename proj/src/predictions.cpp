#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "dance/classify.hpp"
#include "dance/error.hpp"

namespace dance {

using nlohmann::json;

void PredictionSet::validate() const {
    auto known = [this](const std::string& label) {
        return std::find(class_names.begin(), class_names.end(), label) != class_names.end();
    };
    for (const auto& item : items) {
        if (item.proba.size() != class_names.size()) {
            throw DataError("predictions: '" + item.id + "' has " + std::to_string(item.proba.size()) +
                            " probabilities for " + std::to_string(class_names.size()) + " classes");
        }
        double sum = 0.0;
        for (double p : item.proba) {
            if (!(p >= 0.0) || !std::isfinite(p)) throw DataError("predictions: bad probability for '" + item.id + "'");
            sum += p;
        }
        if (std::fabs(sum - 1.0) > 1e-9) throw DataError("predictions: probabilities of '" + item.id + "' do not sum to 1");
        if (!known(item.pred)) throw DataError("predictions: unknown predicted label '" + item.pred + "'");
        if (item.true_label && !known(*item.true_label)) {
            throw DataError("predictions: unknown true label '" + *item.true_label + "'");
        }
    }
}

std::string predictions_to_json(const PredictionSet& preds) {
    json arr = json::array();
    for (const auto& item : preds.items) {
        json j;
        j["id"] = item.id;
        j["true"] = item.true_label ? json(*item.true_label) : json(nullptr);
        j["pred"] = item.pred;
        j["proba"] = item.proba;
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

PredictionSet predictions_from_json(std::string_view text) {
    PredictionSet out;
    try {
        const json doc = json::parse(text);
        const json* items = &doc;
        if (doc.is_object()) {
            out.class_names = doc.at("classes").get<std::vector<std::string>>();
            items = &doc.at("predictions");
        }
        if (!items->is_array()) throw DataError("predictions JSON: expected an array");
        for (const auto& j : *items) {
            PredictionItem item;
            item.id = j.at("id").get<std::string>();
            const json& t = j.at("true");
            if (!t.is_null()) item.true_label = t.get<std::string>();
            item.pred = j.at("pred").get<std::string>();
            item.proba = j.at("proba").get<std::vector<double>>();
            out.items.push_back(std::move(item));
        }
    } catch (const json::exception& ex) {
        throw DataError(std::string("predictions JSON: ") + ex.what());
    }
    if (out.class_names.empty()) {
        std::set<std::string> names;
        for (const auto& item : out.items) {
            names.insert(item.pred);
            if (item.true_label) names.insert(*item.true_label);
        }
        out.class_names.assign(names.begin(), names.end());
        if (!out.items.empty() && out.items.front().proba.size() != out.class_names.size()) {
            throw DataError("predictions JSON: " + std::to_string(out.items.front().proba.size()) +
                            " probabilities but only " + std::to_string(out.class_names.size()) +
                            " class names appear; use the {\"classes\", \"predictions\"} form");
        }
    }
    out.validate();
    return out;
}

}  // namespace dance
