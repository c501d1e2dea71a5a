#include "dance/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dance/error.hpp"

namespace dance {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::string_view where, std::initializer_list<std::string_view> keys) {
    if (!obj.is_object()) throw UsageError("config: '" + std::string(where) + "' must be an object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (auto k : keys) known = known || key == k;
        if (!known) throw UsageError("config: unknown key '" + std::string(where) + "." + key + "'");
    }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

Point read_point(const json& j) {
    const auto v = j.get<std::vector<double>>();
    if (v.size() != 2) throw UsageError("config: points are [x, y]");
    return {v[0], v[1]};
}

}  // namespace

RenderSettings RunConfig::render_settings(RenderMethod method) const {
    RenderSettings s;
    s.method = method;
    s.kaleidoscope = kaleidoscope;
    s.cgr = cgr;
    s.raster = raster;
    return s;
}

RunConfig run_config_from_json(std::string_view text) {
    RunConfig c;
    try {
        const json doc = json::parse(text);
        reject_unknown(doc, "", {"kaleidoscope", "raster", "cgr", "features", "classify", "split", "seed"});
        read(doc, "seed", c.seed);
        if (doc.contains("kaleidoscope")) {
            const json& k = doc["kaleidoscope"];
            reject_unknown(k, "kaleidoscope", {"depth", "pos", "angle", "scale", "memoize"});
            read(k, "depth", c.kaleidoscope.depth);
            read(k, "angle", c.kaleidoscope.angle);
            read(k, "scale", c.kaleidoscope.scale);
            read(k, "memoize", c.kaleidoscope.memoize);
            if (k.contains("pos")) c.kaleidoscope.pos = read_point(k["pos"]);
        }
        if (doc.contains("raster")) {
            const json& r = doc["raster"];
            reject_unknown(r, "raster", {"width", "height", "pad_fraction", "ink"});
            read(r, "width", c.raster.width);
            read(r, "height", c.raster.height);
            read(r, "pad_fraction", c.raster.pad_fraction);
            read(r, "ink", c.raster.ink);
        }
        if (doc.contains("cgr")) {
            const json& g = doc["cgr"];
            reject_unknown(g, "cgr", {"ratio", "start", "resolution"});
            read(g, "ratio", c.cgr.ratio);
            read(g, "resolution", c.fcgr_resolution);
            if (g.contains("start")) c.cgr.start = read_point(g["start"]);
        }
        if (doc.contains("features")) {
            const json& f = doc["features"];
            reject_unknown(f, "features", {"mode", "max_len", "downsample"});
            if (f.contains("mode")) c.features.mode = parse_feature_mode(f["mode"].get<std::string>());
            read(f, "max_len", c.features.max_len);
            read(f, "downsample", c.features.downsample);
        }
        if (doc.contains("classify")) {
            const json& m = doc["classify"];
            reject_unknown(m, "classify", {"model", "k", "metric", "learning_rate", "epochs", "batch_size"});
            if (m.contains("model")) {
                const auto name = m["model"].get<std::string>();
                if (name == "knn") {
                    c.classify.model = ModelKind::Knn;
                } else if (name == "logreg") {
                    c.classify.model = ModelKind::LogReg;
                } else {
                    throw UsageError("config: unknown model '" + name + "'");
                }
            }
            read(m, "k", c.classify.k);
            if (m.contains("metric")) c.classify.metric = parse_metric(m["metric"].get<std::string>());
            read(m, "learning_rate", c.classify.logreg.learning_rate);
            read(m, "epochs", c.classify.logreg.epochs);
            read(m, "batch_size", c.classify.logreg.batch_size);
        }
        if (doc.contains("split")) {
            const json& s = doc["split"];
            reject_unknown(s, "split", {"test_fraction", "stratified", "seed"});
            read(s, "test_fraction", c.split.test_fraction);
            read(s, "stratified", c.split.stratified);
            read(s, "seed", c.split.seed);
        }
    } catch (const json::exception& ex) {
        throw UsageError(std::string("config: ") + ex.what());
    } catch (const DataError& ex) {
        throw UsageError(std::string("config: ") + ex.what());
    }
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open config '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return run_config_from_json(buf.str());
}

std::string run_config_to_json(const RunConfig& c) {
    nlohmann::ordered_json doc;
    doc["kaleidoscope"] = {{"depth", c.kaleidoscope.depth},
                           {"pos", {c.kaleidoscope.pos.x, c.kaleidoscope.pos.y}},
                           {"angle", c.kaleidoscope.angle},
                           {"scale", c.kaleidoscope.scale},
                           {"memoize", c.kaleidoscope.memoize}};
    doc["raster"] = {{"width", c.raster.width},
                     {"height", c.raster.height},
                     {"pad_fraction", c.raster.pad_fraction},
                     {"ink", c.raster.ink}};
    doc["cgr"] = {{"ratio", c.cgr.ratio},
                  {"start", {c.cgr.start.x, c.cgr.start.y}},
                  {"resolution", c.fcgr_resolution}};
    doc["features"] = {{"mode", feature_mode_name(c.features.mode)},
                       {"max_len", c.features.max_len},
                       {"downsample", c.features.downsample}};
    doc["classify"] = {{"model", c.classify.model == ModelKind::Knn ? "knn" : "logreg"},
                       {"k", c.classify.k},
                       {"metric", metric_name(c.classify.metric)},
                       {"learning_rate", c.classify.logreg.learning_rate},
                       {"epochs", c.classify.logreg.epochs},
                       {"batch_size", c.classify.logreg.batch_size}};
    doc["split"] = {{"test_fraction", c.split.test_fraction},
                    {"stratified", c.split.stratified},
                    {"seed", c.split.seed}};
    doc["seed"] = c.seed;
    return doc.dump(2) + "\n";
}

}  // namespace dance
