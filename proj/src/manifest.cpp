#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dance/error.hpp"
#include "dance/seqdata.hpp"

namespace dance {

using nlohmann::json;

std::string manifest_to_json(const DatasetManifest& manifest) {
    json doc;
    doc["seed"] = manifest.seed;
    doc["classes"] = manifest.class_names;
    if (manifest.ohe_max_len) doc["ohe_max_len"] = *manifest.ohe_max_len;
    json entries = json::array();
    for (const auto& e : manifest.entries) {
        json j{{"id", e.id}, {"path", e.path}, {"label", e.label}, {"split", split_name(e.split)}};
        if (!e.sequence.empty()) j["sequence"] = e.sequence;
        entries.push_back(std::move(j));
    }
    doc["entries"] = std::move(entries);
    return doc.dump(2) + "\n";
}

DatasetManifest manifest_from_json(std::string_view text) {
    DatasetManifest m;
    try {
        const json doc = json::parse(text);
        m.seed = doc.at("seed").get<std::uint64_t>();
        m.class_names = doc.at("classes").get<std::vector<std::string>>();
        if (doc.contains("ohe_max_len")) m.ohe_max_len = doc["ohe_max_len"].get<std::size_t>();
        for (const auto& j : doc.at("entries")) {
            ManifestEntry e;
            e.id = j.at("id").get<std::string>();
            e.path = j.value("path", "");
            e.label = j.value("label", "");
            e.split = parse_split(j.value("split", "unassigned"));
            e.sequence = j.value("sequence", "");
            m.entries.push_back(std::move(e));
        }
    } catch (const json::exception& ex) {
        throw DataError(std::string("manifest JSON: ") + ex.what());
    }
    m.validate();
    return m;
}

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write manifest '" + path.string() + "'");
    out << manifest_to_json(manifest);
    if (!out) throw DataError("I/O error writing manifest '" + path.string() + "'");
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open manifest '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return manifest_from_json(buf.str());
}

}  // namespace dance
