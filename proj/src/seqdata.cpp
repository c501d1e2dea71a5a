#include "dance/seqdata.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "dance/alphabet.hpp"
#include "dance/error.hpp"
#include "dance/rng.hpp"

namespace dance {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = end + 1;
    }
    return lines;
}

void check_residues(std::string_view id, std::string_view residues) {
    for (std::size_t i = 0; i < residues.size(); ++i) {
        if (!is_amino_acid(residues[i])) {
            std::ostringstream msg;
            msg << "sequence '" << id << "': invalid residue '" << residues[i] << "' at position "
                << (i + 1);
            throw DataError(msg.str());
        }
    }
}

}  // namespace

void validate_id(std::string_view id) {
    if (id.empty()) throw DataError("empty sequence id");
    for (char c : id) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == '/' || c == '\\') {
            throw DataError("sequence id '" + std::string(id) +
                            "' contains whitespace or a path separator");
        }
    }
}

ProteinSequence::ProteinSequence(std::string id, std::string residues,
                                 std::optional<std::string> label)
    : id_(std::move(id)), residues_(std::move(residues)), label_(std::move(label)) {
    validate_id(id_);
    if (residues_.empty()) throw DataError("sequence '" + id_ + "' has no residues");
    check_residues(id_, residues_);
}

ProteinSequence::ProteinSequence(Unchecked, std::string id, std::string residues)
    : id_(std::move(id)), residues_(std::move(residues)) {}

ProteinSequence ProteinSequence::unchecked(std::string id, std::string residues) {
    return ProteinSequence(Unchecked{}, std::move(id), std::move(residues));
}

std::vector<ProteinSequence> parse_fasta(std::string_view text) {
    std::vector<ProteinSequence> out;
    std::unordered_set<std::string> seen;
    std::optional<std::string> id;
    std::string residues;

    auto flush = [&]() {
        if (!id) return;
        if (!seen.insert(*id).second) throw DataError("duplicate sequence id '" + *id + "'");
        out.emplace_back(*id, std::move(residues));
        residues.clear();
    };

    std::size_t line_no = 0;
    for (std::string_view line : split_lines(text)) {
        ++line_no;
        if (!line.empty() && line.front() == '>') {
            flush();
            std::string_view header = trim(line.substr(1));
            const auto end = std::find_if(header.begin(), header.end(), [](char c) {
                return std::isspace(static_cast<unsigned char>(c));
            });
            id = std::string(header.begin(), end);
            if (id->empty()) {
                throw DataError("line " + std::to_string(line_no) + ": FASTA header without id");
            }
            continue;
        }
        std::string_view body = trim(line);
        if (body.empty()) continue;
        if (!id) {
            throw DataError("line " + std::to_string(line_no) +
                            ": sequence data before first '>' header");
        }
        for (char c : body) {
            if (std::isspace(static_cast<unsigned char>(c))) continue;
            residues.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
        }
    }
    flush();
    return out;
}

std::vector<ProteinSequence> read_fasta_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open FASTA file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_fasta(buf.str());
}

std::string format_fasta(const std::vector<ProteinSequence>& seqs, std::size_t line_width) {
    std::string out;
    for (const auto& s : seqs) {
        out += '>';
        out += s.id();
        out += '\n';
        const std::string& r = s.residues();
        for (std::size_t i = 0; i < r.size(); i += line_width) {
            out.append(r, i, line_width);
            out += '\n';
        }
    }
    return out;
}

std::map<std::string, std::string> parse_labels_csv(std::string_view text) {
    auto split_row = [](std::string_view line) {
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            std::size_t end = line.find(',', start);
            std::string_view f = line.substr(start, end == std::string_view::npos ? end : end - start);
            f = trim(f);
            if (f.size() >= 2 && f.front() == '"' && f.back() == '"') f = f.substr(1, f.size() - 2);
            fields.emplace_back(trim(f));
            if (end == std::string_view::npos) break;
            start = end + 1;
        }
        return fields;
    };

    const auto lines = split_lines(text);
    std::size_t i = 0;
    while (i < lines.size() && trim(lines[i]).empty()) ++i;
    if (i == lines.size()) throw DataError("labels CSV: missing header row");

    const auto header = split_row(lines[i]);
    const auto id_col = std::find(header.begin(), header.end(), "id");
    const auto label_col = std::find(header.begin(), header.end(), "label");
    if (id_col == header.end() || label_col == header.end()) {
        throw DataError("labels CSV: header must contain columns 'id' and 'label'");
    }
    const auto id_idx = static_cast<std::size_t>(id_col - header.begin());
    const auto label_idx = static_cast<std::size_t>(label_col - header.begin());

    std::map<std::string, std::string> labels;
    for (++i; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const auto row = split_row(lines[i]);
        const std::string where = "labels CSV line " + std::to_string(i + 1);
        if (row.size() != header.size()) throw DataError(where + ": wrong number of fields");
        if (row[id_idx].empty()) throw DataError(where + ": empty id");
        if (row[label_idx].empty()) throw DataError(where + ": empty label for '" + row[id_idx] + "'");
        if (!labels.emplace(row[id_idx], row[label_idx]).second) {
            throw DataError(where + ": duplicate id '" + row[id_idx] + "'");
        }
    }
    return labels;
}

std::string format_labels_csv(const std::vector<ProteinSequence>& seqs) {
    std::string out = "id,label\n";
    for (const auto& s : seqs) {
        out += s.id();
        out += ',';
        out += s.label().value_or("");
        out += '\n';
    }
    return out;
}

std::string_view split_name(Split s) {
    switch (s) {
        case Split::Train: return "train";
        case Split::Test: return "test";
        case Split::Unassigned: break;
    }
    return "unassigned";
}

Split parse_split(std::string_view name) {
    if (name == "train") return Split::Train;
    if (name == "test") return Split::Test;
    if (name == "unassigned") return Split::Unassigned;
    throw DataError("unknown split '" + std::string(name) + "'");
}

void DatasetManifest::validate() const {
    std::unordered_set<std::string> ids;
    std::size_t assigned = 0;
    for (const auto& e : entries) {
        validate_id(e.id);
        if (!ids.insert(e.id).second) throw DataError("manifest: duplicate id '" + e.id + "'");
        if (!e.label.empty() &&
            !std::binary_search(class_names.begin(), class_names.end(), e.label)) {
            throw DataError("manifest: label '" + e.label + "' of '" + e.id +
                            "' is not a declared class");
        }
        if (e.split != Split::Unassigned) ++assigned;
    }
    if (!std::is_sorted(class_names.begin(), class_names.end()) ||
        std::adjacent_find(class_names.begin(), class_names.end()) != class_names.end()) {
        throw DataError("manifest: classes must be sorted and distinct");
    }
    if (assigned != 0 && assigned != entries.size()) {
        throw DataError("manifest: split assignment is partial");
    }
}

std::size_t DatasetManifest::class_index(std::string_view label) const {
    const auto it = std::lower_bound(class_names.begin(), class_names.end(), label);
    if (it == class_names.end() || *it != label) {
        throw DataError("unknown class label '" + std::string(label) + "'");
    }
    return static_cast<std::size_t>(it - class_names.begin());
}

DatasetManifest manifest_from_sequences(const std::vector<ProteinSequence>& seqs,
                                        std::uint64_t seed) {
    DatasetManifest m;
    m.seed = seed;
    std::set<std::string> classes;
    std::size_t max_len = 0;
    for (const auto& s : seqs) {
        ManifestEntry e;
        e.id = s.id();
        e.label = s.label().value_or("");
        e.sequence = s.residues();
        if (!e.label.empty()) classes.insert(e.label);
        max_len = std::max(max_len, s.size());
        m.entries.push_back(std::move(e));
    }
    m.class_names.assign(classes.begin(), classes.end());
    m.ohe_max_len = max_len;
    m.validate();
    return m;
}

std::size_t stratum_test_count(std::size_t class_size, double test_fraction) {
    const double raw = std::floor(test_fraction * static_cast<double>(class_size) + 0.5);
    return std::max<std::size_t>(1, static_cast<std::size_t>(raw));
}

DatasetManifest stratified_split(const DatasetManifest& manifest, const SplitSpec& spec) {
    if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0)) {
        throw DataError("test_fraction must lie strictly between 0 and 1");
    }
    manifest.validate();

    // Strata hold entry indices in manifest order.
    std::vector<std::vector<std::size_t>> strata;
    std::vector<std::string> stratum_names;
    if (spec.stratified) {
        strata.resize(manifest.class_names.size());
        stratum_names = manifest.class_names;
        for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
            const auto& e = manifest.entries[i];
            if (e.label.empty()) throw DataError("stratified split: entry '" + e.id + "' is unlabeled");
            strata[manifest.class_index(e.label)].push_back(i);
        }
    } else {
        strata.emplace_back(manifest.entries.size());
        stratum_names.emplace_back("<all>");
        for (std::size_t i = 0; i < manifest.entries.size(); ++i) strata[0][i] = i;
    }

    DatasetManifest out = manifest;
    out.seed = spec.seed;
    SplitMix64 rng(spec.seed);
    for (std::size_t c = 0; c < strata.size(); ++c) {
        auto& members = strata[c];
        const std::size_t n = members.size();
        if (n < 2) {
            throw DataError("split: class '" + stratum_names[c] + "' has " + std::to_string(n) +
                            " member(s); at least 2 are required");
        }
        const std::size_t t = stratum_test_count(n, spec.test_fraction);
        if (t >= n) {
            throw DataError("split: test_fraction leaves class '" + stratum_names[c] +
                            "' without training members");
        }
        rng.shuffle(std::span<std::size_t>(members));
        for (std::size_t j = 0; j < n; ++j) {
            out.entries[members[j]].split = j < t ? Split::Test : Split::Train;
        }
    }
    return out;
}

SynthResult synth_dataset(const SynthSpec& spec) {
    if (spec.n_classes < 2) throw DataError("synth: n_classes must be at least 2");
    if (spec.motif_length < 3) throw DataError("synth: motif_length must be at least 3");
    if (spec.min_length > spec.max_length) throw DataError("synth: length range is inverted");
    if (spec.min_length < spec.motif_length) {
        throw DataError("synth: minimum length is shorter than the motif");
    }

    SplitMix64 rng(spec.seed);
    auto random_residue = [&rng]() { return kAminoAcids[rng.below(kAlphabetSize)]; };

    SynthResult result;
    for (std::size_t k = 0; k < spec.n_classes; ++k) {
        std::string motif;
        bool unique = false;
        for (int attempt = 0; attempt < 100 && !unique; ++attempt) {
            motif.clear();
            for (std::size_t j = 0; j < spec.motif_length; ++j) motif.push_back(random_residue());
            unique = std::find(result.motifs.begin(), result.motifs.end(), motif) ==
                     result.motifs.end();
        }
        if (!unique) throw DataError("synth: could not draw a distinct motif for class " +
                                     std::to_string(k) + " in 100 attempts");
        result.motifs.push_back(motif);
    }

    for (std::size_t k = 0; k < spec.n_classes; ++k) {
        const std::string label = "class" + std::to_string(k);
        const std::string& motif = result.motifs[k];
        for (std::size_t i = 0; i < spec.per_class; ++i) {
            const auto length = static_cast<std::size_t>(rng.between(
                static_cast<std::int64_t>(spec.min_length), static_cast<std::int64_t>(spec.max_length)));
            std::string residues;
            residues.reserve(length);
            for (std::size_t j = 0; j < length; ++j) residues.push_back(random_residue());
            const auto at = static_cast<std::size_t>(rng.below(length - motif.size() + 1));
            residues.replace(at, motif.size(), motif);

            char idx[8];
            std::snprintf(idx, sizeof idx, "%04zu", i);
            result.sequences.emplace_back("c" + std::to_string(k) + "_" + idx, std::move(residues),
                                          label);
        }
    }
    return result;
}

}  // namespace dance
