#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dance {

/// A validated protein sequence. Construction enforces the invariants:
/// nonempty id free of whitespace and path separators, and residues drawn
/// from the 20 canonical amino acids. Residues may be empty only when built
/// through `ProteinSequence::unchecked` (used by tests of degenerate inputs).
class ProteinSequence {
  public:
    ProteinSequence(std::string id, std::string residues,
                    std::optional<std::string> label = std::nullopt);

    const std::string& id() const { return id_; }
    const std::string& residues() const { return residues_; }
    const std::optional<std::string>& label() const { return label_; }
    std::size_t size() const { return residues_.size(); }

    void set_label(std::optional<std::string> label) { label_ = std::move(label); }

    static ProteinSequence unchecked(std::string id, std::string residues);

    friend bool operator==(const ProteinSequence&, const ProteinSequence&) = default;

  private:
    struct Unchecked {};
    ProteinSequence(Unchecked, std::string id, std::string residues);

    std::string id_;
    std::string residues_;
    std::optional<std::string> label_;
};

/// Throws DataError when `id` is empty or contains whitespace or '/', '\\'.
void validate_id(std::string_view id);

std::vector<ProteinSequence> parse_fasta(std::string_view text);
std::vector<ProteinSequence> read_fasta_file(const std::filesystem::path& path);

/// Writes FASTA with residue lines wrapped at `line_width` characters.
std::string format_fasta(const std::vector<ProteinSequence>& seqs, std::size_t line_width = 60);

/// CSV with a header row naming (at least) columns "id" and "label".
std::map<std::string, std::string> parse_labels_csv(std::string_view text);
std::string format_labels_csv(const std::vector<ProteinSequence>& seqs);

enum class Split { Unassigned, Train, Test };

std::string_view split_name(Split s);
Split parse_split(std::string_view name);

struct ManifestEntry {
    std::string id;
    std::string path;      // image path, may be empty for sequence-only manifests
    std::string label;     // empty when unlabeled
    Split split = Split::Unassigned;
    std::string sequence;  // residues, recorded so sequence features can be rebuilt

    friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;
    std::vector<std::string> class_names;  // sorted, distinct
    std::uint64_t seed = 0;
    std::optional<std::size_t> ohe_max_len;

    /// Throws DataError on duplicate ids, labels outside class_names, or a
    /// partially assigned split.
    void validate() const;

    std::size_t class_index(std::string_view label) const;

    friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

/// Builds a manifest from labeled sequences; class_names are the sorted
/// distinct labels. Unlabeled sequences get an empty label.
DatasetManifest manifest_from_sequences(const std::vector<ProteinSequence>& seqs,
                                        std::uint64_t seed);

std::string manifest_to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(std::string_view text);
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
DatasetManifest read_manifest(const std::filesystem::path& path);

struct SplitSpec {
    double test_fraction = 0.2;
    std::uint64_t seed = 0;
    bool stratified = true;
};

/// Per-class test count: max(1, floor(test_fraction * n + 0.5)).
std::size_t stratum_test_count(std::size_t class_size, double test_fraction);

/// Seeded stratified shuffle split. Within each class (in class_names order)
/// the members, taken in manifest order, are shuffled with one SplitMix64
/// stream seeded by `spec.seed`; the first t_c shuffled members become test.
DatasetManifest stratified_split(const DatasetManifest& manifest, const SplitSpec& spec);

struct SynthSpec {
    std::size_t n_classes = 4;
    std::size_t per_class = 50;
    std::size_t min_length = 12;
    std::size_t max_length = 18;
    std::size_t motif_length = 4;
    std::uint64_t seed = 7;
};

struct SynthResult {
    std::vector<ProteinSequence> sequences;  // class-major order, labeled
    std::vector<std::string> motifs;         // motifs[k] is implanted in class k
};

/// Class k is labeled "class<k>" and its sequences are "c<k>_<i>" (i zero-padded
/// to four digits).
SynthResult synth_dataset(const SynthSpec& spec);

}  // namespace dance
