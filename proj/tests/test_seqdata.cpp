#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "dance/error.hpp"
#include "dance/seqdata.hpp"
#include "test_util.hpp"

using namespace dance;

TEST_CASE("parse_fasta single and multi record") {
    const auto one = parse_fasta(">s1\nACDE\n");
    REQUIRE(one.size() == 1);
    CHECK(one[0].id() == "s1");
    CHECK(one[0].residues() == "ACDE");

    const auto two = parse_fasta(">s1\nAC\nDE\n>s2\nGG\n");
    REQUIRE(two.size() == 2);
    CHECK(two[0].residues() == "ACDE");
    CHECK(two[1].id() == "s2");
    CHECK(two[1].residues() == "GG");
}

TEST_CASE("parse_fasta tolerates CRLF, lowercase and header descriptions") {
    const auto seqs = parse_fasta(">s1 some description\r\nacde\r\n\r\n>s2\tx\r\nWY");
    REQUIRE(seqs.size() == 2);
    CHECK(seqs[0].id() == "s1");
    CHECK(seqs[0].residues() == "ACDE");
    CHECK(seqs[1].residues() == "WY");
}

TEST_CASE("parse_fasta errors") {
    SUBCASE("alphabet violation names residue and position") {
        try {
            parse_fasta(">s1\nACXE\n");
            FAIL("expected DataError");
        } catch (const DataError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("'X'") != std::string::npos);
            CHECK(msg.find("position 3") != std::string::npos);
            CHECK(msg.find("s1") != std::string::npos);
        }
    }
    SUBCASE("ambiguity codes are rejected") {
        for (const char* code : {"B", "J", "O", "U", "X", "Z"}) {
            CHECK_THROWS_AS(parse_fasta(std::string(">s\nAA") + code + "\n"), DataError);
        }
    }
    SUBCASE("data before header") { CHECK_THROWS_AS(parse_fasta("ACDE\n>s1\nAC\n"), DataError); }
    SUBCASE("duplicate id") { CHECK_THROWS_AS(parse_fasta(">s1\nAC\n>s1\nDE\n"), DataError); }
    SUBCASE("empty record") { CHECK_THROWS_AS(parse_fasta(">s1\n>s2\nAC\n"), DataError); }
    SUBCASE("id with path separator") { CHECK_THROWS_AS(parse_fasta(">a/b\nAC\n"), DataError); }
}

TEST_CASE("FASTA round trip over random records") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<ProteinSequence> seqs;
        const auto n = 1 + rng.below(6);
        for (std::size_t i = 0; i < n; ++i) {
            seqs.emplace_back("r" + std::to_string(i), testing::random_residues(rng, 1 + rng.below(150)));
        }
        const std::size_t width = 1 + rng.below(80);
        CHECK(parse_fasta(format_fasta(seqs, width)) == seqs);
    }
}

TEST_CASE("parse_labels_csv") {
    const auto labels = parse_labels_csv("id,label\ns1,HeadNeck\n");
    CHECK(labels == std::map<std::string, std::string>{{"s1", "HeadNeck"}});

    const auto trimmed = parse_labels_csv("label , id\n  Ovarian , s2 \n");
    CHECK(trimmed.at("s2") == "Ovarian");

    CHECK_THROWS_AS(parse_labels_csv("id,label\ns1,A\ns1,B\n"), DataError);
    CHECK_THROWS_AS(parse_labels_csv("sequence,cancer\nAC,HeadNeck\n"), DataError);
    CHECK_THROWS_AS(parse_labels_csv("id,label\ns1,\n"), DataError);
}

namespace {

DatasetManifest manifest_with_classes(const std::vector<std::size_t>& sizes) {
    DatasetManifest m;
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        char name[16];
        std::snprintf(name, sizeof name, "k%03zu", c);
        m.class_names.emplace_back(name);
        for (std::size_t i = 0; i < sizes[c]; ++i) {
            m.entries.push_back({std::string(name) + "_" + std::to_string(i), "", name, Split::Unassigned, "A"});
        }
    }
    return m;
}

std::vector<std::size_t> test_counts(const DatasetManifest& m) {
    std::vector<std::size_t> counts(m.class_names.size(), 0);
    for (const auto& e : m.entries) {
        if (e.split == Split::Test) ++counts[m.class_index(e.label)];
    }
    return counts;
}

}  // namespace

TEST_CASE("stratum test count rounding") {
    CHECK(stratum_test_count(6, 0.2) == 1);   // 1.2
    CHECK(stratum_test_count(4, 0.2) == 1);   // 0.8
    CHECK(stratum_test_count(2, 0.2) == 1);   // floor of 1
    CHECK(stratum_test_count(5, 0.5) == 3);   // 2.5 rounds up
    CHECK(stratum_test_count(10, 0.25) == 3); // 2.5 rounds up
}

TEST_CASE("stratified_split worked examples") {
    const auto small = stratified_split(manifest_with_classes({6, 4}), {0.2, 3, true});
    CHECK(test_counts(small) == std::vector<std::size_t>{1, 1});

    // Class sizes of the four-cancer TCR table.
    const auto big = stratified_split(manifest_with_classes({5230, 583, 2887, 5505}), {0.2, 1, true});
    CHECK(test_counts(big) == std::vector<std::size_t>{1046, 117, 577, 1101});
}

TEST_CASE("stratified_split is deterministic and total") {
    const auto m = manifest_with_classes({7, 9, 13});
    const auto a = stratified_split(m, {0.3, 42, true});
    const auto b = stratified_split(m, {0.3, 42, true});
    CHECK(a == b);
    for (const auto& e : a.entries) CHECK(e.split != Split::Unassigned);
    const auto c = stratified_split(m, {0.3, 43, true});
    CHECK_FALSE(a == c);
}

TEST_CASE("stratified_split property: per-class counts within 1 of the target") {
    SplitMix64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::size_t> sizes(2 + rng.below(5));
        for (auto& s : sizes) s = 2 + rng.below(60);
        const double f = 0.05 + 0.5 * rng.uniform();
        const auto m = manifest_with_classes(sizes);
        DatasetManifest out;
        try {
            out = stratified_split(m, {f, rng.next(), true});
        } catch (const DataError&) {
            // only legitimate when some class would lose its whole training side
            bool starved = false;
            for (auto s : sizes) starved = starved || stratum_test_count(s, f) >= s;
            CHECK(starved);
            continue;
        }
        const auto counts = test_counts(out);
        for (std::size_t c = 0; c < sizes.size(); ++c) {
            CHECK(std::fabs(static_cast<double>(counts[c]) - f * static_cast<double>(sizes[c])) <= 1.0);
        }
    }
}

TEST_CASE("stratified_split errors") {
    CHECK_THROWS_AS(stratified_split(manifest_with_classes({5, 1}), {0.2, 0, true}), DataError);
    CHECK_THROWS_AS(stratified_split(manifest_with_classes({5, 5}), {0.0, 0, true}), DataError);
    CHECK_THROWS_AS(stratified_split(manifest_with_classes({5, 5}), {1.0, 0, true}), DataError);
    CHECK_THROWS_AS(stratified_split(manifest_with_classes({5, 2}), {0.9, 0, true}), DataError);
}

TEST_CASE("manifest JSON round trip and validation") {
    auto m = stratified_split(manifest_with_classes({3, 4}), {0.25, 9, true});
    m.entries[0].path = "img/k000_0.pgm";
    m.ohe_max_len = 17;
    CHECK(manifest_from_json(manifest_to_json(m)) == m);

    CHECK_THROWS_AS(manifest_from_json(R"({"seed":1,"classes":["a"],"entries":[{"id":"x","path":"","label":"b","split":"train"}]})"),
                    DataError);
    CHECK_THROWS_AS(manifest_from_json(R"({"seed":1,"classes":["a"],"entries":[{"id":"x","path":"","label":"a","split":"train"},{"id":"y","path":"","label":"a","split":"unassigned"}]})"),
                    DataError);
}

TEST_CASE("synth_dataset construction contract") {
    const SynthResult r = synth_dataset({4, 50, 12, 18, 4, 7});
    REQUIRE(r.sequences.size() == 200);
    REQUIRE(r.motifs.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) {
        for (std::size_t j = 0; j < k; ++j) CHECK(r.motifs[j] != r.motifs[k]);
    }
    for (const auto& s : r.sequences) {
        const auto k = static_cast<std::size_t>(std::stoi(s.label()->substr(5)));
        CHECK(s.residues().find(r.motifs[k]) != std::string::npos);
        CHECK(s.size() >= 12);
        CHECK(s.size() <= 18);
    }
    const SynthResult again = synth_dataset({4, 50, 12, 18, 4, 7});
    CHECK(format_fasta(again.sequences) == format_fasta(r.sequences));
    CHECK(format_labels_csv(again.sequences) == format_labels_csv(r.sequences));
    const SynthResult other = synth_dataset({4, 50, 12, 18, 4, 8});
    CHECK(format_fasta(other.sequences) != format_fasta(r.sequences));
}

TEST_CASE("synth_dataset boundary lengths and errors") {
    const SynthResult r = synth_dataset({2, 10, 5, 5, 4, 1});
    CHECK(r.sequences.size() == 20);
    for (const auto& s : r.sequences) {
        CHECK(s.size() == 5);
        const auto k = static_cast<std::size_t>(std::stoi(s.label()->substr(5)));
        CHECK(s.residues().find(r.motifs[k]) != std::string::npos);
    }
    CHECK_THROWS_AS(synth_dataset({4, 5, 18, 12, 4, 1}), DataError);
    CHECK_THROWS_AS(synth_dataset({1, 5, 12, 18, 4, 1}), DataError);
    CHECK_THROWS_AS(synth_dataset({2, 5, 12, 18, 2, 1}), DataError);
    CHECK_THROWS_AS(synth_dataset({2, 5, 3, 18, 4, 1}), DataError);
    // 20^3 = 8000 distinct motifs cannot serve 9000 classes
    CHECK_THROWS_AS(synth_dataset({9000, 1, 3, 3, 3, 1}), DataError);
}

TEST_CASE("SplitMix64 reference values") {
    // First outputs for seed 1234567 from the published reference implementation.
    SplitMix64 rng(1234567);
    CHECK(rng.next() == 6457827717110365317ULL);
    CHECK(rng.next() == 3203168211198807973ULL);
    CHECK(rng.next() == 9817491932198370423ULL);
}
