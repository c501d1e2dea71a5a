#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dance/cli.hpp"
#include "dance/raster.hpp"
#include "dance/seqdata.hpp"

using namespace dance;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "dance");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& leaf) const { return (path / leaf).string(); }
};

const char* kThree = ">s1\nACDEFGHIK\n>s2\nLMNPQRSTVWY\n>s3\nMKTAYIAKQR\n";
const char* kThreeLabels = "id,label\ns1,x\ns2,y\ns3,x\n";

}  // namespace

TEST_CASE("render writes images and a manifest, deterministically") {
    TempDir dir("dance_cli_render");
    spit(dir / "in.fasta", kThree);
    spit(dir / "labels.csv", kThreeLabels);
    const Result r = run({"render", "--fasta", dir / "in.fasta", "--labels", dir / "labels.csv", "--out",
                          dir / "img", "--depth", "2", "--size", "64x48"});
    REQUIRE(r.code == 0);
    const DatasetManifest m = read_manifest(dir / "img/manifest.json");
    REQUIRE(m.entries.size() == 3);
    CHECK(m.class_names == std::vector<std::string>{"x", "y"});
    for (const auto& e : m.entries) {
        CHECK(e.path == e.id + ".pgm");
        const RasterImage img = load_image(dir / ("img/" + e.path));
        CHECK(img.width() == 64);
        CHECK(img.height() == 48);
    }
    const std::string first = slurp(dir / "img/s2.pgm");

    REQUIRE(run({"render", "--fasta", dir / "in.fasta", "--labels", dir / "labels.csv", "--out", dir / "img2",
                 "--depth", "2", "--size", "64x48", "--jobs", "3"})
                .code == 0);
    CHECK(slurp(dir / "img2/s2.pgm") == first);

    REQUIRE(run({"render", "--fasta", dir / "in.fasta", "--out", dir / "png", "--format", "png", "--method",
                 "cgr", "--size", "32x32"})
                .code == 0);
    CHECK(load_image(dir / "png/s1.png").width() == 32);
}

TEST_CASE("invalid residue fails without leaving outputs") {
    TempDir dir("dance_cli_bad");
    spit(dir / "in.fasta", ">ok\nACDE\n>bad\nACXZ\n");
    const Result r = run({"render", "--fasta", dir / "in.fasta", "--out", dir / "img"});
    CHECK(r.code == 2);
    CHECK_FALSE(r.err.empty());
    CHECK_FALSE(fs::exists(dir / "img/manifest.json"));
    CHECK_FALSE(fs::exists(dir / "img/ok.pgm"));
}

TEST_CASE("usage errors") {
    TempDir dir("dance_cli_usage");
    spit(dir / "in.fasta", kThree);
    spit(dir / "cfg.json", R"({"kaleidoscope": {"depth": 3, "bogus": 1}})");
    CHECK(run({"render", "--fasta", dir / "in.fasta", "--out", dir / "o", "--config", dir / "cfg.json"}).code == 1);
    CHECK(run({"render", "--fasta", dir / "in.fasta", "--out", dir / "o", "--depth", "40"}).code == 1);
    CHECK(run({"render", "--fasta", dir / "in.fasta", "--out", dir / "o", "--format", "gif"}).code == 1);
    CHECK(run({"nonsense"}).code == 1);
    CHECK(run({}).code == 1);
    CHECK(run({"render", "--fasta", dir / "missing.fasta", "--out", dir / "o"}).code == 2);
}

TEST_CASE("full pipeline and report schema") {
    TempDir dir("dance_cli_pipeline");
    REQUIRE(run({"synth", "--classes", "3", "--per-class", "12", "--seed", "5", "--out", dir / "data"}).code == 0);
    REQUIRE(run({"render", "--fasta", dir / "data/sequences.fasta", "--labels", dir / "data/labels.csv", "--out",
                 dir / "img", "--depth", "2", "--size", "40x40"})
                .code == 0);
    REQUIRE(run({"split", "--manifest", dir / "img/manifest.json", "--seed", "3"}).code == 0);
    const DatasetManifest m = read_manifest(dir / "img/manifest.json");
    std::size_t tests = 0;
    for (const auto& e : m.entries) tests += e.split == Split::Test;
    CHECK(tests == 6);

    for (const char* split : {"train", "test"}) {
        REQUIRE(run({"featurize", "--manifest", dir / "img/manifest.json", "--mode", "pixels", "--downsample", "4",
                     "--split", split, "--out", dir / (std::string(split) + ".csv")})
                    .code == 0);
    }
    REQUIRE(run({"train", "--features", dir / "train.csv", "--model", "knn", "--k", "3", "--out", dir / "knn.bin"})
                .code == 0);
    REQUIRE(run({"predict", "--model", dir / "knn.bin", "--features", dir / "test.csv", "--out", dir / "pred.json"})
                .code == 0);

    const auto preds = nlohmann::json::parse(slurp(dir / "pred.json"));
    REQUIRE(preds.is_array());
    REQUIRE(preds.size() == 6);
    for (const auto& item : preds) {
        CHECK(item.contains("id"));
        CHECK(item["true"].is_string());
        CHECK(item["pred"].is_string());
        CHECK(item["proba"].size() == 3);
    }

    const Result ev = run({"eval", "--predictions", dir / "pred.json", "--model", dir / "knn.bin", "--out",
                           dir / "report.json", "--name", "pixels-knn"});
    REQUIRE(ev.code == 0);
    CHECK(ev.out.find("pixels-knn") != std::string::npos);
    const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
    for (const char* key : {"accuracy", "precision_weighted", "recall_weighted", "f1_weighted", "f1_macro",
                            "roc_auc_ovr", "train_time_s", "per_class"}) {
        CHECK(report.contains(key));
    }

    // ohe with logistic regression, binary feature files
    REQUIRE(run({"featurize", "--manifest", dir / "img/manifest.json", "--mode", "ohe", "--split", "train", "--out",
                 dir / "ohe_train.bin"})
                .code == 0);
    REQUIRE(run({"featurize", "--manifest", dir / "img/manifest.json", "--mode", "ohe", "--split", "test", "--out",
                 dir / "ohe_test.bin"})
                .code == 0);
    REQUIRE(run({"train", "--features", dir / "ohe_train.bin", "--model", "logreg", "--epochs", "3", "--out",
                 dir / "lr.bin"})
                .code == 0);
    REQUIRE(run({"predict", "--model", dir / "lr.bin", "--features", dir / "ohe_test.bin", "--out",
                 dir / "lr_pred.json"})
                .code == 0);
    CHECK(run({"eval", "--predictions", dir / "lr_pred.json", "--train-time", "0.5"}).code == 0);
}

TEST_CASE("segment and fcgr exports") {
    TempDir dir("dance_cli_exports");
    const Result r = run({"segments", "--sequence", "A", "--depth", "1"});
    REQUIRE(r.code == 0);
    CHECK(r.out == "10 0 0.5 0.5\n10 0 0.5 -0.5\n-10 -0 0.5 0.5\n-10 -0 0.5 -0.5\n");
    CHECK(run({"segments", "--sequence", "AXZ"}).code == 2);

    spit(dir / "in.fasta", kThree);
    REQUIRE(run({"fcgr", "--fasta", dir / "in.fasta", "--out", dir / "grids", "--resolution", "2"}).code == 0);
    CHECK(fs::exists(dir / "grids/s1.csv"));
}

TEST_CASE("installed binary exit codes") {
    const std::string bin = DANCE_CLI_PATH;
    CHECK(std::system((bin + " --help > /dev/null").c_str()) == 0);
    const int bad = std::system((bin + " segments --sequence ZZ > /dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(bad) == 2);
    const int usage = std::system((bin + " segments > /dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(usage) == 1);
}
