#include <doctest.h>

#include <cstdlib>

#include "dance/batch.hpp"
#include "dance/classify.hpp"
#include "dance/error.hpp"
#include "dance/kaleidoscope.hpp"
#include "test_util.hpp"

using namespace dance;

namespace {

std::vector<ProteinSequence> random_sequences(std::uint64_t seed, std::size_t count) {
    SplitMix64 rng(seed);
    std::vector<ProteinSequence> seqs;
    for (std::size_t i = 0; i < count; ++i) {
        seqs.emplace_back("s" + std::to_string(i), testing::random_residues(rng, 5 + rng.below(20)));
    }
    return seqs;
}

}  // namespace

TEST_CASE("parallel kaleidoscope equals the serial reference") {
    SplitMix64 rng(71);
    for (int trial = 0; trial < 30; ++trial) {
        const std::string seq = testing::random_residues(rng, rng.below(25));
        KaleidoscopeParams p;
        p.depth = static_cast<int>(rng.below(6));
        p.angle = 6.3 * rng.uniform();
        p.pos = {rng.uniform() - 0.5, rng.uniform() - 0.5};
        CHECK(generate_kaleidoscope_omp(seq, p) == generate_kaleidoscope(seq, p));
    }
    KaleidoscopeParams memo;
    memo.memoize = true;
    CHECK(generate_kaleidoscope_omp("ACQRSTAGTACGT", memo) == generate_kaleidoscope("ACQRSTAGTACGT", memo));
    CHECK_THROWS_AS(generate_kaleidoscope_omp("A", {.depth = 20}), DataError);
}

TEST_CASE("render_batch is independent of execution mode and thread count") {
    const auto seqs = random_sequences(73, 24);
    for (RenderMethod method : {RenderMethod::Dance, RenderMethod::Cgr}) {
        RenderSettings settings;
        settings.method = method;
        settings.kaleidoscope.depth = 3;
        settings.raster.width = 96;
        settings.raster.height = 96;
        const auto serial = render_batch(seqs, settings, Execution::Serial);
        REQUIRE(serial.size() == seqs.size());
        for (int jobs : {1, 2, 8}) {
            const auto parallel = render_batch(seqs, settings, Execution::Parallel, jobs);
            REQUIRE(parallel.size() == serial.size());
            for (std::size_t i = 0; i < serial.size(); ++i) {
                REQUIRE(serial[i].image.has_value());
                REQUIRE(parallel[i].image.has_value());
                CHECK(parallel[i].image->same_pixels(*serial[i].image));
                CHECK(render_sequence(seqs[i].residues(), settings).same_pixels(*serial[i].image));
            }
        }
    }
}

TEST_CASE("render_batch reports per-item failures") {
    std::vector<ProteinSequence> seqs = random_sequences(79, 3);
    seqs.push_back(ProteinSequence::unchecked("bad", "ACBX"));
    RenderSettings settings;
    settings.kaleidoscope.depth = 2;
    settings.raster.width = 32;
    settings.raster.height = 32;
    const auto out = render_batch(seqs, settings, Execution::Parallel, 4);
    CHECK(out[0].image.has_value());
    CHECK_FALSE(out[3].image.has_value());
    CHECK_FALSE(out[3].error.empty());
}

TEST_CASE("knn serial and parallel agree") {
    SplitMix64 rng(83);
    FeatureMatrix train, test;
    train.class_names = test.class_names = {"a", "b", "c"};
    for (int i = 0; i < 200; ++i) {
        FeatureMatrix& m = i < 150 ? train : test;
        m.ids.push_back("x" + std::to_string(i));
        m.rows.push_back({rng.uniform(), rng.uniform(), rng.uniform()});
        m.labels.push_back(static_cast<int>(rng.below(3)));
    }
    const KnnModel model = knn_fit(train, 7, Metric::Euclidean);
    CHECK(knn_predict(model, test, Execution::Parallel) == knn_predict(model, test, Execution::Serial));
}

TEST_CASE("job resolution") {
    unsetenv("DANCE_NO_PARALLEL");
    CHECK(resolve_jobs(3) == 3);
    CHECK(resolve_jobs(0) >= 1);
    CHECK(execution_for(1) == Execution::Serial);
    CHECK(execution_for(4) == Execution::Parallel);
    setenv("DANCE_NO_PARALLEL", "1", 1);
    CHECK(resolve_jobs(8) == 1);
    CHECK(execution_for(8) == Execution::Serial);
    unsetenv("DANCE_NO_PARALLEL");
}
