// Serial reference vs OpenMP variant for each parallel kernel.
#include <benchmark/benchmark.h>

#include "dance/batch.hpp"
#include "dance/classify.hpp"
#include "dance/kaleidoscope.hpp"
#include "dance/rng.hpp"

using namespace dance;

namespace {

std::string residues(SplitMix64& rng, std::size_t n) {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s.push_back(kAminoAcids[rng.below(kAlphabetSize)]);
    return s;
}

std::vector<ProteinSequence> batch(std::size_t count) {
    SplitMix64 rng(1);
    std::vector<ProteinSequence> seqs;
    for (std::size_t i = 0; i < count; ++i) seqs.emplace_back("b" + std::to_string(i), residues(rng, 15));
    return seqs;
}

FeatureMatrix random_matrix(SplitMix64& rng, std::size_t rows, std::size_t dim) {
    FeatureMatrix m;
    m.class_names = {"a", "b", "c", "d"};
    for (std::size_t i = 0; i < rows; ++i) {
        std::vector<double> row(dim);
        for (double& v : row) v = rng.uniform();
        m.ids.push_back("r" + std::to_string(i));
        m.rows.push_back(std::move(row));
        m.labels.push_back(static_cast<int>(rng.below(4)));
    }
    return m;
}

void BM_RenderBatch(benchmark::State& state) {
    const auto seqs = batch(64);
    const RenderSettings settings;
    const Execution exec = state.range(0) ? Execution::Parallel : Execution::Serial;
    for (auto _ : state) benchmark::DoNotOptimize(render_batch(seqs, settings, exec));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(seqs.size()));
}
BENCHMARK(BM_RenderBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Kaleidoscope(benchmark::State& state) {
    SplitMix64 rng(2);
    const std::string seq = residues(rng, 25);
    const KaleidoscopeParams params{.depth = 6};
    for (auto _ : state) {
        if (state.range(0)) {
            benchmark::DoNotOptimize(generate_kaleidoscope_omp(seq, params));
        } else {
            benchmark::DoNotOptimize(generate_kaleidoscope(seq, params));
        }
    }
}
BENCHMARK(BM_Kaleidoscope)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_KnnPredict(benchmark::State& state) {
    SplitMix64 rng(3);
    const KnnModel model = knn_fit(random_matrix(rng, 640, 1444), 5, Metric::Euclidean);
    const FeatureMatrix queries = random_matrix(rng, 160, 1444);
    const Execution exec = state.range(0) ? Execution::Parallel : Execution::Serial;
    for (auto _ : state) benchmark::DoNotOptimize(knn_predict(model, queries, exec));
}
BENCHMARK(BM_KnnPredict)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
