#include <benchmark/benchmark.h>

#include "ctxspell/harness.hpp"
#include "ctxspell/random.hpp"
#include "ctxspell/synthetic.hpp"

using namespace ctxspell;

namespace {

const synthetic::Fixture& fixture() {
    static const auto f = synthetic::domain_shift(1);
    return f;
}

void BM_ExtractFeatures(benchmark::State& state) {
    const auto& f = fixture();
    const auto occs = find_occurrences(f.b, f.set);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(extract_features(f.b, occs[i++ % occs.size()], {}));
    }
}
BENCHMARK(BM_ExtractFeatures);

void BM_TrainLearners(benchmark::State& state) {
    const auto& f = fixture();
    const auto occs = find_occurrences(f.a, f.set);
    const TrainingPart part{&f.a, occs, LabelSource::Gold};
    ExperimentConfig config;
    config.algorithms = {state.range(0) ? Algorithm::WinnowS : Algorithm::Bayes};
    for (auto _ : state) {
        benchmark::DoNotOptimize(train_learners(f.set, std::span(&part, 1), Pruning::Unpruned, config));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * occs.size()));
}
BENCHMARK(BM_TrainLearners)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Classify(benchmark::State& state) {
    const auto& f = fixture();
    const auto occs = find_occurrences(f.a, f.set);
    const TrainingPart part{&f.a, occs, LabelSource::Gold};
    const auto learners = train_learners(f.set, std::span(&part, 1), Pruning::Unpruned, {});
    const auto test = find_occurrences(f.b, f.set);
    std::vector<std::vector<Feature>> features;
    for (const auto& o : test) features.push_back(extract_features(f.b, o, {}));
    const auto algorithm = state.range(0) ? Algorithm::WinnowS : Algorithm::Bayes;
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(learners.classify(algorithm, features[i++ % features.size()]));
    }
}
BENCHMARK(BM_Classify)->Arg(0)->Arg(1);

// A single node on a sparse 10-disjunction over 10,000 attributes.
void BM_NodeUpdate(benchmark::State& state) {
    Rng rng(1);
    std::vector<winnow::ActiveSet> examples(1000);
    for (auto& a : examples) {
        for (FeatureId id = 0; id < 10000; ++id) {
            if (rng.chance(0.1)) a.push_back(id);
        }
    }
    winnow::Node node(0.5);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& a = examples[i++ % examples.size()];
        benchmark::DoNotOptimize(node.update(a, !a.empty() && a.front() < 10));
    }
}
BENCHMARK(BM_NodeUpdate);

}  // namespace

BENCHMARK_MAIN();
