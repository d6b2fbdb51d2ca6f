#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctxspell/bayes.hpp"
#include "ctxspell/corpus.hpp"
#include "ctxspell/features.hpp"
#include "ctxspell/report.hpp"
#include "ctxspell/winnow.hpp"

namespace ctxspell {

enum class Algorithm { Bayes, WinnowS };
enum class Regime { Within, Across, SupUnsup, Incremental };

std::string to_string(Algorithm a);
std::string to_string(Regime r);
std::string to_string(Pruning p);

struct ExperimentConfig {
    std::vector<Algorithm> algorithms{Algorithm::Bayes, Algorithm::WinnowS};
    // Within-corpus runs report every listed condition side by side; the
    // other regimes use the first.
    std::vector<Pruning> prunings{Pruning::Unpruned};
    Regime regime = Regime::Within;
    // Share of corpus A's sentences used for training.
    double train_fraction = 0.8;
    // Share of corpus B's sentences sampled as the across-corpus test set.
    double test_fraction = 0.4;
    // Share of corpus B's sentences used as unsupervised training text; the
    // rest is the sup/unsup and incremental test set.
    double unsup_fraction = 0.6;
    double corruption_percent = 5.0;
    std::uint64_t seed = 1;
    ExtractionConfig extraction;
    bayes::Config bayes;
    winnow::Params winnow;

    bool uses(Algorithm a) const;
    void validate() const;
};

// A block of training occurrences and which label to learn from.
struct TrainingPart {
    const Corpus* corpus = nullptr;
    std::span<const Occurrence> occurrences;
    LabelSource labels = LabelSource::Gold;
};

// Both learners trained on the same data with a shared feature set.
struct Learners {
    std::size_t feature_count = 0;
    std::optional<bayes::Model> bayes;
    std::optional<winnow::Model> winnows;

    std::size_t classify(Algorithm a, std::span<const Feature> extracted) const;
};

// Collects stats over all parts, prunes, trains Bayes from the merged counts
// and WinnowS sequentially over the parts in order, one pass.
Learners train_learners(const ConfusionSet& set, std::span<const TrainingPart> parts, Pruning pruning,
                        const ExperimentConfig& config);

std::vector<std::size_t> predict(const Learners& learners, Algorithm algorithm, const Corpus& corpus,
                                 std::span<const Occurrence> test, const ExtractionConfig& extraction);
// Accuracy against gold labels.
double evaluate(const Learners& learners, Algorithm algorithm, const Corpus& corpus,
                std::span<const Occurrence> test, const ExtractionConfig& extraction);

// Predict-then-train over `test` in order; returns accuracy of the
// predictions made before each answer was revealed. The learner is updated.
double evaluate_incremental(Learners& learners, Algorithm algorithm, const Corpus& corpus,
                            std::span<const Occurrence> test, const ExtractionConfig& extraction);

// The corpus-B partition shared by the sup/unsup and incremental regimes.
struct UnsupSplit {
    std::vector<Occurrence> unsup;  // uncorrupted
    std::vector<Occurrence> test;
};
UnsupSplit split_unsup(std::span<const Occurrence> occurrences, const ExperimentConfig& config);
std::vector<Occurrence> corrupt_unsup(std::span<const Occurrence> unsup, double percent,
                                      std::size_t member_count, const ExperimentConfig& config);

EvalReport run_within(const ExperimentConfig& config, const Corpus& a, std::span<const ConfusionSet> sets);
EvalReport run_across(const ExperimentConfig& config, const Corpus& a, const Corpus& b,
                      std::span<const ConfusionSet> sets);
EvalReport run_supunsup(const ExperimentConfig& config, const Corpus& a, const Corpus& b,
                        std::span<const ConfusionSet> sets);
// Tests on corpus B's held-out part when `b` is given, else on corpus A's
// within-corpus test split.
EvalReport run_incremental(const ExperimentConfig& config, const Corpus& a, const Corpus* b,
                           std::span<const ConfusionSet> sets);

struct SweepPoint {
    double percent = 0.0;
    double sup_only = 0.0;
    double sup_unsup = 0.0;
};

struct SweepSeries {
    std::string set_id;
    Algorithm algorithm;
    std::vector<SweepPoint> points;
};

std::vector<SweepSeries> corruption_sweep(const ExperimentConfig& config, const Corpus& a, const Corpus& b,
                                          std::span<const ConfusionSet> sets,
                                          std::span<const double> percents);
// Long format: confusion set, percent, series, accuracy.
EvalReport sweep_report(std::span<const SweepSeries> series);

EvalReport run_regime(const ExperimentConfig& config, const Corpus& a, const Corpus* b,
                      std::span<const ConfusionSet> sets);

// Confusion sets ordered by id.
std::vector<ConfusionSet> sorted_sets(std::span<const ConfusionSet> sets);

}  // namespace ctxspell
