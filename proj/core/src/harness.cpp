#include "ctxspell/harness.hpp"

#include <algorithm>
#include <stdexcept>

#include "ctxspell/random.hpp"

namespace ctxspell {

namespace {

enum SeedStream : std::uint64_t { kAcrossSample = 1, kUnsupSplit = 2, kCorruption = 3 };

std::size_t label_of(const Occurrence& occ, LabelSource labels) {
    return labels == LabelSource::Gold ? occ.gold : occ.actual;
}

std::vector<std::size_t> gold_labels(std::span<const Occurrence> occs) {
    std::vector<std::size_t> out;
    out.reserve(occs.size());
    for (const auto& o : occs) out.push_back(o.gold);
    return out;
}

std::string pruning_group(const ExperimentConfig& config, Pruning p) {
    if (config.prunings.size() < 2) return {};
    return p == Pruning::Pruned ? "Pruned" : "Unpruned";
}

// Train and within-corpus test split of corpus A, or nullopt with a reason.
struct SetData {
    std::vector<Occurrence> train;
    std::vector<Occurrence> test;
    std::string skip;
};

SetData split_a(const ExperimentConfig& config, const Corpus& a, const ConfusionSet& set) {
    SetData data;
    const auto occs = find_occurrences(a, set);
    if (occs.empty()) {
        data.skip = "no occurrences in corpus A";
        return data;
    }
    auto split = split_by_sentence(occs, config.train_fraction, config.seed);
    data.train = std::move(split.train);
    data.test = std::move(split.test);
    if (data.train.empty()) data.skip = "no training occurrences";
    return data;
}

std::vector<Occurrence> sample_b(const ExperimentConfig& config, const Corpus& b, const ConfusionSet& set) {
    const auto occs = find_occurrences(b, set);
    if (occs.empty()) return {};
    return split_by_sentence(occs, config.test_fraction, derive_seed(config.seed, kAcrossSample)).train;
}

}  // namespace

std::string to_string(Algorithm a) { return a == Algorithm::Bayes ? "Bayes" : "WinnowS"; }

std::string to_string(Regime r) {
    switch (r) {
        case Regime::Within: return "within";
        case Regime::Across: return "across";
        case Regime::SupUnsup: return "supunsup";
        case Regime::Incremental: return "incremental";
    }
    return {};
}

std::string to_string(Pruning p) { return p == Pruning::Pruned ? "pruned" : "unpruned"; }

bool ExperimentConfig::uses(Algorithm a) const {
    return std::find(algorithms.begin(), algorithms.end(), a) != algorithms.end();
}

void ExperimentConfig::validate() const {
    if (algorithms.empty()) throw std::invalid_argument("no algorithm selected");
    if (prunings.empty()) throw std::invalid_argument("no pruning condition selected");
    auto fraction = [](double f, const char* what) {
        if (!(f > 0.0 && f < 1.0)) throw std::invalid_argument(std::string(what) + " must lie in (0, 1)");
    };
    fraction(train_fraction, "train fraction");
    fraction(test_fraction, "test fraction");
    fraction(unsup_fraction, "unsup fraction");
    if (!(corruption_percent >= 0.0 && corruption_percent <= 100.0)) {
        throw std::invalid_argument("corruption percent must lie in [0, 100]");
    }
    extraction.validate();
    winnow.validate();
    if (bayes.kappa < 0.0) throw std::invalid_argument("kappa must be non-negative");
}

std::size_t Learners::classify(Algorithm a, std::span<const Feature> extracted) const {
    if (a == Algorithm::Bayes) {
        if (!bayes) throw std::logic_error("Bayes was not trained");
        return bayes->classify(extracted);
    }
    if (!winnows) throw std::logic_error("WinnowS was not trained");
    return winnows->classify(extracted);
}

Learners train_learners(const ConfusionSet& set, std::span<const TrainingPart> parts, Pruning pruning,
                        const ExperimentConfig& config) {
    FeatureStats stats(set.size());
    std::vector<std::vector<std::vector<Feature>>> extracted(parts.size());
    for (std::size_t p = 0; p < parts.size(); ++p) {
        for (const auto& occ : parts[p].occurrences) {
            extracted[p].push_back(extract_features(*parts[p].corpus, occ, config.extraction));
            stats.add(extracted[p].back(), label_of(occ, parts[p].labels));
        }
    }
    if (stats.total() == 0) throw std::invalid_argument("train_learners: empty training set");
    FeatureSet features = prune(stats, pruning);

    Learners learners;
    learners.feature_count = features.feature_count();
    if (config.uses(Algorithm::WinnowS)) {
        winnow::Model model(set, config.winnow, config.extraction);
        for (std::size_t p = 0; p < parts.size(); ++p) {
            for (std::size_t i = 0; i < parts[p].occurrences.size(); ++i) {
                model.train(match_features(extracted[p][i], features),
                            label_of(parts[p].occurrences[i], parts[p].labels));
            }
        }
        learners.winnows.emplace(std::move(model));
    }
    if (config.uses(Algorithm::Bayes)) {
        learners.bayes.emplace(set, std::move(features), config.bayes, config.extraction);
    }
    return learners;
}

std::vector<std::size_t> predict(const Learners& learners, Algorithm algorithm, const Corpus& corpus,
                                 std::span<const Occurrence> test, const ExtractionConfig& extraction) {
    std::vector<std::size_t> out;
    out.reserve(test.size());
    for (const auto& occ : test) out.push_back(learners.classify(algorithm, extract_features(corpus, occ, extraction)));
    return out;
}

double evaluate(const Learners& learners, Algorithm algorithm, const Corpus& corpus,
                std::span<const Occurrence> test, const ExtractionConfig& extraction) {
    return accuracy(predict(learners, algorithm, corpus, test, extraction), gold_labels(test));
}

double evaluate_incremental(Learners& learners, Algorithm algorithm, const Corpus& corpus,
                            std::span<const Occurrence> test, const ExtractionConfig& extraction) {
    std::vector<std::size_t> predictions;
    predictions.reserve(test.size());
    for (const auto& occ : test) {
        const auto features = extract_features(corpus, occ, extraction);
        predictions.push_back(learners.classify(algorithm, features));
        if (algorithm == Algorithm::Bayes) {
            learners.bayes->observe(features, occ.gold);
        } else {
            learners.winnows->train(features, occ.gold);
        }
    }
    return accuracy(predictions, gold_labels(test));
}

UnsupSplit split_unsup(std::span<const Occurrence> occurrences, const ExperimentConfig& config) {
    if (occurrences.empty()) return {};
    auto split = split_by_sentence(occurrences, config.unsup_fraction, derive_seed(config.seed, kUnsupSplit));
    return {std::move(split.train), std::move(split.test)};
}

std::vector<Occurrence> corrupt_unsup(std::span<const Occurrence> unsup, double percent,
                                      std::size_t member_count, const ExperimentConfig& config) {
    return corrupt(unsup, percent, member_count, derive_seed(config.seed, kCorruption));
}

std::vector<ConfusionSet> sorted_sets(std::span<const ConfusionSet> sets) {
    std::vector<ConfusionSet> out(sets.begin(), sets.end());
    std::stable_sort(out.begin(), out.end(),
                     [](const ConfusionSet& x, const ConfusionSet& y) { return x.id() < y.id(); });
    return out;
}

EvalReport run_within(const ExperimentConfig& config, const Corpus& a, std::span<const ConfusionSet> sets) {
    config.validate();
    EvalReport report;
    report.caption = "Within-corpus accuracy; train " + format_percent(100 * config.train_fraction) +
                     "% of corpus A, test on the rest";
    report.columns.push_back({"", "Test cases", ColumnKind::Count});
    for (const auto p : config.prunings) {
        report.columns.push_back({pruning_group(config, p), "Features", ColumnKind::Count});
        for (const auto alg : config.algorithms) {
            report.columns.push_back({pruning_group(config, p), to_string(alg), ColumnKind::Percent});
        }
    }
    for (const auto& set : sorted_sets(sets)) {
        auto data = split_a(config, a, set);
        if (data.skip.empty() && data.test.empty()) data.skip = "no test occurrences";
        if (!data.skip.empty()) {
            report.add_skipped(set.id(), data.skip);
            continue;
        }
        std::vector<Cell> cells{Cell::number(static_cast<double>(data.test.size()))};
        const TrainingPart part{&a, data.train, LabelSource::Gold};
        for (const auto p : config.prunings) {
            const auto learners = train_learners(set, std::span(&part, 1), p, config);
            cells.push_back(Cell::number(static_cast<double>(learners.feature_count)));
            for (const auto alg : config.algorithms) {
                cells.push_back(Cell::number(evaluate(learners, alg, a, data.test, config.extraction)));
            }
        }
        report.add_row(set.id(), std::move(cells));
    }
    return report;
}

EvalReport run_across(const ExperimentConfig& config, const Corpus& a, const Corpus& b,
                      std::span<const ConfusionSet> sets) {
    config.validate();
    EvalReport report;
    report.caption = "Within-corpus versus across-corpus accuracy (" + to_string(config.prunings.front()) + ")";
    report.columns.push_back({"Test cases", "Within", ColumnKind::Count});
    report.columns.push_back({"Test cases", "Across", ColumnKind::Count});
    for (const auto alg : config.algorithms) {
        report.columns.push_back({to_string(alg), "Within", ColumnKind::Percent});
        report.columns.push_back({to_string(alg), "Across", ColumnKind::Percent});
    }
    for (const auto& set : sorted_sets(sets)) {
        auto data = split_a(config, a, set);
        if (data.skip.empty() && data.test.empty()) data.skip = "no within-corpus test occurrences";
        const auto across = data.skip.empty() ? sample_b(config, b, set) : std::vector<Occurrence>{};
        if (data.skip.empty() && across.empty()) data.skip = "no occurrences sampled from corpus B";
        if (!data.skip.empty()) {
            report.add_skipped(set.id(), data.skip);
            continue;
        }
        const TrainingPart part{&a, data.train, LabelSource::Gold};
        const auto learners = train_learners(set, std::span(&part, 1), config.prunings.front(), config);
        std::vector<Cell> cells{Cell::number(static_cast<double>(data.test.size())),
                                Cell::number(static_cast<double>(across.size()))};
        for (const auto alg : config.algorithms) {
            cells.push_back(Cell::number(evaluate(learners, alg, a, data.test, config.extraction)));
            cells.push_back(Cell::number(evaluate(learners, alg, b, across, config.extraction)));
        }
        report.add_row(set.id(), std::move(cells));
    }
    return report;
}

EvalReport run_supunsup(const ExperimentConfig& config, const Corpus& a, const Corpus& b,
                        std::span<const ConfusionSet> sets) {
    config.validate();
    EvalReport report;
    report.caption = "Across-corpus accuracy with sup/unsup training at " +
                     format_percent(config.corruption_percent) + "% corruption";
    report.columns.push_back({"", "Test cases", ColumnKind::Count});
    for (const auto alg : config.algorithms) {
        report.columns.push_back({to_string(alg), "Sup only", ColumnKind::Percent});
        report.columns.push_back({to_string(alg), "Sup/unsup", ColumnKind::Percent});
        if (alg == Algorithm::WinnowS) report.columns.push_back({to_string(alg), "Incr", ColumnKind::Percent});
    }
    const Pruning pruning = config.prunings.front();
    for (const auto& set : sorted_sets(sets)) {
        auto data = split_a(config, a, set);
        const auto parts_b = data.skip.empty() ? split_unsup(find_occurrences(b, set), config) : UnsupSplit{};
        if (data.skip.empty() && parts_b.test.empty()) data.skip = "no test occurrences in corpus B";
        if (!data.skip.empty()) {
            report.add_skipped(set.id(), data.skip);
            continue;
        }
        const auto noisy = corrupt_unsup(parts_b.unsup, config.corruption_percent, set.size(), config);
        const TrainingPart sup{&a, data.train, LabelSource::Gold};
        const TrainingPart both[] = {sup, TrainingPart{&b, noisy, LabelSource::Actual}};
        auto sup_only = train_learners(set, std::span(&sup, 1), pruning, config);
        const auto sup_unsup = train_learners(set, both, pruning, config);

        std::vector<Cell> cells{Cell::number(static_cast<double>(parts_b.test.size()))};
        for (const auto alg : config.algorithms) {
            cells.push_back(Cell::number(evaluate(sup_only, alg, b, parts_b.test, config.extraction)));
            cells.push_back(Cell::number(evaluate(sup_unsup, alg, b, parts_b.test, config.extraction)));
            if (alg == Algorithm::WinnowS) {
                auto incremental = sup_only;
                cells.push_back(Cell::number(
                    evaluate_incremental(incremental, alg, b, parts_b.test, config.extraction)));
            }
        }
        report.add_row(set.id(), std::move(cells));
    }
    return report;
}

EvalReport run_incremental(const ExperimentConfig& config, const Corpus& a, const Corpus* b,
                           std::span<const ConfusionSet> sets) {
    config.validate();
    EvalReport report;
    report.caption = b ? "Incremental learning on the held-out part of corpus B"
                       : "Incremental learning on the within-corpus test split";
    report.columns.push_back({"", "Test cases", ColumnKind::Count});
    for (const auto alg : config.algorithms) {
        report.columns.push_back({to_string(alg), "Sup only", ColumnKind::Percent});
        report.columns.push_back({to_string(alg), "Incr", ColumnKind::Percent});
    }
    for (const auto& set : sorted_sets(sets)) {
        auto data = split_a(config, a, set);
        std::vector<Occurrence> test;
        if (data.skip.empty()) test = b ? split_unsup(find_occurrences(*b, set), config).test : data.test;
        if (data.skip.empty() && test.empty()) data.skip = "no test occurrences";
        if (!data.skip.empty()) {
            report.add_skipped(set.id(), data.skip);
            continue;
        }
        const Corpus& test_corpus = b ? *b : a;
        const TrainingPart sup{&a, data.train, LabelSource::Gold};
        const auto learners = train_learners(set, std::span(&sup, 1), config.prunings.front(), config);
        std::vector<Cell> cells{Cell::number(static_cast<double>(test.size()))};
        for (const auto alg : config.algorithms) {
            cells.push_back(Cell::number(evaluate(learners, alg, test_corpus, test, config.extraction)));
            auto incremental = learners;
            cells.push_back(Cell::number(evaluate_incremental(incremental, alg, test_corpus, test, config.extraction)));
        }
        report.add_row(set.id(), std::move(cells));
    }
    return report;
}

std::vector<SweepSeries> corruption_sweep(const ExperimentConfig& config, const Corpus& a, const Corpus& b,
                                          std::span<const ConfusionSet> sets,
                                          std::span<const double> percents) {
    config.validate();
    if (percents.empty()) throw std::invalid_argument("corruption sweep needs at least one percent");
    for (const double p : percents) {
        if (!(p >= 0.0 && p <= 100.0)) throw std::invalid_argument("corruption percent must lie in [0, 100]");
    }
    const Pruning pruning = config.prunings.front();
    std::vector<SweepSeries> out;
    for (const auto& set : sorted_sets(sets)) {
        auto data = split_a(config, a, set);
        if (!data.skip.empty()) continue;
        const auto parts_b = split_unsup(find_occurrences(b, set), config);
        if (parts_b.test.empty()) continue;
        const TrainingPart sup{&a, data.train, LabelSource::Gold};
        const auto sup_only = train_learners(set, std::span(&sup, 1), pruning, config);

        std::vector<SweepSeries> series;
        std::vector<double> baseline;
        for (const auto alg : config.algorithms) {
            series.push_back({set.id(), alg, {}});
            baseline.push_back(evaluate(sup_only, alg, b, parts_b.test, config.extraction));
        }
        for (const double p : percents) {
            const auto noisy = corrupt_unsup(parts_b.unsup, p, set.size(), config);
            const TrainingPart both[] = {sup, TrainingPart{&b, noisy, LabelSource::Actual}};
            const auto learners = train_learners(set, both, pruning, config);
            for (std::size_t i = 0; i < config.algorithms.size(); ++i) {
                series[i].points.push_back(
                    {p, baseline[i], evaluate(learners, config.algorithms[i], b, parts_b.test, config.extraction)});
            }
        }
        out.insert(out.end(), series.begin(), series.end());
    }
    return out;
}

EvalReport sweep_report(std::span<const SweepSeries> series) {
    EvalReport report;
    report.caption = "Accuracy as a function of the percentage corruption of the unsupervised text";
    report.aggregate = false;
    report.columns = {{"", "Percent", ColumnKind::Number},
                      {"", "Series", ColumnKind::Text},
                      {"", "Accuracy", ColumnKind::Percent}};
    for (const auto& s : series) {
        for (const bool unsup : {false, true}) {
            const std::string name = to_string(s.algorithm) + (unsup ? " sup/unsup" : " sup only");
            for (const auto& pt : s.points) {
                report.add_row(s.set_id, {Cell::number(pt.percent), Cell::label(name),
                                          Cell::number(unsup ? pt.sup_unsup : pt.sup_only)});
            }
        }
    }
    return report;
}

EvalReport run_regime(const ExperimentConfig& config, const Corpus& a, const Corpus* b,
                      std::span<const ConfusionSet> sets) {
    switch (config.regime) {
        case Regime::Within: return run_within(config, a, sets);
        case Regime::Across:
            if (!b) throw std::invalid_argument("the across regime needs a second corpus");
            return run_across(config, a, *b, sets);
        case Regime::SupUnsup:
            if (!b) throw std::invalid_argument("the supunsup regime needs a second corpus");
            return run_supunsup(config, a, *b, sets);
        case Regime::Incremental: return run_incremental(config, a, b, sets);
    }
    throw std::invalid_argument("unknown regime");
}

}  // namespace ctxspell
