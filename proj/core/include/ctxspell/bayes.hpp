#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ctxspell/corpus.hpp"
#include "ctxspell/features.hpp"

namespace ctxspell::bayes {

struct Config {
    // Interpolation strength: lambda = N(w) / (N(w) + kappa). Zero gives the
    // plain maximum-likelihood estimate.
    double kappa = 10.0;
    // Delete overlapping collocations before scoring.
    bool resolve_dependencies = true;
};

// lambda * (count_fw / n_w) + (1 - lambda) * (count_f / n).
double smoothed_prob(std::uint64_t count_fw, std::uint64_t n_w, std::uint64_t count_f,
                     std::uint64_t n, double kappa);

// Bayesian hybrid classifier for one confusion set. Immutable once trained,
// except for observe(), which the incremental regime uses.
class Model {
public:
    Model(ConfusionSet set, FeatureSet features, Config config, ExtractionConfig extraction);

    const ConfusionSet& confusion_set() const { return set_; }
    const FeatureSet& features() const { return features_; }
    const Config& config() const { return config_; }
    const ExtractionConfig& extraction() const { return extraction_; }
    std::size_t member_count() const { return set_.size(); }

    double prior(std::size_t member) const;
    // Smoothed P(f | member) for a retained feature.
    double smoothed_prob(FeatureId id, std::size_t member) const;
    double chi_square(FeatureId id) const { return chi_[id]; }

    // Keeps every context word and, per group of position-overlapping
    // collocations, only the one with the largest chi-square statistic (ties:
    // longer, then smaller dump line). Input order is preserved.
    std::vector<Feature> resolve_dependencies(std::span<const Feature> matched) const;

    // Log posterior of `member` up to a shared constant, from features already
    // matched against the model's feature set.
    double score(std::span<const Feature> matched, std::size_t member) const;
    std::vector<double> scores(std::span<const Feature> matched) const;

    // Matches `extracted` against the feature set and returns the argmax
    // member; ties go to the larger prior, then the lower index.
    std::size_t classify(std::span<const Feature> extracted) const;

    // Adds one labelled example to the counts of the retained features.
    void observe(std::span<const Feature> extracted, std::size_t member);

private:
    ConfusionSet set_;
    FeatureSet features_;
    Config config_;
    ExtractionConfig extraction_;
    std::vector<double> chi_;
};

// Argmax with the classifier's tie rule, exposed for reuse and testing.
std::size_t argmax_with_priors(std::span<const double> scores, std::span<const double> priors);

Model train_from_stats(const ConfusionSet& set, const FeatureStats& stats, Pruning pruning,
                       const Config& config, const ExtractionConfig& extraction);

Model train(const Corpus& corpus, std::span<const Occurrence> occurrences, const ConfusionSet& set,
            Pruning pruning, const Config& config, const ExtractionConfig& extraction,
            LabelSource labels = LabelSource::Gold);

}  // namespace ctxspell::bayes
