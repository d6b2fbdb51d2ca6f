#include "ctxspell/bayes.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ctxspell::bayes {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool same_score(double a, double b) {
    if (a == b) return true;
    if (std::isinf(a) || std::isinf(b)) return false;
    return std::abs(a - b) <= 1e-9 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

bool overlaps(const Feature& a, const Feature& b) {
    return a.first() <= b.last() && b.first() <= a.last();
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
}

}  // namespace

double smoothed_prob(std::uint64_t count_fw, std::uint64_t n_w, std::uint64_t count_f,
                     std::uint64_t n, double kappa) {
    if (n_w == 0) throw std::invalid_argument("smoothed_prob: member has no training occurrences");
    if (kappa < 0.0) throw std::invalid_argument("smoothed_prob: kappa must be non-negative");
    const double lambda = static_cast<double>(n_w) / (static_cast<double>(n_w) + kappa);
    const double mle = static_cast<double>(count_fw) / static_cast<double>(n_w);
    if (lambda == 1.0) return mle;
    const double unigram = n == 0 ? 0.0 : static_cast<double>(count_f) / static_cast<double>(n);
    return lambda * mle + (1.0 - lambda) * unigram;
}

Model::Model(ConfusionSet set, FeatureSet features, Config config, ExtractionConfig extraction)
    : set_(std::move(set)),
      features_(std::move(features)),
      config_(config),
      extraction_(extraction) {
    if (features_.member_count() != set_.size()) {
        throw std::invalid_argument("feature stats do not match the confusion set");
    }
    if (config_.kappa < 0.0) throw std::invalid_argument("kappa must be non-negative");
    extraction_.validate();
    chi_.resize(features_.feature_count());
    for (FeatureId id = 0; id < features_.feature_count(); ++id) {
        chi_[id] = features_.total() == 0 ? 0.0 : feature_chi_square(features_, id);
    }
}

double Model::prior(std::size_t member) const {
    const auto n = features_.total();
    if (n == 0) return 0.0;
    return static_cast<double>(features_.member_total(member)) / static_cast<double>(n);
}

double Model::smoothed_prob(FeatureId id, std::size_t member) const {
    return bayes::smoothed_prob(features_.count(id, member), features_.member_total(member),
                                features_.present(id), features_.total(), config_.kappa);
}

std::vector<Feature> Model::resolve_dependencies(std::span<const Feature> matched) const {
    std::vector<std::size_t> colls;
    for (std::size_t i = 0; i < matched.size(); ++i) {
        if (matched[i].is_collocation()) colls.push_back(i);
    }
    std::vector<std::size_t> parent(colls.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    for (std::size_t a = 0; a < colls.size(); ++a) {
        for (std::size_t b = a + 1; b < colls.size(); ++b) {
            if (overlaps(matched[colls[a]], matched[colls[b]])) {
                parent[find_root(parent, a)] = find_root(parent, b);
            }
        }
    }
    auto chi_of = [&](const Feature& f) {
        const auto id = features_.find(f);
        return id ? chi_[*id] : 0.0;
    };
    auto better = [&](const Feature& a, const Feature& b) {
        const double ca = chi_of(a);
        const double cb = chi_of(b);
        if (ca != cb) return ca > cb;
        if (a.elements.size() != b.elements.size()) return a.elements.size() > b.elements.size();
        return dump_feature(a) < dump_feature(b);
    };
    std::vector<std::size_t> winner(colls.size(), colls.size());
    for (std::size_t a = 0; a < colls.size(); ++a) {
        const std::size_t root = find_root(parent, a);
        if (winner[root] == colls.size() || better(matched[colls[a]], matched[colls[winner[root]]])) {
            winner[root] = a;
        }
    }
    std::vector<bool> keep(matched.size(), true);
    for (std::size_t a = 0; a < colls.size(); ++a) {
        keep[colls[a]] = winner[find_root(parent, a)] == a;
    }
    std::vector<Feature> out;
    for (std::size_t i = 0; i < matched.size(); ++i) {
        if (keep[i]) out.push_back(matched[i]);
    }
    return out;
}

double Model::score(std::span<const Feature> matched, std::size_t member) const {
    const double p = prior(member);
    if (p <= 0.0) return kNegInf;
    std::vector<Feature> reduced;
    if (config_.resolve_dependencies) {
        reduced = resolve_dependencies(matched);
        matched = reduced;
    }
    double s = std::log(p);
    for (const auto& f : matched) {
        const auto id = features_.find(f);
        if (!id) continue;
        s += std::log(smoothed_prob(*id, member));
    }
    return s;
}

std::vector<double> Model::scores(std::span<const Feature> matched) const {
    std::vector<double> out(member_count());
    for (std::size_t m = 0; m < member_count(); ++m) out[m] = score(matched, m);
    return out;
}

std::size_t argmax_with_priors(std::span<const double> scores, std::span<const double> priors) {
    std::size_t best = 0;
    for (std::size_t m = 1; m < scores.size(); ++m) {
        if (same_score(scores[m], scores[best])) {
            if (priors[m] > priors[best]) best = m;
        } else if (scores[m] > scores[best]) {
            best = m;
        }
    }
    return best;
}

std::size_t Model::classify(std::span<const Feature> extracted) const {
    const auto matched = match_features(extracted, features_);
    const auto s = scores(matched);
    std::vector<double> priors(member_count());
    for (std::size_t m = 0; m < member_count(); ++m) priors[m] = prior(m);
    return argmax_with_priors(s, priors);
}

void Model::observe(std::span<const Feature> extracted, std::size_t member) {
    features_.add(match_features(extracted, features_), member);
}

Model train_from_stats(const ConfusionSet& set, const FeatureStats& stats, Pruning pruning,
                       const Config& config, const ExtractionConfig& extraction) {
    if (stats.total() == 0) throw std::invalid_argument("train_bayes: empty training set");
    return Model(set, prune(stats, pruning), config, extraction);
}

Model train(const Corpus& corpus, std::span<const Occurrence> occurrences, const ConfusionSet& set,
            Pruning pruning, const Config& config, const ExtractionConfig& extraction,
            LabelSource labels) {
    return train_from_stats(set, collect_stats(corpus, occurrences, set.size(), extraction, labels),
                            pruning, config, extraction);
}

}  // namespace ctxspell::bayes
