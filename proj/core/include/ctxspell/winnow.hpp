#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ctxspell/corpus.hpp"
#include "ctxspell/features.hpp"

namespace ctxspell::winnow {

// A list of active attribute ids, no duplicates.
using ActiveSet = std::vector<FeatureId>;

inline constexpr double kDefaultEpsilon = 0x1.0p-20;
inline constexpr std::uint64_t kSweepInterval = 1000;

// Winnow2 over an open attribute universe. Attributes enter the weight table
// when first promoted; a weight of 0 in the table means "not stored".
class Node {
public:
    explicit Node(double beta, double theta = 1.0, double alpha = 1.5,
                  double epsilon = kDefaultEpsilon);

    double activation(std::span<const FeatureId> active) const;
    bool predict(std::span<const FeatureId> active) const { return activation(active) > theta_; }

    // Mistake-driven update; returns whether the pre-update prediction was
    // wrong.
    bool update(std::span<const FeatureId> active, bool label);

    double weight(FeatureId id) const { return id < weights_.size() ? weights_[id] : 0.0; }
    void set_weight(FeatureId id, double w);
    std::size_t stored() const { return stored_; }
    double max_weight() const;
    // Ids with a stored weight, ascending.
    std::vector<FeatureId> stored_ids() const;

    double theta() const { return theta_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double epsilon() const { return epsilon_; }

    std::uint64_t seen_examples() const { return seen_; }
    double d_estimate() const { return d_; }
    std::uint64_t updates_since_sweep() const { return since_sweep_; }
    void restore_counters(std::uint64_t seen, double d, std::uint64_t since_sweep);

    // Removes every weight below epsilon * max_weight.
    void drop_weak();

private:
    double theta_;
    double alpha_;
    double beta_;
    double epsilon_;
    std::vector<double> weights_;
    std::size_t stored_ = 0;
    std::uint64_t seen_ = 0;
    double d_ = 0.0;
    std::uint64_t since_sweep_ = 0;
};

struct GammaSchedule {
    double gamma_min = 0.5;
    double horizon = 1000.0;  // T
};

// max(gamma_min, 1 - t / T).
double gamma(std::uint64_t t, const GammaSchedule& schedule);

struct Cloud {
    std::size_t member = 0;
    std::vector<Node> nodes;
    std::vector<double> expert_weights;
    std::vector<std::uint64_t> mistakes;

    // Sum over nodes of expert weight times raw activation.
    double score(std::span<const FeatureId> active) const;
    // score() divided by the cloud's total expert weight.
    double normalized_score(std::span<const FeatureId> active) const;
};

// How cloud scores are compared across members. Raw compares score()
// directly; PerCloud compares normalized_score(), so a cloud whose nodes made
// more training mistakes is not outvoted on that account alone.
enum class Combiner { PerCloud, Raw };

struct Params {
    double theta = 1.0;
    double alpha = 1.5;
    std::vector<double> betas{0.5, 0.6, 0.7, 0.8, 0.9};
    double epsilon = kDefaultEpsilon;
    GammaSchedule schedule;
    Combiner combiner = Combiner::PerCloud;

    void validate() const;
};

// WinnowS for one confusion set: one cloud of Winnow nodes per member,
// combined by expert-weighted activation.
class Model {
public:
    Model(ConfusionSet set, Params params, ExtractionConfig extraction);

    const ConfusionSet& confusion_set() const { return set_; }
    const Params& params() const { return params_; }
    const ExtractionConfig& extraction() const { return extraction_; }
    const FeatureIndex& index() const { return index_; }
    std::size_t member_count() const { return set_.size(); }

    const std::vector<Cloud>& clouds() const { return clouds_; }
    Cloud& cloud(std::size_t member) { return clouds_.at(member); }

    // Ids of known features, in input order; unknown features are omitted
    // since they carry no weight anywhere.
    ActiveSet lookup(std::span<const Feature> features) const;
    // Ids of all features, registering new ones.
    ActiveSet intern(std::span<const Feature> features);
    FeatureId intern(const Feature& feature) { return index_.intern(feature); }

    // One training example: positive for the clouds of `actual`, negative for
    // all others. An example on which every node already agrees with its label
    // leaves the model untouched; returns whether anything changed.
    bool train_example(std::span<const FeatureId> active, std::size_t actual);
    bool train(std::span<const Feature> features, std::size_t actual);

    std::vector<double> scores(std::span<const FeatureId> active) const;
    // Argmax of cloud scores; ties go to the member trained on more often,
    // then the lower index.
    std::size_t classify_active(std::span<const FeatureId> active) const;
    std::size_t classify(std::span<const Feature> features) const;

    std::uint64_t examples_seen() const { return t_; }
    std::uint64_t member_seen(std::size_t member) const { return member_seen_[member]; }
    void restore_counters(std::uint64_t t, std::vector<std::uint64_t> member_seen);

    // Multiplies every expert weight in every cloud by `factor`.
    void scale_expert_weights(double factor);

private:
    void renormalize_experts();

    ConfusionSet set_;
    Params params_;
    ExtractionConfig extraction_;
    FeatureIndex index_;
    std::vector<Cloud> clouds_;
    std::uint64_t t_ = 0;
    std::vector<std::uint64_t> member_seen_;
};

}  // namespace ctxspell::winnow
