#include "ctxspell/winnow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

namespace ctxspell::winnow {

Node::Node(double beta, double theta, double alpha, double epsilon)
    : theta_(theta), alpha_(alpha), beta_(beta), epsilon_(epsilon) {
    if (!(alpha_ > 1.0)) throw std::invalid_argument("promotion parameter must exceed 1");
    if (!(beta_ > 0.0 && beta_ < 1.0)) throw std::invalid_argument("demotion parameter must lie in (0, 1)");
    if (!(theta_ > 0.0)) throw std::invalid_argument("threshold must be positive");
    if (!(epsilon_ >= 0.0 && epsilon_ < 1.0)) throw std::invalid_argument("drop ratio must lie in [0, 1)");
}

double Node::activation(std::span<const FeatureId> active) const {
    double sum = 0.0;
    for (const FeatureId id : active) {
        if (id < weights_.size()) sum += weights_[id];
    }
    return sum;
}

void Node::set_weight(FeatureId id, double w) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("weights must be finite and non-negative");
    if (id >= weights_.size()) weights_.resize(static_cast<std::size_t>(id) + 1, 0.0);
    if (weights_[id] > 0.0) --stored_;
    weights_[id] = w;
    if (w > 0.0) ++stored_;
}

double Node::max_weight() const {
    double m = 0.0;
    for (const double w : weights_) m = std::max(m, w);
    return m;
}

std::vector<FeatureId> Node::stored_ids() const {
    std::vector<FeatureId> ids;
    ids.reserve(stored_);
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (weights_[i] > 0.0) ids.push_back(static_cast<FeatureId>(i));
    }
    return ids;
}

void Node::restore_counters(std::uint64_t seen, double d, std::uint64_t since_sweep) {
    seen_ = seen;
    d_ = d;
    since_sweep_ = since_sweep;
}

bool Node::update(std::span<const FeatureId> active, bool label) {
    const bool predicted = predict(active);
    ++seen_;
    d_ += (static_cast<double>(active.size()) - d_) / static_cast<double>(seen_);
    if (predicted == label) return false;

    if (label) {
        const double initial = 1.0 / std::max(1.0, d_);
        for (const FeatureId id : active) {
            if (id >= weights_.size()) weights_.resize(static_cast<std::size_t>(id) + 1, 0.0);
            double& w = weights_[id];
            if (w == 0.0) {
                w = initial;
                ++stored_;
            }
            w *= alpha_;
        }
    } else {
        for (const FeatureId id : active) {
            if (id < weights_.size()) weights_[id] *= beta_;
        }
    }
    if (++since_sweep_ >= kSweepInterval) {
        since_sweep_ = 0;
        drop_weak();
    }
    return true;
}

void Node::drop_weak() {
    if (epsilon_ <= 0.0) return;
    const double cutoff = epsilon_ * max_weight();
    for (auto& w : weights_) {
        if (w > 0.0 && w < cutoff) {
            w = 0.0;
            --stored_;
        }
    }
}

double gamma(std::uint64_t t, const GammaSchedule& schedule) {
    return std::max(schedule.gamma_min, 1.0 - static_cast<double>(t) / schedule.horizon);
}

double Cloud::score(std::span<const FeatureId> active) const {
    double sum = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) sum += expert_weights[j] * nodes[j].activation(active);
    return sum;
}

double Cloud::normalized_score(std::span<const FeatureId> active) const {
    double total = 0.0;
    for (const double v : expert_weights) total += v;
    return score(active) / total;
}

void Params::validate() const {
    if (betas.empty()) throw std::invalid_argument("a cloud needs at least one node");
    auto sorted = betas;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("cloud demotion parameters must be distinct");
    }
    if (!(schedule.gamma_min > 0.0 && schedule.gamma_min <= 1.0)) {
        throw std::invalid_argument("gamma_min must lie in (0, 1]");
    }
    if (!(schedule.horizon > 0.0)) throw std::invalid_argument("gamma horizon T must be positive");
}

Model::Model(ConfusionSet set, Params params, ExtractionConfig extraction)
    : set_(std::move(set)), params_(std::move(params)), extraction_(extraction) {
    params_.validate();
    extraction_.validate();
    for (std::size_t m = 0; m < set_.size(); ++m) {
        Cloud c;
        c.member = m;
        for (const double beta : params_.betas) {
            c.nodes.emplace_back(beta, params_.theta, params_.alpha, params_.epsilon);
        }
        c.expert_weights.assign(c.nodes.size(), 1.0);
        c.mistakes.assign(c.nodes.size(), 0);
        clouds_.push_back(std::move(c));
    }
    member_seen_.assign(set_.size(), 0);
}

ActiveSet Model::lookup(std::span<const Feature> features) const {
    ActiveSet out;
    out.reserve(features.size());
    for (const auto& f : features) {
        if (const auto id = index_.find(f)) out.push_back(*id);
    }
    return out;
}

ActiveSet Model::intern(std::span<const Feature> features) {
    ActiveSet out;
    out.reserve(features.size());
    std::unordered_set<FeatureId> seen;
    for (const auto& f : features) {
        const FeatureId id = index_.intern(f);
        if (seen.insert(id).second) out.push_back(id);
    }
    return out;
}

bool Model::train_example(std::span<const FeatureId> active, std::size_t actual) {
    if (actual >= clouds_.size()) throw std::out_of_range("member index out of range");
    bool any_mistake = false;
    for (const auto& c : clouds_) {
        const bool label = c.member == actual;
        for (const auto& node : c.nodes) {
            if (node.predict(active) != label) {
                any_mistake = true;
                break;
            }
        }
        if (any_mistake) break;
    }
    if (!any_mistake) return false;

    const double g = gamma(t_, params_.schedule);
    for (auto& c : clouds_) {
        const bool label = c.member == actual;
        for (std::size_t j = 0; j < c.nodes.size(); ++j) {
            if (c.nodes[j].update(active, label)) {
                ++c.mistakes[j];
                c.expert_weights[j] =
                    std::max(c.expert_weights[j] * g, std::numeric_limits<double>::min());
            }
        }
    }
    ++t_;
    ++member_seen_[actual];
    renormalize_experts();
    return true;
}

bool Model::train(std::span<const Feature> features, std::size_t actual) {
    return train_example(intern(features), actual);
}

std::vector<double> Model::scores(std::span<const FeatureId> active) const {
    std::vector<double> out(clouds_.size());
    for (std::size_t m = 0; m < clouds_.size(); ++m) {
        out[m] = params_.combiner == Combiner::Raw ? clouds_[m].score(active) : clouds_[m].normalized_score(active);
    }
    return out;
}

std::size_t Model::classify_active(std::span<const FeatureId> active) const {
    const auto s = scores(active);
    std::size_t best = 0;
    for (std::size_t m = 1; m < s.size(); ++m) {
        if (s[m] > s[best] || (s[m] == s[best] && member_seen_[m] > member_seen_[best])) best = m;
    }
    return best;
}

std::size_t Model::classify(std::span<const Feature> features) const {
    return classify_active(lookup(features));
}

void Model::restore_counters(std::uint64_t t, std::vector<std::uint64_t> member_seen) {
    if (member_seen.size() != clouds_.size()) throw std::invalid_argument("member count mismatch");
    t_ = t;
    member_seen_ = std::move(member_seen);
}

void Model::scale_expert_weights(double factor) {
    if (!(factor > 0.0)) throw std::invalid_argument("scale factor must be positive");
    for (auto& c : clouds_) {
        for (auto& v : c.expert_weights) v *= factor;
    }
}

// Expert weights only matter relative to each other, so when they all drift
// toward underflow they are scaled up by an exact power of two.
void Model::renormalize_experts() {
    double largest = 0.0;
    for (const auto& c : clouds_) {
        for (const double v : c.expert_weights) largest = std::max(largest, v);
    }
    if (largest >= 0x1.0p-512) return;
    for (auto& c : clouds_) {
        for (auto& v : c.expert_weights) {
            v = std::max(std::ldexp(v, 512), std::numeric_limits<double>::min());
        }
    }
}

}  // namespace ctxspell::winnow
