#include <doctest.h>

#include <map>

#include "ctxspell/random.hpp"
#include "ctxspell/winnow.hpp"

using namespace ctxspell;
using winnow::ActiveSet;
using winnow::Node;

namespace {

// Winnow2 with an ordered map and no attribute dropping.
struct ReferenceNode {
    double theta = 1.0, alpha = 1.5, beta;
    std::map<FeatureId, double> w;
    std::uint64_t seen = 0;
    double d = 0.0;

    double activation(const ActiveSet& a) const {
        double s = 0.0;
        for (auto id : a) {
            if (auto it = w.find(id); it != w.end()) s += it->second;
        }
        return s;
    }
    bool update(const ActiveSet& a, bool label) {
        const bool p = activation(a) > theta;
        ++seen;
        d += (static_cast<double>(a.size()) - d) / static_cast<double>(seen);
        if (p == label) return false;
        for (auto id : a) {
            if (label) {
                auto [it, fresh] = w.try_emplace(id, 1.0 / std::max(1.0, d));
                it->second *= alpha;
            } else if (auto it = w.find(id); it != w.end()) {
                it->second *= beta;
            }
        }
        return true;
    }
};

ActiveSet random_active(Rng& rng, FeatureId universe, std::size_t max_size) {
    ActiveSet a;
    const std::size_t n = 1 + rng.below(max_size);
    std::vector<bool> used(universe, false);
    for (std::size_t i = 0; i < n; ++i) {
        const auto id = static_cast<FeatureId>(rng.below(universe));
        if (!used[id]) {
            used[id] = true;
            a.push_back(id);
        }
    }
    return a;
}

winnow::Model two_word_model(winnow::Params params = {}) {
    return winnow::Model(ConfusionSet({"desert", "dessert"}), std::move(params), {});
}

}  // namespace

TEST_CASE("node activation sums stored weights of active attributes") {
    Node node(0.5);
    CHECK(node.activation({}) == 0.0);
    node.set_weight(0, 0.6);
    node.set_weight(1, 0.5);
    CHECK(node.activation(ActiveSet{0, 1}) == doctest::Approx(1.1));
    CHECK(node.activation(ActiveSet{0, 7}) == doctest::Approx(0.6));
    CHECK(node.predict(ActiveSet{0, 1}));
    CHECK_FALSE(node.predict({}));
}

TEST_CASE("prediction needs activation strictly above the threshold") {
    Node node(0.5);
    node.set_weight(0, 0.5);
    node.set_weight(1, 0.5);
    CHECK(node.activation(ActiveSet{0, 1}) == 1.0);
    CHECK_FALSE(node.predict(ActiveSet{0, 1}));
}

TEST_CASE("promotion, demotion and insertion") {
    Node node(0.5);
    node.set_weight(0, 0.4);
    CHECK(node.update(ActiveSet{0}, true));
    CHECK(node.weight(0) == doctest::Approx(0.6));

    Node demote(0.5);
    demote.set_weight(0, 0.4);
    demote.set_weight(1, 0.8);
    CHECK(demote.update(ActiveSet{0, 1}, false));
    CHECK(demote.weight(0) == doctest::Approx(0.2));
    CHECK(demote.weight(1) == doctest::Approx(0.4));

    // New attributes enter at 1/d and are promoted at once; inactive ones stay put.
    Node fresh(0.5);
    fresh.set_weight(9, 0.3);
    CHECK(fresh.update(ActiveSet{1, 2, 3, 4}, true));
    CHECK(fresh.d_estimate() == 4.0);
    CHECK(fresh.weight(2) == doctest::Approx(1.5 / 4.0));
    CHECK(fresh.weight(9) == 0.3);
    CHECK(fresh.seen_examples() == 1);

    // A false positive never inserts.
    Node negative(0.5);
    negative.set_weight(0, 2.0);
    CHECK(negative.update(ActiveSet{0, 5}, false));
    CHECK(negative.weight(5) == 0.0);
    CHECK(negative.stored() == 1);
}

TEST_CASE("a correct prediction changes no weight") {
    Node node(0.7);
    node.set_weight(0, 2.0);
    CHECK_FALSE(node.update(ActiveSet{0}, true));
    CHECK(node.weight(0) == 2.0);
    CHECK_FALSE(node.update(ActiveSet{3}, false));
    CHECK(node.weight(3) == 0.0);
}

TEST_CASE("weak attributes are dropped relative to the largest weight") {
    Node node(0.5, 1.0, 1.5, 0.01);
    node.set_weight(0, 1.0);
    node.set_weight(1, 0.005);
    node.set_weight(2, 0.02);
    node.drop_weak();
    CHECK(node.stored() == 2);
    CHECK(node.weight(1) == 0.0);
    CHECK(node.stored_ids() == std::vector<FeatureId>{0, 2});
}

TEST_CASE("gamma schedule") {
    const winnow::GammaSchedule s;
    CHECK(winnow::gamma(0, s) == 1.0);
    CHECK(winnow::gamma(100, s) == doctest::Approx(0.9));
    CHECK(winnow::gamma(500, s) == 0.5);
    CHECK(winnow::gamma(100000, s) == 0.5);
    for (std::uint64_t t = 0; t < 1200; ++t) CHECK(winnow::gamma(t + 1, s) <= winnow::gamma(t, s));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(Node(1.0), std::invalid_argument);
    CHECK_THROWS_AS(Node(0.5, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Node(0.5, 0.0), std::invalid_argument);
    winnow::Params p;
    p.betas = {0.5, 0.5};
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("cloud score weights node activations by expert weight") {
    winnow::Cloud cloud;
    cloud.nodes.emplace_back(0.5);
    cloud.nodes.emplace_back(0.6);
    cloud.nodes[0].set_weight(0, 0.3);
    cloud.nodes[1].set_weight(0, 0.9);
    cloud.expert_weights = {1.0, 0.25};
    CHECK(cloud.score(ActiveSet{0}) == doctest::Approx(0.525));
    CHECK(cloud.normalized_score(ActiveSet{0}) == doctest::Approx(0.525 / 1.25));
}

TEST_CASE("a fresh model trains the true word's nodes and leaves the others untouched") {
    auto model = two_word_model();
    CHECK(model.classify_active(ActiveSet{}) == 0);
    const ActiveSet a{model.intern(Feature::context_word("sand")), model.intern(Feature::context_word("dry"))};
    CHECK(model.train_example(a, 1));
    for (std::size_t j = 0; j < 5; ++j) {
        CHECK(model.clouds()[1].mistakes[j] == 1);
        CHECK(model.clouds()[1].expert_weights[j] == 1.0);  // gamma(0) = 1
        CHECK(model.clouds()[1].nodes[j].weight(a[0]) == doctest::Approx(0.75));
        CHECK(model.clouds()[0].mistakes[j] == 0);
        CHECK(model.clouds()[0].nodes[j].stored() == 0);
    }
    CHECK(model.examples_seen() == 1);
    CHECK(model.member_seen(1) == 1);
}

TEST_CASE("separable one-feature trace with single-node clouds") {
    winnow::Params p;
    p.betas = {0.5};
    auto model = two_word_model(p);
    const FeatureId a = model.intern(Feature::context_word("a"));
    const FeatureId b = model.intern(Feature::context_word("b"));
    const std::vector<std::pair<ActiveSet, std::size_t>> trace{{{a}, 0}, {{b}, 1}, {{a}, 0}, {{b}, 1}};
    std::vector<bool> changed;
    for (const auto& [active, member] : trace) changed.push_back(model.train_example(active, member));
    CHECK(changed == std::vector<bool>{true, true, false, false});
    CHECK(model.clouds()[0].nodes[0].weight(a) == 1.5);
    CHECK(model.clouds()[1].nodes[0].weight(b) == 1.5);
    CHECK(model.clouds()[0].nodes[0].weight(b) == 0.0);
    CHECK(model.classify_active(ActiveSet{a}) == 0);
    CHECK(model.classify_active(ActiveSet{b}) == 1);
}

TEST_CASE("constant gamma keeps every expert weight at 1") {
    winnow::Params p;
    p.schedule.gamma_min = 1.0;
    auto model = two_word_model(p);
    Rng rng(3);
    for (int i = 0; i < 300; ++i) model.train_example(random_active(rng, 30, 6), rng.below(2));
    for (const auto& cloud : model.clouds()) {
        for (const double v : cloud.expert_weights) CHECK(v == 1.0);
    }
}

TEST_CASE("replaying a mistake-free example leaves the model unchanged") {
    winnow::Params p;
    p.betas = {0.5};
    auto model = two_word_model(p);
    const FeatureId a = model.intern(Feature::context_word("a"));
    model.train_example(ActiveSet{a}, 0);
    const auto d = model.clouds()[0].nodes[0].d_estimate();
    const auto seen = model.clouds()[0].nodes[0].seen_examples();
    CHECK_FALSE(model.train_example(ActiveSet{a}, 0));
    CHECK(model.examples_seen() == 1);
    CHECK(model.clouds()[0].nodes[0].d_estimate() == d);
    CHECK(model.clouds()[0].nodes[0].seen_examples() == seen);
}

TEST_CASE("properties over random traces") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        winnow::Params p;
        auto model = two_word_model(p);
        std::vector<ActiveSet> examples;
        for (int i = 0; i < 400; ++i) {
            auto act = random_active(rng, 60, 8);
            // Features below 10 lean towards member 0.
            std::size_t zeros = 0;
            for (auto id : act) zeros += id < 10;
            model.train_example(act, zeros > 0 ? 0 : 1);
            examples.push_back(std::move(act));
        }
        // Positive weights and expert weights.
        for (const auto& cloud : model.clouds()) {
            for (std::size_t j = 0; j < cloud.nodes.size(); ++j) {
                CHECK(cloud.expert_weights[j] > 0.0);
                for (auto id : cloud.nodes[j].stored_ids()) CHECK(cloud.nodes[j].weight(id) > 0.0);
            }
        }
        // Uniform expert-weight scaling never changes a prediction.
        auto scaled = model;
        scaled.scale_expert_weights(rng.chance(0.5) ? 3.7 : 1e-3);
        // Attributes that were never stored change no activation.
        for (const auto& act : examples) {
            CHECK(scaled.classify_active(act) == model.classify_active(act));
            auto extended = act;
            extended.push_back(1000 + static_cast<FeatureId>(rng.below(50)));
            CHECK(model.scores(extended) == model.scores(act));
        }
    }
}

TEST_CASE("with dropping disabled a node matches a never-dropping reference") {
    Rng rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const double beta = 0.5 + 0.1 * static_cast<double>(rng.below(5));
        Node node(beta, 1.0, 1.5, 0.0);
        ReferenceNode ref{1.0, 1.5, beta, {}, 0, 0.0};
        for (int i = 0; i < 3000; ++i) {
            const auto act = random_active(rng, 40, 6);
            const bool label = rng.chance(0.5) || act.front() < 5;
            CHECK(node.predict(act) == (ref.activation(act) > 1.0));
            CHECK(node.update(act, label) == ref.update(act, label));
        }
        for (const auto& [id, w] : ref.w) CHECK(node.weight(id) == w);
    }
}

TEST_CASE("the raw combiner compares unnormalized cloud scores") {
    winnow::Params raw;
    raw.combiner = winnow::Combiner::Raw;
    auto model = two_word_model(raw);
    const FeatureId a = model.intern(Feature::context_word("a"));
    model.train_example(ActiveSet{a}, 0);
    model.train_example(ActiveSet{a}, 1);
    const auto s = model.scores(ActiveSet{a});
    CHECK(s[0] == doctest::Approx(model.clouds()[0].score(ActiveSet{a})));
    CHECK(s[1] == doctest::Approx(model.clouds()[1].score(ActiveSet{a})));
}
