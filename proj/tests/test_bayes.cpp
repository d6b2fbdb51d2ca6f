#include <doctest.h>

#include <cmath>

#include "ctxspell/bayes.hpp"

using namespace ctxspell;

namespace {

const ConfusionSet kSet({"desert", "dessert"});

FeatureStats two_member_stats(std::uint64_t n0, std::uint64_t n1) {
    FeatureStats s(2);
    s.set_member_total(0, n0);
    s.set_member_total(1, n1);
    return s;
}

std::vector<std::uint64_t> c(std::uint64_t a, std::uint64_t b) { return {a, b}; }

}  // namespace

TEST_CASE("smoothed probability interpolates towards the unigram rate") {
    CHECK(bayes::smoothed_prob(3, 10, 5, 20, 10.0) == doctest::Approx(0.5 * 0.3 + 0.5 * 0.25));
    CHECK(bayes::smoothed_prob(3, 10, 5, 20, 0.0) == doctest::Approx(0.3));
    CHECK(bayes::smoothed_prob(0, 10, 5, 20, 10.0) > 0.0);
    CHECK_THROWS_AS(bayes::smoothed_prob(0, 0, 5, 20, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(bayes::smoothed_prob(1, 2, 5, 20, -1.0), std::invalid_argument);
}

TEST_CASE("no evidence falls back to the prior") {
    auto stats = two_member_stats(7, 13);
    const bayes::Model model(kSet, stats, {}, {});
    CHECK(model.classify({}) == 1);
    CHECK(model.score({}, 0) == doctest::Approx(std::log(7.0 / 20.0)));
    CHECK(model.prior(1) == doctest::Approx(0.65));
}

TEST_CASE("a decisive feature seen only with the second member") {
    auto stats = two_member_stats(20, 20);
    const auto f = Feature::context_word("cake");
    stats.set_counts(f, c(0, 5));
    const bayes::Model model(kSet, stats, {}, {});
    const std::vector<Feature> fs{f};
    // lambda = 20/30; P(f|desert) = (1/3)(5/40), P(f|dessert) = (2/3)(5/20) + (1/3)(5/40)
    CHECK(model.score(fs, 0) == doctest::Approx(std::log(0.5) + std::log(5.0 / 120.0)));
    CHECK(model.score(fs, 1) == doctest::Approx(std::log(0.5) + std::log(1.0 / 6.0 + 5.0 / 120.0)));
    CHECK(model.classify(fs) == 1);
}

TEST_CASE("members with identical statistics score identically; ties go to the larger prior") {
    auto stats = two_member_stats(10, 10);
    const auto f = Feature::context_word("sand");
    stats.set_counts(f, c(4, 4));
    const bayes::Model model(kSet, stats, {}, {});
    const std::vector<Feature> fs{f};
    CHECK(model.score(fs, 0) == model.score(fs, 1));
    CHECK(model.classify(fs) == 0);

    const std::vector<double> tied{-1.0, -1.0, -2.0};
    CHECK(bayes::argmax_with_priors(tied, std::vector<double>{0.2, 0.5, 0.3}) == 1);
    CHECK(bayes::argmax_with_priors(tied, std::vector<double>{0.4, 0.4, 0.2}) == 0);
}

TEST_CASE("adding a constant to every log score leaves the argmax unchanged") {
    const std::vector<double> priors{0.3, 0.3, 0.4};
    for (const double shift : {-100.0, -1.5, 0.0, 3.25, 1e3}) {
        const std::vector<double> s{-4.0 + shift, -3.5 + shift, -3.9 + shift};
        CHECK(bayes::argmax_with_priors(s, priors) == 1);
    }
}

TEST_CASE("unknown features are ignored when classifying") {
    auto stats = two_member_stats(3, 9);
    const bayes::Model model(kSet, stats, {}, {});
    const std::vector<Feature> fs{Feature::context_word("never-seen")};
    CHECK(model.classify(fs) == 1);
}

TEST_CASE("dependency resolution keeps the strongest of overlapping collocations") {
    auto stats = two_member_stats(50, 50);
    const auto near = Feature::collocation(-1, {Element::literal("the")});
    const auto wide = Feature::collocation(-2, {Element::literal("of"), Element::literal("the")});
    const auto after = Feature::collocation(1, {Element::tag("NN")});
    const auto word = Feature::context_word("sand");
    stats.set_counts(near, c(30, 25));
    stats.set_counts(wide, c(20, 2));
    stats.set_counts(after, c(10, 12));
    stats.set_counts(word, c(20, 1));
    const bayes::Model model(kSet, stats, {}, {});
    CHECK(model.chi_square(*model.features().find(wide)) > model.chi_square(*model.features().find(near)));

    const std::vector<Feature> matched{word, near, wide, after};
    const auto kept = model.resolve_dependencies(matched);
    CHECK(kept == std::vector<Feature>{word, wide, after});

    const bayes::Model plain(kSet, stats, {10.0, false}, {});
    CHECK(plain.score(matched, 0) != model.score(matched, 0));
    CHECK(model.score(matched, 0) == doctest::Approx(model.score(kept, 0)));
}

TEST_CASE("ties between equally strong collocations prefer the longer one") {
    auto stats = two_member_stats(10, 10);
    const auto a = Feature::collocation(-1, {Element::literal("the")});
    const auto b = Feature::collocation(-2, {Element::literal("of"), Element::literal("the")});
    stats.set_counts(a, c(3, 3));
    stats.set_counts(b, c(3, 3));
    const bayes::Model model(kSet, stats, {}, {});
    CHECK(model.resolve_dependencies(std::vector<Feature>{a, b}) == std::vector<Feature>{b});
}

TEST_CASE("observe adds a labelled example to retained features only") {
    auto stats = two_member_stats(2, 2);
    const auto f = Feature::context_word("x");
    stats.set_counts(f, c(1, 1));
    bayes::Model model(kSet, stats, {}, {});
    model.observe(std::vector<Feature>{f, Feature::context_word("y")}, 1);
    CHECK(model.features().count(0, 1) == 2);
    CHECK(model.features().member_total(1) == 3);
    CHECK(model.features().feature_count() == 1);
}

TEST_CASE("training requires data") {
    CHECK_THROWS_AS(bayes::train_from_stats(kSet, FeatureStats(2), Pruning::Unpruned, {}, {}),
                    std::invalid_argument);
}
