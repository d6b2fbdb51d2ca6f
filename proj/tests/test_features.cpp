#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "ctxspell/features.hpp"
#include "ctxspell/random.hpp"

using namespace ctxspell;

namespace {

TagDictionary dict() {
    std::istringstream in("the\tDT\ncake\tNN\ncloudy\tJJ\nwas\tVBD\nof\tIN\n");
    return TagDictionary::parse(in);
}

bool has(const std::vector<Feature>& fs, const Feature& f) {
    return std::find(fs.begin(), fs.end(), f) != fs.end();
}

Feature coll(int offset, std::vector<Element> e) { return Feature::collocation(offset, std::move(e)); }
Element lit(std::string w) { return Element::literal(std::move(w)); }
Element tag(std::string t) { return Element::tag(std::move(t)); }

}  // namespace

TEST_CASE("context words cover +-k tokens, skip punctuation and the target") {
    const auto doc = tokenize("It was cloudy . Weather or not , the weather was fine", dict());
    const ConfusionSet set({"weather", "whether"});
    const auto occs = find_occurrences(doc, 0, set);
    REQUIRE(occs.size() == 2);
    const auto f = extract_features(doc, occs[1], {3, 1});
    CHECK(has(f, Feature::context_word("the")));
    CHECK(has(f, Feature::context_word("not")));
    CHECK(has(f, Feature::context_word("was")));
    CHECK(has(f, Feature::context_word("fine")));
    CHECK_FALSE(has(f, Feature::context_word(",")));
    CHECK_FALSE(has(f, Feature::context_word("or")));
    CHECK_FALSE(has(f, Feature::context_word("weather")));

    // The window crosses sentence boundaries within a document.
    const auto g = extract_features(doc, occs[0], {2, 1});
    CHECK(has(g, Feature::context_word("cloudy")));
}

TEST_CASE("collocations mix literals and tags and mark document edges") {
    const auto doc = tokenize("Cake of the weather", dict());
    const ConfusionSet set({"weather", "whether"});
    const auto occ = find_occurrences(doc, 0, set).front();
    const auto f = extract_features(doc, occ, {10, 2});
    CHECK(has(f, coll(-1, {lit("the")})));
    CHECK(has(f, coll(-1, {tag("DT")})));
    CHECK(has(f, coll(-2, {lit("of"), tag("DT")})));
    CHECK(has(f, coll(-2, {tag("IN"), lit("the")})));
    CHECK(has(f, coll(1, {tag("BOUNDARY")})));
    CHECK(has(f, coll(1, {tag("BOUNDARY"), tag("BOUNDARY")})));
    CHECK(std::is_sorted(f.begin(), f.end()));
    CHECK(std::adjacent_find(f.begin(), f.end()) == f.end());
    for (const auto& x : f) CHECK(feature_matches(doc, occ, x, {10, 2}));
    CHECK_FALSE(feature_matches(doc, occ, coll(-1, {lit("of")}), {10, 2}));
}

TEST_CASE("feature dump format round-trips, escapes included") {
    const std::vector<Feature> samples{
        Feature::context_word("weather"),
        Feature::context_word("@odd"),
        Feature::context_word("a,b\\c\td"),
        coll(-2, {lit("of"), tag("DT")}),
        coll(1, {tag("BOUNDARY")}),
        coll(1, {lit("@at"), lit("x,y")}),
    };
    CHECK(dump_feature(samples[0]) == "CW\tweather");
    CHECK(dump_feature(samples[3]) == "COLL\t-2\tof,@DT");
    CHECK(dump_feature(samples[1]) == "CW\t\\@odd");
    for (const auto& f : samples) CHECK(parse_feature(dump_feature(f)) == f);
    CHECK_THROWS_AS(parse_feature("XX\tfoo"), std::invalid_argument);
    CHECK_THROWS_AS(parse_feature("COLL\t0\tfoo"), std::invalid_argument);
}

TEST_CASE("chi-square against hand-computed tables") {
    const std::vector<std::array<std::uint64_t, 2>> a{{10, 20}, {30, 40}};
    CHECK(chi_square(a) == doctest::Approx(100.0 / 126.0).epsilon(1e-12));
    const std::vector<std::array<std::uint64_t, 2>> b{{30, 70}, {70, 30}};
    CHECK(chi_square(b) == doctest::Approx(32.0));
    const std::vector<std::array<std::uint64_t, 2>> flat{{5, 5}, {5, 5}};
    CHECK(chi_square(flat) == 0.0);
    CHECK(chi_square_critical_05(1) == 3.8415);
    CHECK(chi_square_critical_05(2) == 5.9915);
    CHECK_THROWS(chi_square_critical_05(0));
}

TEST_CASE("pruning thresholds") {
    FeatureStats stats(2);
    stats.set_member_total(0, 50);
    stats.set_member_total(1, 50);
    const auto strong = Feature::context_word("strong");
    const auto rare = Feature::context_word("rare");
    const auto flat = Feature::context_word("flat");
    const auto once = Feature::context_word("once");
    const auto everywhere = Feature::context_word("everywhere");
    stats.set_counts(strong, std::vector<std::uint64_t>{20, 2});
    stats.set_counts(rare, std::vector<std::uint64_t>{2, 0});
    stats.set_counts(flat, std::vector<std::uint64_t>{15, 15});
    stats.set_counts(once, std::vector<std::uint64_t>{0, 1});
    stats.set_counts(everywhere, std::vector<std::uint64_t>{50, 45});

    const auto pruned = prune_bayes(stats);
    CHECK(pruned.contains(strong));
    CHECK_FALSE(pruned.contains(rare));        // fewer than 10 occurrences
    CHECK_FALSE(pruned.contains(flat));        // not significant
    CHECK_FALSE(pruned.contains(everywhere));  // fewer than 10 non-occurrences
    CHECK(pruned.member_total(0) == 50);

    const auto unpruned = prune_minimal(stats);
    CHECK(unpruned.contains(rare));
    CHECK_FALSE(unpruned.contains(once));
    CHECK(unpruned.feature_count() == 4);
}

TEST_CASE("pruned features are a subset of unpruned features") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        FeatureStats stats(2 + rng.below(2));
        for (std::size_t m = 0; m < stats.member_count(); ++m) stats.set_member_total(m, 20 + rng.below(60));
        for (int i = 0; i < 40; ++i) {
            std::vector<std::uint64_t> c;
            for (std::size_t m = 0; m < stats.member_count(); ++m) c.push_back(rng.below(stats.member_total(m) + 1));
            stats.set_counts(Feature::context_word("w" + std::to_string(i)), c);
        }
        const auto pruned = prune_bayes(stats);
        const auto unpruned = prune_minimal(stats);
        for (FeatureId id = 0; id < pruned.feature_count(); ++id) CHECK(unpruned.contains(pruned.feature(id)));
    }
}

TEST_CASE("stats merge adds counts") {
    FeatureStats a(2), b(2);
    const auto x = Feature::context_word("x");
    const auto y = Feature::context_word("y");
    a.add(std::vector<Feature>{x}, 0);
    b.add(std::vector<Feature>{x, y}, 1);
    b.add(std::vector<Feature>{y}, 1);
    a.merge(b);
    CHECK(a.total() == 3);
    CHECK(a.count(*a.find(x), 0) == 1);
    CHECK(a.count(*a.find(x), 1) == 1);
    CHECK(a.present(*a.find(y)) == 2);
    CHECK(a.absent(*a.find(y)) == 1);
    CHECK_THROWS_AS(a.merge(FeatureStats(3)), std::invalid_argument);
}
