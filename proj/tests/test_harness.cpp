#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "ctxspell/harness.hpp"
#include "ctxspell/synthetic.hpp"

using namespace ctxspell;

namespace {

synthetic::Fixture small_shift(std::uint64_t seed) { return synthetic::domain_shift(seed, {240, 300, 20, 4, 2, 0.8}); }

std::set<std::pair<std::size_t, std::size_t>> positions(std::span<const Occurrence> occs) {
    std::set<std::pair<std::size_t, std::size_t>> out;
    for (const auto& o : occs) out.emplace(o.doc, o.sentence);
    return out;
}

}  // namespace

TEST_CASE("within-corpus report: shape, determinism and conservation") {
    const auto f = small_shift(1);
    ExperimentConfig config;
    const std::vector<ConfusionSet> sets{f.set, ConfusionSet({"peace", "piece"})};
    const auto report = run_within(config, f.a, sets);
    CHECK(report.headers() == std::vector<std::string>{"Confusion set", "Test cases", "Features", "Bayes", "WinnowS"});
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].label == "peace, piece");
    CHECK(report.rows[0].skipped);
    CHECK(report.rows[1].label == "weather, whether");
    CHECK(*report.value("weather, whether", "Test cases") == 48);
    for (const auto* h : {"Bayes", "WinnowS"}) {
        const double acc = *report.value("weather, whether", h);
        CHECK(acc >= 0.0);
        CHECK(acc <= 100.0);
    }
    CHECK(run_within(config, f.a, sets).to_tsv() == report.to_tsv());

    config.seed = 2;
    CHECK(run_within(config, f.a, sets).to_tsv() != report.to_tsv());
}

TEST_CASE("pruned feature count never exceeds unpruned") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const auto f = synthetic::rare_collocation(seed);
        ExperimentConfig config;
        config.seed = seed;
        config.prunings = {Pruning::Pruned, Pruning::Unpruned};
        const auto r = run_within(config, f.a, std::span(&f.set, 1));
        CHECK(r.headers()[2] == "Pruned Features");
        CHECK(*r.value(f.set.id(), "Pruned Features") <= *r.value(f.set.id(), "Unpruned Features"));
    }
}

TEST_CASE("identical contexts give the majority-class rate") {
    Corpus corpus;
    for (int i = 0; i < 40; ++i) {
        corpus.push_back(tokenize(std::string("The ") + (i % 4 == 0 ? "whether" : "weather") + " is here .", {}));
    }
    const ConfusionSet set({"weather", "whether"});
    ExperimentConfig config;
    const auto r = run_within(config, corpus, std::span(&set, 1));
    const auto test = split_by_sentence(find_occurrences(corpus, set), 0.8, config.seed).test;
    const auto majority = std::count_if(test.begin(), test.end(), [](const auto& o) { return o.gold == 0; });
    const double rate = 100.0 * static_cast<double>(majority) / static_cast<double>(test.size());
    CHECK(*r.value(set.id(), "Bayes") == doctest::Approx(rate));
    // WinnowS gives every test case the same answer, right or wrong.
    const double winnow = *r.value(set.id(), "WinnowS");
    CHECK((winnow == doctest::Approx(rate) || winnow == doctest::Approx(100.0 - rate)));
}

TEST_CASE("across-corpus report") {
    const auto f = small_shift(2);
    ExperimentConfig config;
    const auto r = run_across(config, f.a, f.b, std::span(&f.set, 1));
    CHECK(r.headers() == std::vector<std::string>{"Confusion set", "Test cases Within", "Test cases Across",
                                                  "Bayes Within", "Bayes Across", "WinnowS Within",
                                                  "WinnowS Across"});
    CHECK(*r.value(f.set.id(), "Test cases Across") == 120);

    // Corpus B without the confusion words is a recorded skip.
    const Corpus other{tokenize("Nothing to see here .", {})};
    const auto skipped = run_across(config, f.a, other, std::span(&f.set, 1));
    CHECK(skipped.rows.front().skipped);
}

TEST_CASE("sup/unsup never trains on the test part") {
    const auto f = small_shift(3);
    ExperimentConfig config;
    const auto parts = split_unsup(find_occurrences(f.b, f.set), config);
    const auto unsup = positions(parts.unsup);
    for (const auto& p : positions(parts.test)) CHECK(unsup.count(p) == 0);
    CHECK(parts.unsup.size() == 180);

    const auto noisy = corrupt_unsup(parts.unsup, 0.0, 2, config);
    CHECK(noisy == parts.unsup);

    const auto r = run_supunsup(config, f.a, f.b, std::span(&f.set, 1));
    CHECK(r.headers() == std::vector<std::string>{"Confusion set", "Test cases", "Bayes Sup only", "Bayes Sup/unsup",
                                                  "WinnowS Sup only", "WinnowS Sup/unsup", "WinnowS Incr"});
    CHECK(*r.value(f.set.id(), "Test cases") == 120);
}

TEST_CASE("sup/unsup trains on corrupted labels, never on gold") {
    const auto f = small_shift(4);
    ExperimentConfig config;
    config.algorithms = {Algorithm::Bayes};
    auto unsup = split_unsup(find_occurrences(f.b, f.set), config).unsup;
    for (auto& o : unsup) o.actual = 1 - o.gold;
    const TrainingPart part{&f.b, unsup, LabelSource::Actual};
    const auto learners = train_learners(f.set, std::span(&part, 1), Pruning::Unpruned, config);
    const auto& stats = learners.bayes->features();
    std::size_t gold0 = 0;
    for (const auto& o : unsup) gold0 += o.gold == 0;
    CHECK(stats.member_total(1) == gold0);
}

TEST_CASE("incremental learning") {
    const auto f = small_shift(5);
    ExperimentConfig config;
    const auto r = run_incremental(config, f.a, &f.b, std::span(&f.set, 1));
    CHECK(r.headers() == std::vector<std::string>{"Confusion set", "Test cases", "Bayes Sup only", "Bayes Incr",
                                                  "WinnowS Sup only", "WinnowS Incr"});
    const auto within = run_incremental(config, f.a, nullptr, std::span(&f.set, 1));
    CHECK(*within.value(f.set.id(), "Test cases") == 48);

    // A model that is already right everywhere gains nothing and loses nothing.
    const auto occs = find_occurrences(f.a, f.set);
    std::vector<Occurrence> same;
    for (int i = 0; i < 5; ++i) same.push_back(occs.front());
    const TrainingPart part{&f.a, same, LabelSource::Gold};
    const auto learners = train_learners(f.set, std::span(&part, 1), Pruning::Unpruned, config);
    auto copy = learners;
    const double fixed = evaluate(learners, Algorithm::WinnowS, f.a, same, config.extraction);
    CHECK(fixed == 100.0);
    CHECK(evaluate_incremental(copy, Algorithm::WinnowS, f.a, same, config.extraction) == fixed);
}

TEST_CASE("corruption sweep") {
    const auto f = small_shift(6);
    ExperimentConfig config;
    const std::vector<double> percents{0, 5, 10, 15, 20};
    const auto series = corruption_sweep(config, f.a, f.b, std::span(&f.set, 1), percents);
    REQUIRE(series.size() == 2);
    for (const auto& s : series) {
        REQUIRE(s.points.size() == 5);
        for (const auto& p : s.points) CHECK(p.sup_only == s.points.front().sup_only);
    }
    const auto report = sweep_report(series);
    CHECK(report.headers() == std::vector<std::string>{"Confusion set", "Percent", "Series", "Accuracy"});
    CHECK(report.rows.size() == 20);
    std::map<std::string, int> per_series;
    for (const auto& row : report.rows) ++per_series[row.cells[1].text];
    for (const auto& [name, n] : per_series) CHECK(n == 5);
    CHECK(per_series.count("WinnowS sup/unsup") == 1);

    CHECK_THROWS_AS(corruption_sweep(config, f.a, f.b, std::span(&f.set, 1), std::vector<double>{}),
                    std::invalid_argument);
    CHECK_THROWS_AS(corruption_sweep(config, f.a, f.b, std::span(&f.set, 1), std::vector<double>{120}),
                    std::invalid_argument);
}

TEST_CASE("configuration checks") {
    ExperimentConfig config;
    config.train_fraction = 1.5;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = {};
    config.regime = Regime::SupUnsup;
    const auto f = small_shift(7);
    CHECK_THROWS_AS(run_regime(config, f.a, nullptr, std::span(&f.set, 1)), std::invalid_argument);
}
