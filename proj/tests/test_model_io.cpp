#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "ctxspell/harness.hpp"
#include "ctxspell/model_io.hpp"
#include "ctxspell/synthetic.hpp"

using namespace ctxspell;

namespace {

struct Trained {
    synthetic::Fixture fixture;
    std::vector<Occurrence> occs;
    Learners learners;
};

Trained train_fixture(std::uint64_t seed) {
    Trained t{synthetic::domain_shift(seed, {200, 50, 20, 4, 2, 0.8}), {}, {}};
    t.occs = find_occurrences(t.fixture.a, t.fixture.set);
    const TrainingPart part{&t.fixture.a, t.occs, LabelSource::Gold};
    t.learners = train_learners(t.fixture.set, std::span(&part, 1), Pruning::Unpruned, {});
    return t;
}

}  // namespace

TEST_CASE("doubles round-trip through their text form") {
    for (const double v : {0.1, 1.0 / 3.0, 1e-300, 0x1.0p-20, 123456789.125, 0.0}) {
        CHECK(parse_double(format_double(v)) == v);
    }
    CHECK(format_double(1.0) == "1");
    CHECK_THROWS(parse_double("abc"));
}

TEST_CASE("save, load, save is byte-identical and predictions agree") {
    auto t = train_fixture(4);
    std::vector<AnyModel> models;
    models.emplace_back(*t.learners.bayes);
    models.emplace_back(*t.learners.winnows);

    std::ostringstream first;
    for (const auto& m : models) write_model(first, m);
    std::istringstream in(first.str());
    const auto loaded = read_models(in);
    REQUIRE(loaded.size() == 2);
    std::ostringstream second;
    for (const auto& m : loaded) write_model(second, m);
    CHECK(first.str() == second.str());

    for (const auto& occ : t.occs) {
        const auto f = extract_features(t.fixture.a, occ, {});
        for (std::size_t i = 0; i < models.size(); ++i) CHECK(classify(models[i], f) == classify(loaded[i], f));
    }
    CHECK(confusion_set_of(loaded[1]).id() == "weather, whether");
    CHECK(std::holds_alternative<winnow::Model>(loaded[1]));
}

TEST_CASE("winnow section header") {
    auto t = train_fixture(2);
    const auto text = serialize(AnyModel(*t.learners.winnows));
    CHECK(text.starts_with("version=1\nalgorithm=winnows\nconfusion=weather|whether\n"));
    CHECK(text.find("\ngamma_min=0.5\ngamma_T=1000\n") != std::string::npos);
    CHECK(text.find("\ntheta=1\nalpha=1.5\n") != std::string::npos);
    CHECK(text.find("\ncloud 0\nnode beta=0.5 v=") != std::string::npos);
    CHECK(text.find("\nw\tCW\twea") != std::string::npos);
    CHECK(text.ends_with("end\n"));
}

TEST_CASE("model files on disk") {
    auto t = train_fixture(3);
    const auto path = std::filesystem::temp_directory_path() / "ctxspell_model_io_test.txt";
    std::vector<AnyModel> models{AnyModel(*t.learners.winnows)};
    save_models(path, models);
    const auto loaded = load_models(path);
    CHECK(serialize(loaded.front()) == serialize(models.front()));
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_models(path), IoError);
}

TEST_CASE("malformed model text is rejected") {
    CHECK_THROWS_AS(parse_model("version=1\nalgorithm=unknown\nend\n"), ModelFormatError);
    CHECK_THROWS_AS(parse_model("version=1\nalgorithm=bayes\nconfusion=a|b\n"), ModelFormatError);
    auto t = train_fixture(5);
    auto text = serialize(AnyModel(*t.learners.bayes));
    text.erase(text.size() - 4);
    CHECK_THROWS_AS(parse_model(text), ModelFormatError);
}
