#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ctxspell/corpus.hpp"

namespace ctxspell {

enum class FeatureKind : std::uint8_t { ContextWord, Collocation };

// One position of a collocation: a literal folded word or a tag symbol.
struct Element {
    bool is_tag = false;
    std::string text;

    static Element literal(std::string word) { return {false, std::move(word)}; }
    static Element tag(std::string symbol) { return {true, std::move(symbol)}; }

    friend auto operator<=>(const Element&, const Element&) = default;
};

struct Feature {
    FeatureKind kind = FeatureKind::ContextWord;
    // Context-word features only.
    std::string word;
    // Collocation features only: position of the first element relative to
    // the target (-1 is the token just before it, +1 the token just after).
    int offset = 0;
    std::vector<Element> elements;

    static Feature context_word(std::string w) {
        Feature f;
        f.kind = FeatureKind::ContextWord;
        f.word = std::move(w);
        return f;
    }
    static Feature collocation(int offset, std::vector<Element> elements) {
        Feature f;
        f.kind = FeatureKind::Collocation;
        f.offset = offset;
        f.elements = std::move(elements);
        return f;
    }

    bool is_collocation() const { return kind == FeatureKind::Collocation; }
    // Relative positions [first, last] covered by a collocation.
    int first() const { return offset; }
    int last() const { return offset + static_cast<int>(elements.size()) - 1; }

    friend auto operator<=>(const Feature&, const Feature&) = default;
};

struct FeatureHash {
    std::size_t operator()(const Feature& f) const noexcept;
};

// `CW<TAB>word` or `COLL<TAB>offset<TAB>elem[,elem...]`; tag elements carry
// an `@` prefix. Backslash escapes `\`, `,`, a leading `@`, tab and newline.
std::string dump_feature(const Feature& feature);
Feature parse_feature(std::string_view line);

struct ExtractionConfig {
    // Context-word half window, in tokens.
    int k = 10;
    // Maximum collocation length.
    int l = 2;

    void validate() const;
};

// All features proposed for one occurrence, sorted and duplicate-free.
std::vector<Feature> extract_features(const Document& document, const Occurrence& occurrence,
                                      const ExtractionConfig& config);
std::vector<Feature> extract_features(const Corpus& corpus, const Occurrence& occurrence,
                                      const ExtractionConfig& config);

// Tests a single feature against the occurrence's context directly.
bool feature_matches(const Document& document, const Occurrence& occurrence,
                     const Feature& feature, const ExtractionConfig& config);

using FeatureId = std::uint32_t;

// Interns features to dense integer ids. Ids are local to one table.
class FeatureIndex {
public:
    FeatureId intern(const Feature& feature);
    std::optional<FeatureId> find(const Feature& feature) const;
    const Feature& at(FeatureId id) const { return features_[id]; }
    std::size_t size() const { return features_.size(); }

private:
    std::unordered_map<Feature, FeatureId, FeatureHash> ids_;
    std::vector<Feature> features_;
};

// Per-feature, per-member co-occurrence counts over a training set.
class FeatureStats {
public:
    explicit FeatureStats(std::size_t member_count = 2);

    // Records one training occurrence of `member` with the given (distinct)
    // features.
    void add(std::span<const Feature> features, std::size_t member);
    // Adds `other`'s counts featurewise.
    void merge(const FeatureStats& other);
    // Sets the counts of one feature directly; used to build fixtures.
    void set_counts(const Feature& feature, std::span<const std::uint64_t> counts);
    void set_member_total(std::size_t member, std::uint64_t n) { member_totals_.at(member) = n; }

    std::size_t member_count() const { return member_totals_.size(); }
    std::size_t feature_count() const { return index_.size(); }
    const Feature& feature(FeatureId id) const { return index_.at(id); }
    std::optional<FeatureId> find(const Feature& f) const { return index_.find(f); }
    bool contains(const Feature& f) const { return index_.find(f).has_value(); }

    std::uint64_t count(FeatureId id, std::size_t member) const {
        return counts_[id * member_count() + member];
    }
    std::span<const std::uint64_t> counts(FeatureId id) const {
        return std::span<const std::uint64_t>(counts_).subspan(id * member_count(), member_count());
    }
    // Training occurrences whose context matched the feature.
    std::uint64_t present(FeatureId id) const;
    std::uint64_t absent(FeatureId id) const { return total() - present(id); }

    std::uint64_t member_total(std::size_t member) const { return member_totals_[member]; }
    const std::vector<std::uint64_t>& member_totals() const { return member_totals_; }
    std::uint64_t total() const;

    // Copy holding only the features accepted by `keep`, with member totals.
    FeatureStats filtered(const std::function<bool(FeatureId)>& keep) const;

    // Features in canonical (sorted) order.
    std::vector<FeatureId> sorted_ids() const;

private:
    FeatureId slot(const Feature& feature);

    FeatureIndex index_;
    std::vector<std::uint64_t> counts_;
    std::vector<std::uint64_t> member_totals_;
};

// The features kept by a pruning rule, together with their training stats.
using FeatureSet = FeatureStats;

enum class LabelSource : std::uint8_t { Gold, Actual };

FeatureStats collect_stats(const Corpus& corpus, std::span<const Occurrence> occurrences,
                           std::size_t member_count, const ExtractionConfig& config,
                           LabelSource labels = LabelSource::Gold);

// Pearson statistic over an n x 2 table of {present, absent} rows. Cells with
// zero expected count contribute nothing.
double chi_square(std::span<const std::array<std::uint64_t, 2>> table);
// The presence-by-member contingency table of one feature.
std::vector<std::array<std::uint64_t, 2>> presence_table(const FeatureStats& stats, FeatureId id);
double feature_chi_square(const FeatureStats& stats, FeatureId id);
// Critical value at the 0.05 level, df 1 through 9.
double chi_square_critical_05(std::size_t df);

// Keeps features with at least 10 occurrences, at least 10 non-occurrences
// and a chi-square statistic significant at 0.05.
FeatureSet prune_bayes(const FeatureStats& stats);
// Keeps features that occurred at least twice.
FeatureSet prune_minimal(const FeatureStats& stats);

enum class Pruning : std::uint8_t { Pruned, Unpruned };
FeatureSet prune(const FeatureStats& stats, Pruning pruning);

std::vector<Feature> match_features(std::span<const Feature> extracted, const FeatureSet& set);
std::vector<Feature> match_features(const Corpus& corpus, const Occurrence& occurrence,
                                    const FeatureSet& set, const ExtractionConfig& config);

}  // namespace ctxspell
