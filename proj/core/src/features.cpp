#include "ctxspell/features.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <stdexcept>

namespace ctxspell {

namespace {

void hash_combine(std::size_t& seed, std::size_t value) {
    seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

void escape_into(std::string& out, std::string_view text) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        switch (c) {
            case '\\': out += "\\\\"; break;
            case ',': out += "\\,"; break;
            case '\t': out += "\\t"; break;
            case '\n': out += "\\n"; break;
            case '@':
                out += i == 0 ? "\\@" : "@";
                break;
            default: out += c;
        }
    }
}

// Splits on unescaped `sep` and undoes escapes. The bool records whether a
// part began with an unescaped '@'.
std::vector<std::pair<bool, std::string>> unescape_split(std::string_view text, char sep) {
    std::vector<std::pair<bool, std::string>> parts(1);
    bool at_start = true;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '\\' && i + 1 < text.size()) {
            const char n = text[++i];
            parts.back().second += n == 't' ? '\t' : n == 'n' ? '\n' : n;
            at_start = false;
        } else if (c == sep) {
            parts.emplace_back();
            at_start = true;
        } else if (c == '@' && at_start) {
            parts.back().first = true;
            at_start = false;
        } else {
            parts.back().second += c;
            at_start = false;
        }
    }
    return parts;
}

struct Window {
    std::size_t start;  // first target token, document position
    std::size_t end;    // one past the last target token
};

Window target_window(const Document& document, const Occurrence& occurrence) {
    const std::size_t start = document.position(occurrence.sentence, occurrence.token);
    return {start, start + occurrence.span};
}

// Document position of relative position `rel` (never 0); nullopt past the
// document edges.
std::optional<std::size_t> resolve(const Document& document, Window w, int rel) {
    long long pos = rel < 0 ? static_cast<long long>(w.start) + rel
                            : static_cast<long long>(w.end) + rel - 1;
    if (pos < 0 || pos >= static_cast<long long>(document.tokens.size())) return std::nullopt;
    return static_cast<std::size_t>(pos);
}

std::vector<Element> element_options(const Document& document, std::optional<std::size_t> pos) {
    if (!pos) return {Element::tag(std::string(kBoundaryTag))};
    const Token& token = document.tokens[*pos];
    std::vector<Element> options;
    options.reserve(1 + token.tags.size());
    options.push_back(Element::literal(token.folded));
    for (const auto& tag : token.tags) options.push_back(Element::tag(tag));
    return options;
}

bool element_matches(const Document& document, std::optional<std::size_t> pos, const Element& e) {
    if (!pos) return e.is_tag && e.text == kBoundaryTag;
    const Token& token = document.tokens[*pos];
    return e.is_tag ? token.has_tag(e.text) : token.folded == e.text;
}

// Appends every assignment of options to the span of relative positions
// [first, first + length).
void enumerate_span(const Document& document, Window w, int first, int length,
                    std::vector<Feature>& out) {
    std::vector<std::vector<Element>> options;
    for (int i = 0; i < length; ++i) options.push_back(element_options(document, resolve(document, w, first + i)));
    std::vector<std::size_t> choice(options.size(), 0);
    while (true) {
        std::vector<Element> elements;
        elements.reserve(options.size());
        for (std::size_t i = 0; i < options.size(); ++i) elements.push_back(options[i][choice[i]]);
        out.push_back(Feature::collocation(first, std::move(elements)));
        std::size_t i = options.size();
        while (i > 0) {
            --i;
            if (++choice[i] < options[i].size()) break;
            choice[i] = 0;
            if (i == 0) return;
        }
        if (options.empty()) return;
    }
}

}  // namespace

std::size_t FeatureHash::operator()(const Feature& f) const noexcept {
    std::size_t seed = static_cast<std::size_t>(f.kind);
    const std::hash<std::string> h;
    if (f.kind == FeatureKind::ContextWord) {
        hash_combine(seed, h(f.word));
        return seed;
    }
    hash_combine(seed, static_cast<std::size_t>(f.offset + 1024));
    for (const auto& e : f.elements) {
        hash_combine(seed, h(e.text) + e.is_tag);
    }
    return seed;
}

std::string dump_feature(const Feature& feature) {
    std::string out;
    if (feature.kind == FeatureKind::ContextWord) {
        out = "CW\t";
        escape_into(out, feature.word);
        return out;
    }
    out = "COLL\t" + std::to_string(feature.offset) + '\t';
    for (std::size_t i = 0; i < feature.elements.size(); ++i) {
        if (i) out += ',';
        const auto& e = feature.elements[i];
        if (e.is_tag) out += '@';
        escape_into(out, e.text);
    }
    return out;
}

Feature parse_feature(std::string_view line) {
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw std::invalid_argument("malformed feature line");
    const auto kind = line.substr(0, tab);
    const auto rest = line.substr(tab + 1);
    if (kind == "CW") {
        auto parts = unescape_split(rest, '\0');
        auto word = parts.front().second;
        if (parts.front().first) word.insert(word.begin(), '@');
        return Feature::context_word(std::move(word));
    }
    if (kind != "COLL") throw std::invalid_argument("unknown feature kind: " + std::string(kind));
    const auto tab2 = rest.find('\t');
    if (tab2 == std::string_view::npos) throw std::invalid_argument("malformed collocation line");
    int offset = 0;
    const auto off = rest.substr(0, tab2);
    const auto [ptr, ec] = std::from_chars(off.data(), off.data() + off.size(), offset);
    if (ec != std::errc{} || ptr != off.data() + off.size() || offset == 0) {
        throw std::invalid_argument("malformed collocation offset");
    }
    std::vector<Element> elements;
    for (auto& [is_tag, text] : unescape_split(rest.substr(tab2 + 1), ',')) {
        elements.push_back(Element{is_tag, std::move(text)});
    }
    return Feature::collocation(offset, std::move(elements));
}

void ExtractionConfig::validate() const {
    if (k < 1) throw std::invalid_argument("context-word window k must be at least 1");
    if (l < 1) throw std::invalid_argument("collocation length l must be at least 1");
}

std::vector<Feature> extract_features(const Document& document, const Occurrence& occurrence,
                                      const ExtractionConfig& config) {
    const Window w = target_window(document, occurrence);
    const std::size_t n = document.tokens.size();
    std::vector<Feature> out;

    const std::size_t lo = w.start >= static_cast<std::size_t>(config.k) ? w.start - config.k : 0;
    const std::size_t hi = std::min(n, w.end + config.k);
    for (std::size_t p = lo; p < hi; ++p) {
        if (p >= w.start && p < w.end) continue;
        const Token& token = document.tokens[p];
        if (!token.is_punct()) out.push_back(Feature::context_word(token.folded));
    }
    for (int length = 1; length <= config.l; ++length) {
        enumerate_span(document, w, -length, length, out);
        enumerate_span(document, w, 1, length, out);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Feature> extract_features(const Corpus& corpus, const Occurrence& occurrence,
                                      const ExtractionConfig& config) {
    return extract_features(corpus.at(occurrence.doc), occurrence, config);
}

bool feature_matches(const Document& document, const Occurrence& occurrence,
                     const Feature& feature, const ExtractionConfig& config) {
    const Window w = target_window(document, occurrence);
    if (feature.kind == FeatureKind::ContextWord) {
        for (int rel = -config.k; rel <= config.k; ++rel) {
            if (rel == 0) continue;
            const auto pos = resolve(document, w, rel);
            if (pos && !document.tokens[*pos].is_punct() && document.tokens[*pos].folded == feature.word) {
                return true;
            }
        }
        return false;
    }
    const int length = static_cast<int>(feature.elements.size());
    if (length < 1 || length > config.l) return false;
    if (feature.offset != 1 && feature.offset != -length) return false;
    for (int i = 0; i < length; ++i) {
        if (!element_matches(document, resolve(document, w, feature.offset + i), feature.elements[i])) {
            return false;
        }
    }
    return true;
}

FeatureId FeatureIndex::intern(const Feature& feature) {
    const auto [it, inserted] = ids_.try_emplace(feature, static_cast<FeatureId>(features_.size()));
    if (inserted) features_.push_back(feature);
    return it->second;
}

std::optional<FeatureId> FeatureIndex::find(const Feature& feature) const {
    const auto it = ids_.find(feature);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

FeatureStats::FeatureStats(std::size_t member_count) : member_totals_(member_count, 0) {
    if (member_count == 0) throw std::invalid_argument("FeatureStats needs at least one member");
}

FeatureId FeatureStats::slot(const Feature& feature) {
    const FeatureId id = index_.intern(feature);
    if (counts_.size() < (static_cast<std::size_t>(id) + 1) * member_count()) {
        counts_.resize((static_cast<std::size_t>(id) + 1) * member_count(), 0);
    }
    return id;
}

void FeatureStats::add(std::span<const Feature> features, std::size_t member) {
    if (member >= member_count()) throw std::out_of_range("member index out of range");
    ++member_totals_[member];
    for (const auto& f : features) ++counts_[slot(f) * member_count() + member];
}

void FeatureStats::merge(const FeatureStats& other) {
    if (other.member_count() != member_count()) {
        throw std::invalid_argument("cannot merge stats of different confusion sets");
    }
    for (std::size_t m = 0; m < member_count(); ++m) member_totals_[m] += other.member_totals_[m];
    for (FeatureId id = 0; id < other.feature_count(); ++id) {
        const FeatureId mine = slot(other.feature(id));
        for (std::size_t m = 0; m < member_count(); ++m) {
            counts_[mine * member_count() + m] += other.count(id, m);
        }
    }
}

void FeatureStats::set_counts(const Feature& feature, std::span<const std::uint64_t> counts) {
    if (counts.size() != member_count()) throw std::invalid_argument("count vector size mismatch");
    const FeatureId id = slot(feature);
    std::copy(counts.begin(), counts.end(), counts_.begin() + id * member_count());
}

std::uint64_t FeatureStats::present(FeatureId id) const {
    const auto c = counts(id);
    return std::accumulate(c.begin(), c.end(), std::uint64_t{0});
}

std::uint64_t FeatureStats::total() const {
    return std::accumulate(member_totals_.begin(), member_totals_.end(), std::uint64_t{0});
}

FeatureStats FeatureStats::filtered(const std::function<bool(FeatureId)>& keep) const {
    FeatureStats out(member_count());
    out.member_totals_ = member_totals_;
    for (FeatureId id : sorted_ids()) {
        if (keep(id)) out.set_counts(feature(id), counts(id));
    }
    return out;
}

std::vector<FeatureId> FeatureStats::sorted_ids() const {
    std::vector<FeatureId> ids(feature_count());
    std::iota(ids.begin(), ids.end(), FeatureId{0});
    std::sort(ids.begin(), ids.end(),
              [this](FeatureId a, FeatureId b) { return feature(a) < feature(b); });
    return ids;
}

FeatureStats collect_stats(const Corpus& corpus, std::span<const Occurrence> occurrences,
                           std::size_t member_count, const ExtractionConfig& config,
                           LabelSource labels) {
    if (occurrences.empty()) throw std::invalid_argument("collect_stats: empty training set");
    FeatureStats stats(member_count);
    for (const auto& occ : occurrences) {
        stats.add(extract_features(corpus, occ, config),
                  labels == LabelSource::Gold ? occ.gold : occ.actual);
    }
    return stats;
}

double chi_square(std::span<const std::array<std::uint64_t, 2>> table) {
    double total = 0.0;
    std::array<double, 2> column{0.0, 0.0};
    for (const auto& row : table) {
        column[0] += static_cast<double>(row[0]);
        column[1] += static_cast<double>(row[1]);
    }
    total = column[0] + column[1];
    if (total == 0.0) throw std::invalid_argument("chi_square: empty table");
    double statistic = 0.0;
    for (const auto& row : table) {
        const double row_total = static_cast<double>(row[0]) + static_cast<double>(row[1]);
        for (int c = 0; c < 2; ++c) {
            const double expected = row_total * column[c] / total;
            if (expected <= 0.0) continue;
            const double diff = static_cast<double>(row[c]) - expected;
            statistic += diff * diff / expected;
        }
    }
    return statistic;
}

std::vector<std::array<std::uint64_t, 2>> presence_table(const FeatureStats& stats, FeatureId id) {
    std::vector<std::array<std::uint64_t, 2>> table(stats.member_count());
    for (std::size_t m = 0; m < stats.member_count(); ++m) {
        const auto present = stats.count(id, m);
        const auto n = stats.member_total(m);
        table[m] = {present, n >= present ? n - present : 0};
    }
    return table;
}

double feature_chi_square(const FeatureStats& stats, FeatureId id) {
    return chi_square(presence_table(stats, id));
}

double chi_square_critical_05(std::size_t df) {
    static constexpr std::array<double, 9> critical{3.8415, 5.9915, 7.8147, 9.4877, 11.0705,
                                                   12.5916, 14.0671, 15.5073, 16.9190};
    if (df < 1 || df > critical.size()) {
        throw std::out_of_range("chi-square critical values cover df 1 through 9");
    }
    return critical[df - 1];
}

FeatureSet prune_bayes(const FeatureStats& stats) {
    const double critical = chi_square_critical_05(stats.member_count() - 1);
    return stats.filtered([&](FeatureId id) {
        if (stats.present(id) < 10 || stats.absent(id) < 10) return false;
        return feature_chi_square(stats, id) >= critical;
    });
}

FeatureSet prune_minimal(const FeatureStats& stats) {
    return stats.filtered([&](FeatureId id) { return stats.present(id) >= 2; });
}

FeatureSet prune(const FeatureStats& stats, Pruning pruning) {
    return pruning == Pruning::Pruned ? prune_bayes(stats) : prune_minimal(stats);
}

std::vector<Feature> match_features(std::span<const Feature> extracted, const FeatureSet& set) {
    std::vector<Feature> out;
    for (const auto& f : extracted) {
        if (set.contains(f)) out.push_back(f);
    }
    return out;
}

std::vector<Feature> match_features(const Corpus& corpus, const Occurrence& occurrence,
                                    const FeatureSet& set, const ExtractionConfig& config) {
    return match_features(extract_features(corpus, occurrence, config), set);
}

}  // namespace ctxspell
