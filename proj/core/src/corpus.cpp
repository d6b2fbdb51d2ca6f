#include "ctxspell/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <sstream>

#include "ctxspell/random.hpp"

namespace ctxspell {

namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) != 0 || c >= 0x80; }
bool is_space(unsigned char c) { return std::isspace(c) != 0; }
bool is_joiner(char c) { return c == '\'' || c == '-'; }
bool is_sentence_final(char c) { return c == '.' || c == '!' || c == '?'; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && is_space(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto end = s.find(sep, start);
        parts.emplace_back(s.substr(start, end - start));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return parts;
}

const std::vector<std::string>& punct_tags() {
    static const std::vector<std::string> tags{std::string(kPunctTag)};
    return tags;
}

// `.`, `!` or `?` at `pos` ends a sentence when followed by end of input, or
// by whitespace and then a capital letter.
bool ends_sentence(std::string_view text, std::size_t pos) {
    std::size_t next = pos + 1;
    if (next >= text.size()) return true;
    if (!is_space(static_cast<unsigned char>(text[next]))) return false;
    while (next < text.size() && is_space(static_cast<unsigned char>(text[next]))) ++next;
    if (next == text.size()) return true;
    return std::isupper(static_cast<unsigned char>(text[next])) != 0;
}

class DocumentBuilder {
public:
    DocumentBuilder(const TagDictionary& dictionary, std::string id) : dictionary_(dictionary) {
        doc_.id = std::move(id);
    }

    void word(std::string_view text, std::size_t offset) {
        Token token;
        token.surface = std::string(text);
        token.folded = fold_case(text);
        token.tags = dictionary_.lookup(token.folded);
        token.offset = offset;
        token.length = text.size();
        push(std::move(token));
    }

    void punct(std::string_view text, std::size_t offset) {
        Token token;
        token.surface = std::string(text);
        token.folded = token.surface;
        token.tags = punct_tags();
        token.offset = offset;
        token.length = text.size();
        push(std::move(token));
    }

    void end_sentence() { open_ = false; }

    Document finish() && { return std::move(doc_); }

private:
    void push(Token token) {
        if (!open_) {
            doc_.sentence_begin.push_back(doc_.tokens.size());
            open_ = true;
        }
        doc_.tokens.push_back(std::move(token));
    }

    const TagDictionary& dictionary_;
    Document doc_;
    bool open_ = false;
};

// Tokenizes text[begin, end) into the builder. Sentence boundaries are only
// detected when `detect_boundaries` is set.
void tokenize_range(std::string_view text, std::size_t begin, std::size_t end,
                    bool detect_boundaries, DocumentBuilder& builder) {
    std::size_t i = begin;
    while (i < end) {
        const auto c = static_cast<unsigned char>(text[i]);
        if (is_space(c)) {
            ++i;
            continue;
        }
        if (is_word_byte(c)) {
            std::size_t j = i + 1;
            while (j < end) {
                const auto d = static_cast<unsigned char>(text[j]);
                if (is_word_byte(d)) {
                    ++j;
                } else if (is_joiner(text[j]) && j + 1 < end &&
                           is_word_byte(static_cast<unsigned char>(text[j + 1]))) {
                    j += 2;
                } else {
                    break;
                }
            }
            builder.word(text.substr(i, j - i), i);
            i = j;
            continue;
        }
        builder.punct(text.substr(i, 1), i);
        if (detect_boundaries && is_sentence_final(text[i]) && ends_sentence(text.substr(0, end), i)) {
            builder.end_sentence();
        }
        ++i;
    }
}

}  // namespace

std::string fold_case(std::string_view text) {
    std::string out(text);
    for (auto& ch : out) {
        if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
    }
    return out;
}

bool Token::has_tag(std::string_view tag) const {
    return std::binary_search(tags.begin(), tags.end(), tag);
}

TagDictionary TagDictionary::parse(std::istream& in) {
    TagDictionary dict;
    std::string line;
    while (std::getline(in, line)) {
        const auto view = trim(line);
        if (view.empty()) continue;
        const auto tab = view.find('\t');
        if (tab == std::string_view::npos) continue;
        std::vector<std::string> tags;
        for (auto& tag : split(view.substr(tab + 1), ',')) {
            auto t = trim(tag);
            if (!t.empty()) tags.emplace_back(t);
        }
        if (!tags.empty()) dict.add(trim(view.substr(0, tab)), tags);
    }
    return dict;
}

TagDictionary TagDictionary::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open tag dictionary: " + path.string());
    return parse(in);
}

void TagDictionary::add(std::string_view word, std::span<const std::string> tags) {
    auto& entry = entries_[fold_case(word)];
    entry.insert(entry.end(), tags.begin(), tags.end());
    std::sort(entry.begin(), entry.end());
    entry.erase(std::unique(entry.begin(), entry.end()), entry.end());
}

const std::vector<std::string>& TagDictionary::lookup(std::string_view folded) const {
    static const std::vector<std::string> unknown{std::string(kUnknownTag)};
    const auto it = entries_.find(std::string(folded));
    return it == entries_.end() ? unknown : it->second;
}

std::span<const Token> Document::sentence(std::size_t s) const {
    const std::size_t begin = sentence_begin[s];
    const std::size_t end = s + 1 < sentence_begin.size() ? sentence_begin[s + 1] : tokens.size();
    return std::span<const Token>(tokens).subspan(begin, end - begin);
}

Document tokenize(std::string_view text, const TagDictionary& dictionary,
                  const TokenizeOptions& options, std::string id) {
    DocumentBuilder builder(dictionary, std::move(id));
    if (options.sentences_per_line) {
        std::size_t start = 0;
        while (start <= text.size()) {
            auto end = text.find('\n', start);
            if (end == std::string_view::npos) end = text.size();
            tokenize_range(text, start, end, false, builder);
            builder.end_sentence();
            start = end + 1;
        }
    } else {
        tokenize_range(text, 0, text.size(), true, builder);
    }
    return std::move(builder).finish();
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

Document load_document(const std::filesystem::path& path, const TagDictionary& dictionary,
                       const TokenizeOptions& options) {
    return tokenize(read_file(path), dictionary, options, path.filename().string());
}

ConfusionSet::ConfusionSet(std::vector<std::string> members) {
    if (members.size() < 2) throw std::invalid_argument("confusion set needs at least two members");
    for (auto& m : members) {
        std::istringstream words(fold_case(m));
        std::vector<std::string> parts;
        std::string w;
        while (words >> w) parts.push_back(w);
        if (parts.empty()) throw std::invalid_argument("empty confusion set member");
        std::string normalized = parts.front();
        for (std::size_t i = 1; i < parts.size(); ++i) normalized += ' ' + parts[i];
        if (std::find(members_.begin(), members_.end(), normalized) != members_.end()) {
            throw std::invalid_argument("duplicate confusion set member: " + normalized);
        }
        members_.push_back(std::move(normalized));
        words_.push_back(std::move(parts));
    }
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (i) id_ += ", ";
        id_ += members_[i];
    }
}

ConfusionSet ConfusionSet::parse(std::string_view line) {
    return ConfusionSet(split(trim(line), '|'));
}

std::string ConfusionSet::joined() const {
    std::string out;
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (i) out += '|';
        out += members_[i];
    }
    return out;
}

std::vector<ConfusionSet> parse_confusion_sets(std::istream& in) {
    std::vector<ConfusionSet> sets;
    std::string line;
    while (std::getline(in, line)) {
        const auto view = trim(line);
        if (view.empty() || view.front() == '#') continue;
        sets.push_back(ConfusionSet::parse(view));
    }
    return sets;
}

std::vector<ConfusionSet> load_confusion_sets(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open confusion-set file: " + path.string());
    return parse_confusion_sets(in);
}

std::vector<Occurrence> find_occurrences(const Document& document, std::size_t doc_index,
                                         const ConfusionSet& set) {
    std::vector<Occurrence> found;
    for (std::size_t s = 0; s < document.sentence_count(); ++s) {
        const auto tokens = document.sentence(s);
        std::size_t t = 0;
        while (t < tokens.size()) {
            std::size_t best = set.size();
            std::size_t best_len = 0;
            for (std::size_t m = 0; m < set.size(); ++m) {
                const auto& words = set.member_words(m);
                if (words.size() <= best_len || t + words.size() > tokens.size()) continue;
                bool match = true;
                for (std::size_t w = 0; w < words.size() && match; ++w) {
                    match = tokens[t + w].folded == words[w];
                }
                if (match) {
                    best = m;
                    best_len = words.size();
                }
            }
            if (best == set.size()) {
                ++t;
                continue;
            }
            found.push_back(Occurrence{doc_index, s, t, best_len, best, best});
            t += best_len;
        }
    }
    return found;
}

std::vector<Occurrence> find_occurrences(const Corpus& corpus, const ConfusionSet& set) {
    std::vector<Occurrence> found;
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        auto part = find_occurrences(corpus[d], d, set);
        found.insert(found.end(), part.begin(), part.end());
    }
    return found;
}

Split split_by_sentence(std::span<const Occurrence> occurrences, double train_fraction,
                        std::uint64_t seed) {
    if (occurrences.empty()) throw std::invalid_argument("split_by_sentence: no occurrences");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw std::invalid_argument("split_by_sentence: train fraction must lie in (0, 1)");
    }
    using Key = std::pair<std::size_t, std::size_t>;
    std::vector<Key> sentences;
    for (const auto& occ : occurrences) sentences.emplace_back(occ.doc, occ.sentence);
    std::sort(sentences.begin(), sentences.end());
    sentences.erase(std::unique(sentences.begin(), sentences.end()), sentences.end());

    Rng rng(seed);
    rng.shuffle(std::span<Key>(sentences));
    const auto train_count =
        static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(sentences.size())));
    std::map<Key, bool> to_train;
    for (std::size_t i = 0; i < sentences.size(); ++i) to_train[sentences[i]] = i < train_count;

    Split split;
    split.seed = seed;
    for (const auto& occ : occurrences) {
        (to_train[{occ.doc, occ.sentence}] ? split.train : split.test).push_back(occ);
    }
    return split;
}

std::size_t corruption_count(std::size_t n, double percent) {
    return static_cast<std::size_t>(std::floor(percent * static_cast<double>(n) / 100.0));
}

std::vector<Occurrence> corrupt(std::span<const Occurrence> occurrences, double percent,
                                std::size_t member_count, std::uint64_t seed) {
    if (!(percent >= 0.0 && percent <= 100.0)) {
        throw std::invalid_argument("corrupt: percent must lie in [0, 100]");
    }
    std::vector<Occurrence> out(occurrences.begin(), occurrences.end());
    const std::size_t count = corruption_count(out.size(), percent);
    if (count == 0) return out;
    if (member_count < 2) throw std::invalid_argument("corrupt: confusion set needs two members");

    // Selection and replacement draw from separate streams, so the altered
    // occurrences at a lower percent are a prefix of those at a higher one.
    Rng pick(derive_seed(seed, 0));
    Rng replace(derive_seed(seed, 1));
    std::vector<std::size_t> index(out.size());
    std::iota(index.begin(), index.end(), std::size_t{0});
    for (std::size_t i = 0; i < count; ++i) {
        std::swap(index[i], index[i + pick.below(index.size() - i)]);
        auto& occ = out[index[i]];
        auto other = replace.below(member_count - 1);
        if (other >= occ.actual) ++other;
        occ.actual = other;
    }
    return out;
}

}  // namespace ctxspell
