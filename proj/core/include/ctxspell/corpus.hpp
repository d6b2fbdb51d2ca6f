#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ctxspell {

// Raised when an input file cannot be opened or read.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kPunctTag = "PUNCT";
inline constexpr std::string_view kUnknownTag = "UNK";
inline constexpr std::string_view kBoundaryTag = "BOUNDARY";

std::string fold_case(std::string_view text);

struct Token {
    std::string surface;
    std::string folded;
    // Sorted, duplicate-free, never empty.
    std::vector<std::string> tags;
    // Byte range of the surface form in the source text.
    std::size_t offset = 0;
    std::size_t length = 0;

    bool is_punct() const { return tags.size() == 1 && tags.front() == kPunctTag; }
    bool has_tag(std::string_view tag) const;
};

// Word -> set of possible part-of-speech tags. Words are stored folded.
class TagDictionary {
public:
    TagDictionary() = default;

    // Lines of the form `word<TAB>tag[,tag...]`. Repeated words merge.
    static TagDictionary parse(std::istream& in);
    static TagDictionary load(const std::filesystem::path& path);

    void add(std::string_view word, std::span<const std::string> tags);

    // Tag set of a folded word, or {UNK} when the word is not listed.
    const std::vector<std::string>& lookup(std::string_view folded) const;

    std::size_t size() const { return entries_.size(); }

private:
    std::unordered_map<std::string, std::vector<std::string>> entries_;
};

struct Document {
    std::string id;
    // Tokens of all sentences, in source order.
    std::vector<Token> tokens;
    // sentence_begin[s] is the index in `tokens` of sentence s's first token.
    std::vector<std::size_t> sentence_begin;

    std::size_t sentence_count() const { return sentence_begin.size(); }
    std::span<const Token> sentence(std::size_t s) const;
    std::size_t position(std::size_t sentence, std::size_t token) const {
        return sentence_begin[sentence] + token;
    }
};

struct TokenizeOptions {
    // Treat each input line as one sentence instead of detecting boundaries.
    bool sentences_per_line = false;
};

Document tokenize(std::string_view text, const TagDictionary& dictionary,
                  const TokenizeOptions& options = {}, std::string id = {});

using Corpus = std::vector<Document>;

std::string read_file(const std::filesystem::path& path);
Document load_document(const std::filesystem::path& path, const TagDictionary& dictionary,
                       const TokenizeOptions& options = {});

class ConfusionSet {
public:
    explicit ConfusionSet(std::vector<std::string> members);

    // Parses one `a|b|c` line.
    static ConfusionSet parse(std::string_view line);

    const std::string& id() const { return id_; }
    const std::vector<std::string>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    const std::string& member(std::size_t i) const { return members_[i]; }
    // Space-separated words of a member ("may be" -> {may, be}).
    const std::vector<std::string>& member_words(std::size_t i) const { return words_[i]; }
    // Members joined with '|', the on-disk form.
    std::string joined() const;

private:
    std::string id_;
    std::vector<std::string> members_;
    std::vector<std::vector<std::string>> words_;
};

// One set per non-blank line; lines starting with '#' are comments.
std::vector<ConfusionSet> parse_confusion_sets(std::istream& in);
std::vector<ConfusionSet> load_confusion_sets(const std::filesystem::path& path);

struct Occurrence {
    std::size_t doc = 0;
    std::size_t sentence = 0;
    std::size_t token = 0;
    // Number of document tokens covered by the written member.
    std::size_t span = 1;
    std::size_t actual = 0;
    std::size_t gold = 0;

    friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

std::vector<Occurrence> find_occurrences(const Document& document, std::size_t doc_index,
                                         const ConfusionSet& set);
std::vector<Occurrence> find_occurrences(const Corpus& corpus, const ConfusionSet& set);

struct Split {
    std::vector<Occurrence> train;
    std::vector<Occurrence> test;
    std::uint64_t seed = 0;
};

// Shuffles the sentences that carry occurrences and sends the first
// floor(train_fraction * S) of them to the train side. Both sides keep the
// input order of occurrences.
Split split_by_sentence(std::span<const Occurrence> occurrences, double train_fraction,
                        std::uint64_t seed);

// Number of occurrences corrupt() alters: floor(percent * n / 100).
std::size_t corruption_count(std::size_t n, double percent);

// Reassigns `actual` of floor(percent/100 * N) occurrences, chosen uniformly
// without replacement, to a different member chosen uniformly.
std::vector<Occurrence> corrupt(std::span<const Occurrence> occurrences, double percent,
                                std::size_t member_count, std::uint64_t seed);

}  // namespace ctxspell
