#include "ctxspell/synthetic.hpp"

#include <sstream>
#include <string_view>
#include <vector>

#include "ctxspell/random.hpp"

namespace ctxspell::synthetic {

namespace {

using Words = std::vector<std::string>;

Words vocabulary(std::string_view prefix, std::size_t n) {
    Words out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::string(prefix) + std::to_string(i));
    return out;
}

void tag_all(TagDictionary& dictionary, const Words& words, const std::string& tag) {
    const std::vector<std::string> tags{tag};
    for (const auto& w : words) dictionary.add(w, tags);
}

const std::string& pick(Rng& rng, const Words& words) { return words[rng.below(words.size())]; }

std::string join(const Words& words) {
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) out += ' ';
        out += w;
    }
    return out;
}

Document sentence_document(const Words& words, const TagDictionary& dictionary, std::size_t index) {
    return tokenize(join(words) + " .", dictionary, {}, "s" + std::to_string(index));
}

// "The c c <member> c c ." with each cue drawn from the member's own list
// with probability `bias`.
Words cued_sentence(Rng& rng, const ConfusionSet& set, std::size_t member, const std::vector<Words>& cues,
                    std::size_t per_side, double bias) {
    auto cue = [&] {
        const std::size_t from = rng.chance(bias) ? member : (member + 1 + rng.below(set.size() - 1)) % set.size();
        return pick(rng, cues[from]);
    };
    Words w{"The"};
    for (std::size_t i = 0; i < per_side; ++i) w.push_back(cue());
    w.push_back(set.member(member));
    for (std::size_t i = 0; i < per_side; ++i) w.push_back(cue());
    return w;
}

void tag_members(TagDictionary& dictionary, const ConfusionSet& set) {
    const std::vector<std::string> tags{"CS"};
    for (const auto& m : set.members()) dictionary.add(m, tags);
    dictionary.add("the", std::vector<std::string>{"DT"});
}

}  // namespace

Fixture rare_collocation(std::uint64_t seed, const RareOptions& options) {
    Rng rng(seed);
    Fixture f;
    tag_members(f.dictionary, f.set);
    std::vector<Words> cues{vocabulary("wea", options.cue_vocabulary), vocabulary("whe", options.cue_vocabulary)};
    const Words neutral = vocabulary("neu", options.neutral_vocabulary);
    const Words rare = vocabulary("rar", options.rare_words);
    tag_all(f.dictionary, cues[0], "NN");
    tag_all(f.dictionary, cues[1], "NN");
    tag_all(f.dictionary, neutral, "JJ");
    tag_all(f.dictionary, rare, "NNP");

    std::vector<Words> sentences;
    for (std::size_t i = 0; i < options.common_sentences; ++i) {
        sentences.push_back(cued_sentence(rng, f.set, rng.below(2), cues, options.cues_per_side, options.cue_bias));
    }
    const std::size_t spread = options.max_rare_uses - options.min_rare_uses + 1;
    for (std::size_t r = 0; r < rare.size(); ++r) {
        const std::size_t uses = options.min_rare_uses + rng.below(spread);
        for (std::size_t u = 0; u < uses; ++u) {
            Words w{"The", pick(rng, neutral), rare[r], f.set.member(r % 2)};
            w.push_back(pick(rng, neutral));
            w.push_back(pick(rng, neutral));
            sentences.push_back(std::move(w));
        }
    }
    rng.shuffle(std::span(sentences));
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        f.a.push_back(sentence_document(sentences[i], f.dictionary, i));
    }
    return f;
}

Fixture domain_shift(std::uint64_t seed, const ShiftOptions& options) {
    Rng rng(seed);
    Fixture f;
    tag_members(f.dictionary, f.set);
    std::vector<Words> va{vocabulary("wea", options.cue_vocabulary), vocabulary("whe", options.cue_vocabulary)};
    std::vector<Words> vb{vocabulary("wxb", options.cue_vocabulary), vocabulary("whb", options.cue_vocabulary)};
    for (std::size_t m = 0; m < 2; ++m) {
        for (std::size_t i = 0; i < options.shared_cues && i < options.cue_vocabulary; ++i) vb[m][i] = va[m][i];
        tag_all(f.dictionary, va[m], "NN");
        tag_all(f.dictionary, vb[m], "NN");
    }
    for (std::size_t i = 0; i < options.a_sentences; ++i) {
        f.a.push_back(sentence_document(
            cued_sentence(rng, f.set, rng.below(2), va, options.cues_per_side, options.cue_bias), f.dictionary, i));
    }
    for (std::size_t i = 0; i < options.b_sentences; ++i) {
        f.b.push_back(sentence_document(
            cued_sentence(rng, f.set, rng.below(2), vb, options.cues_per_side, options.cue_bias), f.dictionary, i));
    }
    return f;
}

DesertStorm desert_storm(std::uint64_t seed) {
    Rng rng(seed);
    DesertStorm out;
    Fixture& f = out.fixture;
    f.set = ConfusionSet({"desert", "dessert"});
    tag_members(f.dictionary, f.set);
    const std::vector<Words> cues{
        {"sand", "dry", "dune", "camel", "heat", "vast", "oasis", "cactus", "barren", "sun"},
        {"cake", "sweet", "chocolate", "dinner", "cream", "pie", "sugar", "fruit", "menu", "spoon"}};
    tag_all(f.dictionary, cues[0], "NN");
    tag_all(f.dictionary, cues[1], "NN");
    const Words filler{"troops", "moved", "north", "during", "spring", "the", "army", "command", "began",
                       "allied", "forces", "January", "news", "reported", "launched", "air", "campaign"};
    tag_all(f.dictionary, filler, "NN");
    f.dictionary.add("operation", std::vector<std::string>{"NN"});
    f.dictionary.add("storm", std::vector<std::string>{"NN"});

    // Corpus A leans towards dessert so an uninformed guess is wrong.
    for (std::size_t i = 0; i < 300; ++i) {
        const std::size_t member = rng.chance(0.4) ? 0 : 1;
        f.a.push_back(sentence_document(cued_sentence(rng, f.set, member, cues, 2, 0.85), f.dictionary, i));
    }

    // Corpus B is a single article, so context windows span sentences.
    const std::size_t total = out.consistent + 1;
    const std::size_t wrong_at = total / 2;
    std::string article;
    for (std::size_t i = 0; i < total; ++i) {
        const Words w{"The", pick(rng, filler), pick(rng, filler), "Operation", i == wrong_at ? "dessert" : "desert",
                      "Storm", pick(rng, filler), pick(rng, filler)};
        article += join(w) + " . ";
    }
    f.b.push_back(tokenize(article, f.dictionary, {}, "article"));
    out.inconsistent = find_occurrences(f.b.front(), 0, f.set)[wrong_at];
    out.inconsistent.gold = 0;
    return out;
}

std::string to_too_text(std::uint64_t seed, std::size_t sentences) {
    Rng rng(seed);
    const Words too_left{"not", "far", "much", "way", "it", "is"};
    const Words too_right{"late", "late", "late", "early", "big", "much", "soon", "hot"};
    const Words to_left{"went", "go", "walked", "want", "back", "drove", "listen", "talk"};
    const Words to_right{"the", "school", "town", "work", "see", "be", "a", "bed"};
    const Words starters{"She", "He", "We", "They", "It"};
    std::ostringstream out;
    for (std::size_t i = 0; i < sentences; ++i) {
        const bool too = rng.chance(0.4);
        const Words& left = too ? too_left : to_left;
        const Words& right = too ? too_right : to_right;
        out << pick(rng, starters) << ' ' << pick(rng, left) << ' ' << (too ? "too" : "to") << ' ' << pick(rng, right)
            << ".\n";
    }
    return out.str();
}

std::string to_too_dictionary() {
    return "to\tTO,IN\n"
           "too\tRB\n"
           "late\tJJ,RB\n"
           "not\tRB\n"
           "it's\tPRP+VBZ\n"
           "the\tDT\n";
}

}  // namespace ctxspell::synthetic
