#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "ctxspell/corpus.hpp"

// Generated corpora with known structure, used by the acceptance suite and
// the benchmarks.
namespace ctxspell::synthetic {

struct Fixture {
    TagDictionary dictionary;
    ConfusionSet set{{"weather", "whether"}};
    Corpus a;
    Corpus b;
};

struct RareOptions {
    std::size_t common_sentences = 300;
    std::size_t rare_words = 50;
    std::size_t min_rare_uses = 2;
    std::size_t max_rare_uses = 5;
    std::size_t cue_vocabulary = 20;
    std::size_t cues_per_side = 2;
    // Chance that a cue word comes from the target member's own vocabulary.
    double cue_bias = 0.75;
    std::size_t neutral_vocabulary = 40;
};

// One corpus (`a`) of one-sentence documents. Common sentences carry weak,
// member-biased cue words; each rare word sits directly before the target in
// 2-5 sentences, always with the same member, surrounded by neutral words.
Fixture rare_collocation(std::uint64_t seed, const RareOptions& options = {});

struct ShiftOptions {
    std::size_t a_sentences = 600;
    std::size_t b_sentences = 2000;
    std::size_t cue_vocabulary = 20;
    // Cue words per member that corpus B shares with corpus A.
    std::size_t shared_cues = 4;
    std::size_t cues_per_side = 2;
    double cue_bias = 0.8;
};

// Corpus A draws cue words from vocabulary VA, corpus B from VB; the two
// overlap in `shared_cues` words per member.
Fixture domain_shift(std::uint64_t seed, const ShiftOptions& options = {});

struct DesertStorm {
    Fixture fixture;  // set = {desert, dessert}
    // Position in corpus B of the one "Operation dessert Storm".
    Occurrence inconsistent;
    std::size_t consistent = 17;
};

// Corpus A is clean training text about deserts and desserts. Corpus B holds
// 17 "Operation desert Storm" sentences and one "Operation dessert Storm"
// placed mid-sequence, among unrelated filler.
DesertStorm desert_storm(std::uint64_t seed);

// Training text and dictionary for the {to, too} "It's not to late" example.
std::string to_too_text(std::uint64_t seed, std::size_t sentences = 400);
std::string to_too_dictionary();

}  // namespace ctxspell::synthetic
