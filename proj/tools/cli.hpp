#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ctxspell/harness.hpp"
#include "ctxspell/model_io.hpp"

namespace ctxspell::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kIoError = 2, kNoData = 3 };

struct CliConfig {
    std::string subcommand;
    std::filesystem::path corpus;
    std::filesystem::path corpus_b;
    std::filesystem::path dictionary;
    std::filesystem::path confusions;
    std::filesystem::path model;
    std::filesystem::path out;
    std::filesystem::path input;
    std::string algorithm = "both";
    std::string pruning = "unpruned";
    std::string regime = "within";
    std::string combiner = "percloud";
    double percent = 5.0;
    std::vector<double> percents{0, 5, 10, 15, 20};
    double train_fraction = 0.8;
    double test_fraction = 0.4;
    double unsup_fraction = 0.6;
    std::uint64_t seed = 1;
    int k = 10;
    int l = 2;
    double kappa = 10.0;
    bool dependencies = true;
    double theta = 1.0;
    double alpha = 1.5;
    double gamma_min = 0.5;
    double gamma_T = 1000.0;
    double epsilon = 0x1.0p-20;
    bool apply = false;
    bool latex = false;
    bool sentences_per_line = false;
    bool print_config = false;

    ExperimentConfig experiment() const;
    TokenizeOptions tokenize_options() const { return {sentences_per_line}; }
};

// A file is one document; a directory contributes each regular file, in
// name order.
Corpus load_corpus(const std::filesystem::path& path, const TagDictionary& dictionary,
                   const TokenizeOptions& options);

int cmd_train(const CliConfig& config, std::ostream& out, std::ostream& err);
int cmd_eval(const CliConfig& config, std::ostream& out, std::ostream& err);
int cmd_correct(const CliConfig& config, std::istream& in, std::ostream& out, std::ostream& err);

void print_config(const CliConfig& config, std::ostream& out);

// Parses argv and dispatches. Standard input feeds `correct` when the input
// path is "-".
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

struct Correction {
    std::size_t line = 0;    // 1-based
    std::size_t column = 0;  // 1-based byte column
    std::size_t offset = 0;  // byte range in the input
    std::size_t length = 0;
    std::string written;
    std::string suggested;
};

// Corrections for `text` under the given models, in text order. Each
// occurrence is claimed by the first model whose confusion set covers it.
std::vector<Correction> find_corrections(const std::string& text, std::span<const AnyModel> models,
                                         const TagDictionary& dictionary, const TokenizeOptions& options);
// Replaces each corrected span, keeping a leading capital.
std::string apply_corrections(const std::string& text, std::span<const Correction> corrections);

}  // namespace ctxspell::cli
