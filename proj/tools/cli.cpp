#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace ctxspell::cli {

namespace {

std::vector<Algorithm> parse_algorithms(const std::string& name) {
    if (name == "bayes") return {Algorithm::Bayes};
    if (name == "winnows") return {Algorithm::WinnowS};
    if (name == "both") return {Algorithm::Bayes, Algorithm::WinnowS};
    throw std::invalid_argument("unknown algorithm '" + name + "'");
}

std::vector<Pruning> parse_prunings(const std::string& name) {
    if (name == "pruned") return {Pruning::Pruned};
    if (name == "unpruned") return {Pruning::Unpruned};
    if (name == "both") return {Pruning::Pruned, Pruning::Unpruned};
    throw std::invalid_argument("unknown pruning condition '" + name + "'");
}

Regime parse_regime(const std::string& name) {
    if (name == "within") return Regime::Within;
    if (name == "across") return Regime::Across;
    if (name == "supunsup") return Regime::SupUnsup;
    if (name == "incremental") return Regime::Incremental;
    throw std::invalid_argument("unknown regime '" + name + "'");
}

std::string join_doubles(const std::vector<double>& values) {
    std::string out;
    for (const double v : values) {
        if (!out.empty()) out += ',';
        out += format_double(v);
    }
    return out;
}

void require_path(const std::filesystem::path& path, const char* flag) {
    if (path.empty()) throw std::invalid_argument(std::string(flag) + " is required");
}

// Writes to --out when given, else to `out`.
void emit(const CliConfig& config, const std::string& text, std::ostream& out) {
    if (config.out.empty()) {
        out << text;
        return;
    }
    std::ofstream file(config.out, std::ios::binary);
    if (!file) throw IoError("cannot write output file: " + config.out.string());
    file << text;
    if (!file) throw IoError("failed writing output file: " + config.out.string());
}

struct Inputs {
    TagDictionary dictionary;
    Corpus a;
    Corpus b;
    std::vector<ConfusionSet> sets;
};

Inputs load_inputs(const CliConfig& config, bool need_b) {
    require_path(config.dictionary, "--dict");
    require_path(config.corpus, "--corpus");
    require_path(config.confusions, "--confusions");
    if (need_b) require_path(config.corpus_b, "--corpus-b");
    Inputs in;
    in.dictionary = TagDictionary::load(config.dictionary);
    in.sets = load_confusion_sets(config.confusions);
    in.a = load_corpus(config.corpus, in.dictionary, config.tokenize_options());
    if (!config.corpus_b.empty()) in.b = load_corpus(config.corpus_b, in.dictionary, config.tokenize_options());
    return in;
}

// Maps library exceptions to the documented exit codes.
template <typename F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const ModelFormatError& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
}

std::string match_case(const std::string& written, std::string suggested) {
    if (!written.empty() && !suggested.empty() && std::isupper(static_cast<unsigned char>(written[0]))) {
        suggested[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(suggested[0])));
    }
    return suggested;
}

}  // namespace

ExperimentConfig CliConfig::experiment() const {
    ExperimentConfig e;
    e.algorithms = parse_algorithms(algorithm);
    e.prunings = parse_prunings(pruning);
    if (regime != "sweep") e.regime = parse_regime(regime);
    e.train_fraction = train_fraction;
    e.test_fraction = test_fraction;
    e.unsup_fraction = unsup_fraction;
    e.corruption_percent = percent;
    e.seed = seed;
    e.extraction.k = k;
    e.extraction.l = l;
    e.bayes.kappa = kappa;
    e.bayes.resolve_dependencies = dependencies;
    e.winnow.theta = theta;
    e.winnow.alpha = alpha;
    e.winnow.epsilon = epsilon;
    e.winnow.schedule.gamma_min = gamma_min;
    e.winnow.schedule.horizon = gamma_T;
    if (combiner == "raw") {
        e.winnow.combiner = winnow::Combiner::Raw;
    } else if (combiner != "percloud") {
        throw std::invalid_argument("unknown combiner '" + combiner + "'");
    }
    e.validate();
    return e;
}

Corpus load_corpus(const std::filesystem::path& path, const TagDictionary& dictionary,
                   const TokenizeOptions& options) {
    std::error_code ec;
    if (!std::filesystem::is_directory(path, ec)) return {load_document(path, dictionary, options)};
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(path, ec)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    if (ec) throw IoError("cannot list directory: " + path.string());
    std::sort(files.begin(), files.end());
    Corpus corpus;
    for (const auto& f : files) corpus.push_back(load_document(f, dictionary, options));
    return corpus;
}

void print_config(const CliConfig& c, std::ostream& out) {
    out << "subcommand=" << c.subcommand << '\n'
        << "corpus=" << c.corpus.string() << '\n'
        << "corpus_b=" << c.corpus_b.string() << '\n'
        << "dict=" << c.dictionary.string() << '\n'
        << "confusions=" << c.confusions.string() << '\n'
        << "model=" << c.model.string() << '\n'
        << "out=" << c.out.string() << '\n'
        << "algorithm=" << c.algorithm << '\n'
        << "pruning=" << c.pruning << '\n'
        << "regime=" << c.regime << '\n'
        << "percent=" << format_double(c.percent) << '\n'
        << "percents=" << join_doubles(c.percents) << '\n'
        << "train_fraction=" << format_double(c.train_fraction) << '\n'
        << "test_fraction=" << format_double(c.test_fraction) << '\n'
        << "unsup_fraction=" << format_double(c.unsup_fraction) << '\n'
        << "seed=" << c.seed << '\n'
        << "k=" << c.k << '\n'
        << "l=" << c.l << '\n'
        << "kappa=" << format_double(c.kappa) << '\n'
        << "dependencies=" << (c.dependencies ? "on" : "off") << '\n'
        << "theta=" << format_double(c.theta) << '\n'
        << "alpha=" << format_double(c.alpha) << '\n'
        << "betas=0.5,0.6,0.7,0.8,0.9\n"
        << "gamma_min=" << format_double(c.gamma_min) << '\n'
        << "gamma_T=" << format_double(c.gamma_T) << '\n'
        << "epsilon=" << format_double(c.epsilon) << '\n'
        << "combiner=" << c.combiner << '\n'
        << "sentences_per_line=" << (c.sentences_per_line ? "true" : "false") << '\n'
        << "latex=" << (c.latex ? "true" : "false") << '\n'
        << "apply=" << (c.apply ? "true" : "false") << '\n';
}

int cmd_train(const CliConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto experiment = config.experiment();
        if (experiment.prunings.size() != 1) throw std::invalid_argument("train takes a single pruning condition");
        require_path(config.model, "--model");
        const auto in = load_inputs(config, false);

        std::vector<AnyModel> models;
        for (const auto& set : sorted_sets(in.sets)) {
            const auto occs = find_occurrences(in.a, set);
            if (occs.empty()) {
                err << "skipped " << set.id() << ": no occurrences\n";
                continue;
            }
            const TrainingPart part{&in.a, occs, LabelSource::Gold};
            auto learners = train_learners(set, std::span(&part, 1), experiment.prunings.front(), experiment);
            if (learners.bayes) models.emplace_back(std::move(*learners.bayes));
            if (learners.winnows) models.emplace_back(std::move(*learners.winnows));
            out << "trained " << set.id() << ": " << occs.size() << " occurrences, " << learners.feature_count
                << " features\n";
        }
        if (models.empty()) {
            err << "error: no confusion set occurs in the training corpus\n";
            return static_cast<int>(kNoData);
        }
        save_models(config.model, models);
        return static_cast<int>(kOk);
    });
}

int cmd_eval(const CliConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (config.print_config) {
            print_config(config, out);
            return static_cast<int>(kOk);
        }
        const auto experiment = config.experiment();
        const bool sweep = config.regime == "sweep";
        const bool need_b = sweep || experiment.regime == Regime::Across || experiment.regime == Regime::SupUnsup;
        const auto in = load_inputs(config, need_b);

        EvalReport report;
        if (sweep) {
            const auto series = corruption_sweep(experiment, in.a, in.b, in.sets, config.percents);
            report = sweep_report(series);
        } else {
            report = run_regime(experiment, in.a, config.corpus_b.empty() ? nullptr : &in.b, in.sets);
        }
        for (const auto& row : report.rows) {
            if (row.skipped) err << "skipped " << row.label << ": " << row.reason << '\n';
        }
        emit(config, config.latex ? report.to_latex() : report.to_tsv(), out);
        return static_cast<int>(kOk);
    });
}

std::vector<Correction> find_corrections(const std::string& text, std::span<const AnyModel> models,
                                         const TagDictionary& dictionary, const TokenizeOptions& options) {
    const Document doc = tokenize(text, dictionary, options);
    std::set<std::size_t> claimed;
    std::vector<Correction> out;
    for (const auto& model : models) {
        const auto& set = confusion_set_of(model);
        for (const auto& occ : find_occurrences(doc, 0, set)) {
            const std::size_t first = doc.position(occ.sentence, occ.token);
            if (!claimed.insert(first).second) continue;
            const std::size_t predicted = classify(model, extract_features(doc, occ, extraction_of(model)));
            if (predicted == occ.actual) continue;
            const Token& begin = doc.tokens[first];
            const Token& end = doc.tokens[first + occ.span - 1];
            Correction c;
            c.offset = begin.offset;
            c.length = end.offset + end.length - begin.offset;
            c.written = text.substr(c.offset, c.length);
            c.suggested = match_case(c.written, set.member(predicted));
            c.line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + c.offset, '\n'));
            const auto line_start = text.rfind('\n', c.offset == 0 ? std::string::npos : c.offset - 1);
            c.column = c.offset - (line_start == std::string::npos ? 0 : line_start + 1) + 1;
            out.push_back(std::move(c));
        }
    }
    std::sort(out.begin(), out.end(), [](const Correction& x, const Correction& y) { return x.offset < y.offset; });
    return out;
}

std::string apply_corrections(const std::string& text, std::span<const Correction> corrections) {
    std::string out;
    std::size_t at = 0;
    for (const auto& c : corrections) {
        out.append(text, at, c.offset - at);
        out += c.suggested;
        at = c.offset + c.length;
    }
    out.append(text, at, std::string::npos);
    return out;
}

int cmd_correct(const CliConfig& config, std::istream& in, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        require_path(config.model, "--model");
        require_path(config.dictionary, "--dict");
        const auto models = load_models(config.model);
        const auto dictionary = TagDictionary::load(config.dictionary);
        std::string text;
        if (config.input.empty() || config.input == "-") {
            std::ostringstream buf;
            buf << in.rdbuf();
            text = buf.str();
        } else {
            text = read_file(config.input);
        }
        const auto corrections = find_corrections(text, models, dictionary, config.tokenize_options());
        std::ostringstream records;
        for (const auto& c : corrections) {
            records << c.line << '\t' << c.column << '\t' << c.written << '\t' << c.suggested << '\n';
        }
        if (config.apply) {
            err << records.str();
            emit(config, apply_corrections(text, corrections), out);
        } else {
            emit(config, records.str(), out);
        }
        return static_cast<int>(kOk);
    });
}

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
    CliConfig config;
    CLI::App app{"Context-sensitive spelling correction with WinnowS and Bayes.\n"
                 "Exit codes: 0 ok, 1 usage, 2 unreadable or malformed input, 3 no training data.",
                 "ctxspell"};
    app.require_subcommand(1);

    auto data_flags = [&](CLI::App* sub) {
        sub->add_option("--corpus", config.corpus, "Corpus A: a text file or a directory of text files");
        sub->add_option("--corpus-b", config.corpus_b, "Corpus B for the across, supunsup and sweep regimes");
        sub->add_option("--dict", config.dictionary, "Tag dictionary, one `word<TAB>tag,tag` per line");
        sub->add_option("--confusions", config.confusions, "Confusion sets, one `a|b` per line");
        sub->add_flag("--sentences-per-line", config.sentences_per_line, "Treat each input line as a sentence");
    };
    auto learner_flags = [&](CLI::App* sub) {
        sub->add_option("--algorithm", config.algorithm, "bayes, winnows or both")
            ->capture_default_str()
            ->check(CLI::IsMember({"bayes", "winnows", "both"}));
        sub->add_option("--pruning", config.pruning, "pruned, unpruned, or both (eval within only)")
            ->capture_default_str()
            ->check(CLI::IsMember({"pruned", "unpruned", "both"}));
        sub->add_option("--k", config.k, "Context-word window half-width")->capture_default_str();
        sub->add_option("--l", config.l, "Maximum collocation length")->capture_default_str();
        sub->add_option("--kappa", config.kappa, "Bayes interpolation constant")->capture_default_str();
        sub->add_option("--gamma-min", config.gamma_min, "Floor of the expert-penalty schedule")->capture_default_str();
        sub->add_option("--gamma-T", config.gamma_T, "Examples over which gamma decays to its floor")
            ->capture_default_str();
        sub->add_option("--epsilon", config.epsilon, "Attribute drop ratio")->capture_default_str();
        sub->add_option("--combiner", config.combiner, "Cloud comparison: percloud or raw")
            ->capture_default_str()
            ->check(CLI::IsMember({"percloud", "raw"}));
        sub->add_option("--seed", config.seed, "Random seed")->capture_default_str();
    };
    auto eval_flags = [&](CLI::App* sub) {
        sub->add_option("--train-fraction", config.train_fraction, "Share of corpus A used for training")
            ->capture_default_str();
        sub->add_option("--test-fraction", config.test_fraction, "Share of corpus B sampled for across tests")
            ->capture_default_str();
        sub->add_option("--unsup-fraction", config.unsup_fraction, "Share of corpus B used as unsupervised text")
            ->capture_default_str();
        sub->add_option("--percent", config.percent, "Corruption percentage for supunsup")->capture_default_str();
        sub->add_option("--percents", config.percents, "Corruption percentages for the sweep")
            ->delimiter(',')
            ->capture_default_str();
        sub->add_option("--out", config.out, "Write the report here instead of standard output");
        sub->add_flag("--latex", config.latex, "Emit a LaTeX tabular instead of TSV");
        sub->add_flag("--print-config", config.print_config, "Print every effective setting and exit");
    };

    auto* train = app.add_subcommand("train", "Train one model section per confusion set");
    data_flags(train);
    learner_flags(train);
    train->add_option("--model", config.model, "Model file to write");

    auto* eval = app.add_subcommand("eval", "Run an experimental regime and print a report");
    data_flags(eval);
    learner_flags(eval);
    eval_flags(eval);
    eval->add_option("--regime", config.regime, "within, across, supunsup, incremental or sweep")
        ->capture_default_str()
        ->check(CLI::IsMember({"within", "across", "supunsup", "incremental", "sweep"}));

    auto* sweep = app.add_subcommand("sweep", "Corruption sweep; same as eval --regime sweep");
    data_flags(sweep);
    learner_flags(sweep);
    eval_flags(sweep);

    auto* correct = app.add_subcommand("correct", "Flag and optionally fix confusion-set errors in a text");
    correct->add_option("input", config.input, "Text to check; - or nothing reads standard input");
    correct->add_option("--model", config.model, "Model file written by train");
    correct->add_option("--dict", config.dictionary, "Tag dictionary");
    correct->add_option("--out", config.out, "Write output here instead of standard output");
    correct->add_flag("--apply", config.apply, "Print the corrected text; records go to standard error");
    correct->add_flag("--sentences-per-line", config.sentences_per_line, "Treat each input line as a sentence");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    if (train->parsed()) {
        config.subcommand = "train";
        return cmd_train(config, out, err);
    }
    if (sweep->parsed()) {
        config.subcommand = "sweep";
        config.regime = "sweep";
        return cmd_eval(config, out, err);
    }
    if (eval->parsed()) {
        config.subcommand = "eval";
        return cmd_eval(config, out, err);
    }
    config.subcommand = "correct";
    return cmd_correct(config, in, out, err);
}

}  // namespace ctxspell::cli
