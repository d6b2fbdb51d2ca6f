#include "ctxspell/model_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace ctxspell {

namespace {

constexpr std::string_view kVersion = "1";

std::vector<std::string_view> split_view(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto end = s.find(sep, start);
        parts.push_back(s.substr(start, end - start));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return parts;
}

std::uint64_t parse_uint(std::string_view text) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ModelFormatError("expected an unsigned integer, got '" + std::string(text) + "'");
    }
    return value;
}

int parse_int(std::string_view text) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ModelFormatError("expected an integer, got '" + std::string(text) + "'");
    }
    return value;
}

template <typename T, typename F>
std::string join(const std::vector<T>& values, F&& format) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format(values[i]);
    }
    return out;
}

std::vector<std::uint64_t> parse_uint_list(std::string_view text) {
    std::vector<std::uint64_t> out;
    for (auto part : split_view(text, ',')) out.push_back(parse_uint(part));
    return out;
}

// Splits "<feature dump><TAB><value>" at the last tab.
std::pair<Feature, std::string_view> split_feature_value(std::string_view line) {
    const auto tab = line.rfind('\t');
    if (tab == std::string_view::npos) throw ModelFormatError("malformed feature line");
    try {
        return {parse_feature(line.substr(0, tab)), line.substr(tab + 1)};
    } catch (const std::invalid_argument& e) {
        throw ModelFormatError(e.what());
    }
}

class SectionReader {
public:
    explicit SectionReader(std::istream& in) : in_(in) {}

    bool next(std::string& line) {
        while (std::getline(in_, line)) {
            ++line_no_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw ModelFormatError("model file line " + std::to_string(line_no_) + ": " + message);
    }

private:
    std::istream& in_;
    std::size_t line_no_ = 0;
};

using Header = std::map<std::string, std::string, std::less<>>;

const std::string& require(const Header& header, std::string_view key, const SectionReader& reader) {
    const auto it = header.find(key);
    if (it == header.end()) reader.fail("missing header key '" + std::string(key) + "'");
    return it->second;
}

ExtractionConfig read_extraction(const Header& h, const SectionReader& r) {
    ExtractionConfig config;
    config.k = parse_int(require(h, "k", r));
    config.l = parse_int(require(h, "l", r));
    return config;
}

bayes::Model read_bayes(const Header& h, SectionReader& reader, std::string& line) {
    const auto set = ConfusionSet::parse(require(h, "confusion", reader));
    bayes::Config config;
    config.kappa = parse_double(require(h, "kappa", reader));
    config.resolve_dependencies = require(h, "dependencies", reader) == "on";
    const auto totals = parse_uint_list(require(h, "counts", reader));
    if (totals.size() != set.size()) reader.fail("counts do not match the confusion set");
    const auto expected = parse_uint(require(h, "features", reader));

    FeatureStats stats(set.size());
    for (std::size_t m = 0; m < set.size(); ++m) stats.set_member_total(m, totals[m]);
    std::uint64_t seen = 0;
    while (line != "end") {
        auto [feature, value] = split_feature_value(line);
        const auto counts = parse_uint_list(value);
        if (counts.size() != set.size()) reader.fail("feature counts do not match the confusion set");
        stats.set_counts(feature, counts);
        ++seen;
        if (!reader.next(line)) reader.fail("unterminated section");
    }
    if (seen != expected) reader.fail("feature count does not match the header");
    return bayes::Model(set, std::move(stats), config, read_extraction(h, reader));
}

winnow::Model read_winnow(const Header& h, SectionReader& reader, std::string& line) {
    const auto set = ConfusionSet::parse(require(h, "confusion", reader));
    winnow::Params params;
    params.theta = parse_double(require(h, "theta", reader));
    params.alpha = parse_double(require(h, "alpha", reader));
    params.epsilon = parse_double(require(h, "epsilon", reader));
    params.schedule.gamma_min = parse_double(require(h, "gamma_min", reader));
    params.schedule.horizon = parse_double(require(h, "gamma_T", reader));
    params.betas.clear();
    for (auto b : split_view(require(h, "betas", reader), ',')) params.betas.push_back(parse_double(b));
    if (const auto it = h.find("combine"); it != h.end()) {
        if (it->second == "raw") {
            params.combiner = winnow::Combiner::Raw;
        } else if (it->second != "percloud") {
            reader.fail("unknown combine value '" + it->second + "'");
        }
    }

    winnow::Model model(set, params, read_extraction(h, reader));
    const auto member_seen = parse_uint_list(require(h, "seen", reader));
    model.restore_counters(parse_uint(require(h, "t", reader)), member_seen);

    winnow::Cloud* cloud = nullptr;
    winnow::Node* node = nullptr;
    std::size_t next_node = 0;
    while (line != "end") {
        if (line.starts_with("cloud ")) {
            const auto member = parse_uint(std::string_view(line).substr(6));
            if (member >= set.size()) reader.fail("cloud member out of range");
            cloud = &model.cloud(member);
            node = nullptr;
            next_node = 0;
        } else if (line.starts_with("node ")) {
            if (!cloud || next_node >= cloud->nodes.size()) reader.fail("unexpected node line");
            std::map<std::string, std::string, std::less<>> fields;
            for (auto part : split_view(std::string_view(line).substr(5), ' ')) {
                const auto eq = part.find('=');
                if (eq == std::string_view::npos) reader.fail("malformed node field");
                fields.emplace(std::string(part.substr(0, eq)), std::string(part.substr(eq + 1)));
            }
            auto field = [&](std::string_view key) -> const std::string& {
                const auto it = fields.find(key);
                if (it == fields.end()) reader.fail("node line lacks '" + std::string(key) + "'");
                return it->second;
            };
            const std::size_t j = next_node++;
            node = &cloud->nodes[j];
            if (parse_double(field("beta")) != node->beta()) reader.fail("node beta does not match header");
            cloud->expert_weights[j] = parse_double(field("v"));
            cloud->mistakes[j] = parse_uint(field("m"));
            node->restore_counters(parse_uint(field("seen")), parse_double(field("d")),
                                   parse_uint(field("sweep")));
        } else if (line.starts_with("w\t")) {
            if (!node) reader.fail("weight line outside a node");
            auto [feature, value] = split_feature_value(std::string_view(line).substr(2));
            const double w = parse_double(value);
            if (!(w > 0.0)) reader.fail("stored weights must be positive");
            node->set_weight(model.intern(feature), w);
        } else {
            reader.fail("unexpected line '" + line + "'");
        }
        if (!reader.next(line)) reader.fail("unterminated section");
    }
    return model;
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ModelFormatError("expected a number, got '" + std::string(text) + "'");
    }
    return value;
}

const ConfusionSet& confusion_set_of(const AnyModel& model) {
    return std::visit([](const auto& m) -> const ConfusionSet& { return m.confusion_set(); }, model);
}

const ExtractionConfig& extraction_of(const AnyModel& model) {
    return std::visit([](const auto& m) -> const ExtractionConfig& { return m.extraction(); }, model);
}

std::size_t classify(const AnyModel& model, std::span<const Feature> extracted) {
    return std::visit([&](const auto& m) { return m.classify(extracted); }, model);
}

void write_model(std::ostream& out, const bayes::Model& model) {
    const auto& set = model.confusion_set();
    const auto& stats = model.features();
    std::vector<double> priors(set.size());
    for (std::size_t m = 0; m < set.size(); ++m) priors[m] = model.prior(m);

    out << "version=" << kVersion << '\n'
        << "algorithm=bayes\n"
        << "confusion=" << set.joined() << '\n'
        << "k=" << model.extraction().k << '\n'
        << "l=" << model.extraction().l << '\n'
        << "kappa=" << format_double(model.config().kappa) << '\n'
        << "dependencies=" << (model.config().resolve_dependencies ? "on" : "off") << '\n'
        << "counts=" << join(stats.member_totals(), [](auto v) { return std::to_string(v); }) << '\n'
        << "priors=" << join(priors, format_double) << '\n'
        << "features=" << stats.feature_count() << '\n';
    for (const FeatureId id : stats.sorted_ids()) {
        out << dump_feature(stats.feature(id)) << '\t';
        const auto counts = stats.counts(id);
        for (std::size_t m = 0; m < counts.size(); ++m) out << (m ? "," : "") << counts[m];
        out << '\n';
    }
    out << "end\n";
}

void write_model(std::ostream& out, const winnow::Model& model) {
    const auto& set = model.confusion_set();
    const auto& p = model.params();
    std::vector<std::uint64_t> seen(set.size());
    for (std::size_t m = 0; m < set.size(); ++m) seen[m] = model.member_seen(m);

    out << "version=" << kVersion << '\n'
        << "algorithm=winnows\n"
        << "confusion=" << set.joined() << '\n'
        << "k=" << model.extraction().k << '\n'
        << "l=" << model.extraction().l << '\n'
        << "gamma_min=" << format_double(p.schedule.gamma_min) << '\n'
        << "gamma_T=" << format_double(p.schedule.horizon) << '\n'
        << "epsilon=" << format_double(p.epsilon) << '\n'
        << "theta=" << format_double(p.theta) << '\n'
        << "alpha=" << format_double(p.alpha) << '\n'
        << "betas=" << join(p.betas, format_double) << '\n'
        << "combine=" << (p.combiner == winnow::Combiner::Raw ? "raw" : "percloud") << '\n'
        << "t=" << model.examples_seen() << '\n'
        << "seen=" << join(seen, [](auto v) { return std::to_string(v); }) << '\n';

    const auto& index = model.index();
    for (const auto& cloud : model.clouds()) {
        out << "cloud " << cloud.member << '\n';
        for (std::size_t j = 0; j < cloud.nodes.size(); ++j) {
            const auto& node = cloud.nodes[j];
            out << "node beta=" << format_double(node.beta())
                << " v=" << format_double(cloud.expert_weights[j])
                << " m=" << cloud.mistakes[j]
                << " seen=" << node.seen_examples()
                << " d=" << format_double(node.d_estimate())
                << " sweep=" << node.updates_since_sweep() << '\n';
            auto ids = node.stored_ids();
            std::sort(ids.begin(), ids.end(),
                      [&](FeatureId a, FeatureId b) { return index.at(a) < index.at(b); });
            for (const FeatureId id : ids) {
                out << "w\t" << dump_feature(index.at(id)) << '\t' << format_double(node.weight(id)) << '\n';
            }
        }
    }
    out << "end\n";
}

void write_model(std::ostream& out, const AnyModel& model) {
    std::visit([&](const auto& m) { write_model(out, m); }, model);
}

std::string serialize(const AnyModel& model) {
    std::ostringstream out;
    write_model(out, model);
    return out.str();
}

std::vector<AnyModel> read_models(std::istream& in) {
    std::vector<AnyModel> models;
    SectionReader reader(in);
    std::string line;
    while (reader.next(line)) {
        Header header;
        while (line != "end" && !line.starts_with("cloud ") && !line.starts_with("CW\t") &&
               !line.starts_with("COLL\t")) {
            const auto eq = line.find('=');
            if (eq == std::string::npos) reader.fail("expected key=value, got '" + line + "'");
            header[line.substr(0, eq)] = line.substr(eq + 1);
            if (!reader.next(line)) reader.fail("unterminated section");
        }
        if (require(header, "version", reader) != kVersion) reader.fail("unsupported model version");
        const auto& algorithm = require(header, "algorithm", reader);
        try {
            if (algorithm == "bayes") {
                models.emplace_back(read_bayes(header, reader, line));
            } else if (algorithm == "winnows") {
                models.emplace_back(read_winnow(header, reader, line));
            } else {
                reader.fail("unknown algorithm '" + algorithm + "'");
            }
        } catch (const std::invalid_argument& e) {
            reader.fail(e.what());
        }
    }
    return models;
}

AnyModel parse_model(const std::string& text) {
    std::istringstream in(text);
    auto models = read_models(in);
    if (models.size() != 1) throw ModelFormatError("expected exactly one model section");
    return std::move(models.front());
}

void save_models(const std::filesystem::path& path, std::span<const AnyModel> models) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write model file: " + path.string());
    for (const auto& m : models) write_model(out, m);
    if (!out) throw IoError("failed writing model file: " + path.string());
}

std::vector<AnyModel> load_models(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model file: " + path.string());
    return read_models(in);
}

}  // namespace ctxspell
