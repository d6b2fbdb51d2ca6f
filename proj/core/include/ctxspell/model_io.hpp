#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ctxspell/bayes.hpp"
#include "ctxspell/winnow.hpp"

namespace ctxspell {

class ModelFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using AnyModel = std::variant<bayes::Model, winnow::Model>;

const ConfusionSet& confusion_set_of(const AnyModel& model);
const ExtractionConfig& extraction_of(const AnyModel& model);
std::size_t classify(const AnyModel& model, std::span<const Feature> extracted);

// Line-oriented sections, one per confusion set, each closed by `end`.
// Doubles are written with 17 significant digits; features and weights in
// canonical feature order, so save -> load -> save is byte-identical.
void write_model(std::ostream& out, const bayes::Model& model);
void write_model(std::ostream& out, const winnow::Model& model);
void write_model(std::ostream& out, const AnyModel& model);
std::string serialize(const AnyModel& model);

std::vector<AnyModel> read_models(std::istream& in);
AnyModel parse_model(const std::string& text);

void save_models(const std::filesystem::path& path, std::span<const AnyModel> models);
std::vector<AnyModel> load_models(const std::filesystem::path& path);

// Round-trip text form of a double.
std::string format_double(double value);
double parse_double(std::string_view text);

}  // namespace ctxspell
