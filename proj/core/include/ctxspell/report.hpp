#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ctxspell {

// 100 * matches / total. Throws on empty or mismatched input.
double accuracy(std::span<const std::size_t> predictions, std::span<const std::size_t> gold);

// One decimal place, as in the published tables.
std::string format_percent(double percent);

enum class ColumnKind { Count, Percent, Number, Text };

struct Column {
    std::string group;  // e.g. "Pruned", "Bayes"; may be empty
    std::string name;   // e.g. "Features", "Sup only"
    ColumnKind kind = ColumnKind::Percent;

    std::string header() const { return group.empty() ? name : group + " " + name; }
};

struct Cell {
    std::optional<double> value;
    std::string text;

    static Cell number(double v) { return {v, {}}; }
    static Cell label(std::string s) { return {std::nullopt, std::move(s)}; }
};

struct ReportRow {
    std::string label;
    std::vector<Cell> cells;
    // Set for confusion sets that could not be evaluated.
    bool skipped = false;
    std::string reason;
};

// A table with a leading "Confusion set" column. Rows come out in the order
// they were added; harness code adds them sorted by confusion-set id.
struct EvalReport {
    std::string caption;
    std::vector<Column> columns;
    std::vector<ReportRow> rows;
    // Append a "Mean" row: counts summed, other numeric columns averaged over
    // evaluated rows.
    bool aggregate = true;

    void add_row(std::string label, std::vector<Cell> cells);
    void add_skipped(std::string label, std::string reason);

    const ReportRow* find(const std::string& label) const;
    std::optional<double> value(const std::string& label, const std::string& column_header) const;

    std::vector<std::string> headers() const;
    std::string to_tsv() const;
    std::string to_latex() const;

private:
    std::string render_cell(const Column& column, const Cell& cell) const;
    std::optional<ReportRow> mean_row() const;
};

}  // namespace ctxspell
