#include "ctxspell/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "ctxspell/model_io.hpp"

namespace ctxspell {

namespace {

constexpr const char* kSkipped = "skipped";

std::string latex_escape(const std::string& text) {
    std::string out;
    for (const char c : text) {
        switch (c) {
            case '&': case '%': case '$': case '#': case '_': case '{': case '}':
                out += '\\';
                out += c;
                break;
            case '~': out += "\\textasciitilde{}"; break;
            case '^': out += "\\textasciicircum{}"; break;
            case '\\': out += "\\textbackslash{}"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

double accuracy(std::span<const std::size_t> predictions, std::span<const std::size_t> gold) {
    if (predictions.empty()) throw std::invalid_argument("accuracy: no predictions");
    if (predictions.size() != gold.size()) throw std::invalid_argument("accuracy: length mismatch");
    std::size_t matches = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) matches += predictions[i] == gold[i];
    return 100.0 * static_cast<double>(matches) / static_cast<double>(predictions.size());
}

std::string format_percent(double percent) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", percent);
    return buf;
}

void EvalReport::add_row(std::string label, std::vector<Cell> cells) {
    if (cells.size() != columns.size()) throw std::logic_error("report row width mismatch");
    rows.push_back(ReportRow{std::move(label), std::move(cells), false, {}});
}

void EvalReport::add_skipped(std::string label, std::string reason) {
    std::vector<Cell> cells;
    for (const auto& c : columns) {
        cells.push_back(c.kind == ColumnKind::Count ? Cell::number(0) : Cell::label(kSkipped));
    }
    rows.push_back(ReportRow{std::move(label), std::move(cells), true, std::move(reason)});
}

const ReportRow* EvalReport::find(const std::string& label) const {
    for (const auto& r : rows) {
        if (r.label == label) return &r;
    }
    return nullptr;
}

std::optional<double> EvalReport::value(const std::string& label, const std::string& column_header) const {
    const auto* row = find(label);
    if (!row) return std::nullopt;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i].header() == column_header) return row->cells[i].value;
    }
    return std::nullopt;
}

std::vector<std::string> EvalReport::headers() const {
    std::vector<std::string> out{"Confusion set"};
    for (const auto& c : columns) out.push_back(c.header());
    return out;
}

std::string EvalReport::render_cell(const Column& column, const Cell& cell) const {
    if (!cell.value) return cell.text.empty() ? "-" : cell.text;
    switch (column.kind) {
        case ColumnKind::Count: return std::to_string(static_cast<long long>(std::llround(*cell.value)));
        case ColumnKind::Percent: return format_percent(*cell.value);
        case ColumnKind::Number: {
            if (*cell.value == std::floor(*cell.value) && std::abs(*cell.value) < 1e15) {
                return std::to_string(static_cast<long long>(*cell.value));
            }
            return format_double(*cell.value);
        }
        case ColumnKind::Text: return cell.text;
    }
    return {};
}

std::optional<ReportRow> EvalReport::mean_row() const {
    if (!aggregate) return std::nullopt;
    std::size_t evaluated = 0;
    for (const auto& r : rows) evaluated += !r.skipped;
    if (evaluated == 0) return std::nullopt;
    ReportRow mean{"Mean", {}, false, {}};
    for (std::size_t i = 0; i < columns.size(); ++i) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& r : rows) {
            if (r.skipped || !r.cells[i].value) continue;
            sum += *r.cells[i].value;
            ++n;
        }
        if (n == 0 || columns[i].kind == ColumnKind::Text || columns[i].kind == ColumnKind::Number) {
            mean.cells.push_back(Cell::label("-"));
        } else if (columns[i].kind == ColumnKind::Count) {
            mean.cells.push_back(Cell::number(sum));
        } else {
            mean.cells.push_back(Cell::number(sum / static_cast<double>(n)));
        }
    }
    return mean;
}

std::string EvalReport::to_tsv() const {
    std::ostringstream out;
    const auto head = headers();
    for (std::size_t i = 0; i < head.size(); ++i) out << (i ? "\t" : "") << head[i];
    out << '\n';
    auto emit = [&](const ReportRow& row) {
        out << row.label;
        for (std::size_t i = 0; i < columns.size(); ++i) out << '\t' << render_cell(columns[i], row.cells[i]);
        out << '\n';
    };
    for (const auto& r : rows) emit(r);
    if (const auto mean = mean_row()) emit(*mean);
    return out.str();
}

std::string EvalReport::to_latex() const {
    std::ostringstream out;
    out << "\\begin{tabular}{l";
    for (const auto& c : columns) out << (c.kind == ColumnKind::Text ? "l" : "r");
    out << "}\n\\hline\n";
    const auto head = headers();
    for (std::size_t i = 0; i < head.size(); ++i) out << (i ? " & " : "") << latex_escape(head[i]);
    out << " \\\\\n\\hline\n";
    auto emit = [&](const ReportRow& row) {
        out << latex_escape(row.label);
        for (std::size_t i = 0; i < columns.size(); ++i) {
            out << " & " << latex_escape(render_cell(columns[i], row.cells[i]));
        }
        out << " \\\\\n";
    };
    for (const auto& r : rows) emit(r);
    if (const auto mean = mean_row()) {
        out << "\\hline\n";
        emit(*mean);
    }
    out << "\\hline\n\\end{tabular}\n";
    if (!caption.empty()) out << "% " << caption << '\n';
    return out.str();
}

}  // namespace ctxspell
