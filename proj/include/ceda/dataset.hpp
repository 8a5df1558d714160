#pragma once

// Columnar datasets and CSV input/output.

#include "ceda/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ceda {

struct Column {
    std::string name;
    std::variant<std::vector<double>, std::vector<std::string>> values;

    bool numeric() const noexcept { return std::holds_alternative<std::vector<double>>(values); }
    const std::vector<double>& reals() const { return std::get<std::vector<double>>(values); }
    const std::vector<std::string>& texts() const { return std::get<std::vector<std::string>>(values); }
    std::size_t size() const noexcept {
        return std::visit([](const auto& v) { return v.size(); }, values);
    }
};

class Dataset {
public:
    Dataset() = default;

    void add(std::string name, std::vector<double> values) { push(Column{std::move(name), std::move(values)}); }
    void add(std::string name, std::vector<std::string> values) {
        push(Column{std::move(name), std::move(values)});
    }

    std::size_t rows() const noexcept { return columns_.empty() ? 0 : columns_.front().size(); }
    std::size_t width() const noexcept { return columns_.size(); }
    const std::vector<Column>& columns() const noexcept { return columns_; }

    std::optional<std::size_t> find(std::string_view name) const noexcept {
        for (std::size_t j = 0; j < columns_.size(); ++j)
            if (columns_[j].name == name) return j;
        return std::nullopt;
    }

    const Column& column(std::string_view name) const {
        const auto j = find(name);
        if (!j) throw ConfigError("unknown column \"" + std::string(name) + "\"");
        return columns_[*j];
    }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (const auto& c : columns_) out.push_back(c.name);
        return out;
    }

private:
    void push(Column c) {
        detail::require_data(columns_.empty() || c.size() == rows(), "column \"" + c.name + "\" has wrong length");
        detail::require_data(!find(c.name), "duplicate column \"" + c.name + "\"");
        columns_.push_back(std::move(c));
    }

    std::vector<Column> columns_;
};

namespace detail {

/// Splits one CSV record; double quotes group fields and "" escapes a quote.
inline std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

inline std::optional<double> parse_real(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

inline std::string format_real(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace detail

/// Reads a CSV with a header row. Columns listed in `text_columns` are kept
/// verbatim; every other column must parse as a decimal number. Data rows are
/// numbered from 1 (the header is row 0) in error messages.
inline Dataset read_csv(std::istream& in, const std::vector<std::string>& text_columns = {}) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("CSV input is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    const auto header = detail::split_csv_line(line);

    std::vector<bool> is_text(header.size(), false);
    for (std::size_t j = 0; j < header.size(); ++j)
        for (const auto& t : text_columns) is_text[j] = is_text[j] || header[j] == t;

    std::vector<std::vector<double>> reals(header.size());
    std::vector<std::vector<std::string>> texts(header.size());
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        const auto cells = detail::split_csv_line(line);
        if (cells.size() != header.size())
            throw DataError("ragged CSV: row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                            " fields, header has " + std::to_string(header.size()));
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (is_text[j]) {
                texts[j].push_back(cells[j]);
                continue;
            }
            const auto v = detail::parse_real(cells[j]);
            if (!v)
                throw DataError("unparsable value \"" + cells[j] + "\" at row " + std::to_string(row) +
                                ", column \"" + header[j] + "\"");
            reals[j].push_back(*v);
        }
    }
    if (row == 0) throw DataError("CSV has a header but no data rows");

    Dataset ds;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (is_text[j])
            ds.add(header[j], std::move(texts[j]));
        else
            ds.add(header[j], std::move(reals[j]));
    }
    return ds;
}

inline Dataset read_csv_file(const std::string& path, const std::vector<std::string>& text_columns = {}) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open \"" + path + "\"");
    return read_csv(in, text_columns);
}

/// Writes shortest round-trip decimal representations, so read_csv(write_csv(d)) == d.
inline void write_csv(std::ostream& out, const Dataset& ds) {
    const auto& cols = ds.columns();
    for (std::size_t j = 0; j < cols.size(); ++j) out << (j ? "," : "") << cols[j].name;
    out << '\n';
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (j) out << ',';
            if (cols[j].numeric()) {
                out << detail::format_real(cols[j].reals()[i]);
            } else {
                const auto& s = cols[j].texts()[i];
                if (s.find_first_of(",\"") == std::string::npos) {
                    out << s;
                } else {
                    out << '"';
                    for (char ch : s) out << (ch == '"' ? "\"\"" : std::string(1, ch));
                    out << '"';
                }
            }
        }
        out << '\n';
    }
}

} // namespace ceda
