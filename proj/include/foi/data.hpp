#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "foi/csv.hpp"
#include "foi/error.hpp"
#include "foi/text.hpp"

namespace foi {

using Cell = std::optional<double>;
using OptColumn = std::vector<Cell>;

enum class Polarity { HigherIsBetter, LowerIsBetter };
enum class IndexKind { F, O, I, None };

inline const char* to_string(Polarity p) {
    return p == Polarity::HigherIsBetter ? "HigherIsBetter" : "LowerIsBetter";
}

inline const char* to_string(IndexKind k) {
    switch (k) {
        case IndexKind::F: return "F";
        case IndexKind::O: return "O";
        case IndexKind::I: return "I";
        case IndexKind::None: return "None";
    }
    return "None";
}

inline Polarity polarity_from_string(std::string_view s) {
    if (s == "HigherIsBetter") return Polarity::HigherIsBetter;
    if (s == "LowerIsBetter") return Polarity::LowerIsBetter;
    throw Error(ErrorCode::InvalidIndicatorSpec, "unknown polarity '" + std::string(s) + "'");
}

inline IndexKind index_from_string(std::string_view s) {
    if (s == "F") return IndexKind::F;
    if (s == "O") return IndexKind::O;
    if (s == "I") return IndexKind::I;
    if (s == "None" || s.empty()) return IndexKind::None;
    throw Error(ErrorCode::InvalidIndicatorSpec, "unknown index '" + std::string(s) + "'");
}

/// Per-indicator metadata. Indicators assigned to an index belong to a
/// numbered component group; groups are averaged first, then the groups
/// themselves are averaged into the index.
struct IndicatorSpec {
    std::string id;
    std::string label;
    Polarity polarity = Polarity::HigherIsBetter;
    IndexKind index = IndexKind::None;
    int component_group = 0;
    std::string source_tag;
};

/// Country x indicator matrix of optional values, immutable after
/// construction. Construction validates shape, country uniqueness and
/// per-column support (at least 2 non-missing values).
class IndicatorTable {
public:
    IndicatorTable(std::vector<std::string> countries, std::vector<IndicatorSpec> indicators,
                   std::vector<Cell> cells)
        : countries_(std::move(countries)), indicators_(std::move(indicators)), cells_(std::move(cells)) {
        if (cells_.size() != countries_.size() * indicators_.size())
            throw Error(ErrorCode::InvalidArgument, "cell matrix does not match country/indicator lists");
        std::set<std::string> seen;
        for (auto& c : countries_) {
            c = normalize_label(c);
            if (!seen.insert(c).second)
                throw Error(ErrorCode::DuplicateCountry, "duplicate country '" + c + "'");
        }
        for (const auto& spec : indicators_) {
            if (spec.id.empty())
                throw Error(ErrorCode::InvalidIndicatorSpec, "indicator with empty id");
            if (spec.index != IndexKind::None && spec.component_group < 1)
                throw Error(ErrorCode::InvalidIndicatorSpec,
                            "indicator '" + spec.id + "' is assigned to an index but has component_group < 1");
        }
        for (std::size_t j = 0; j < indicators_.size(); ++j) {
            int present = 0;
            for (std::size_t i = 0; i < countries_.size(); ++i)
                if (cell(i, j)) ++present;
            if (present < 2)
                throw Error(ErrorCode::ColumnTooSparse,
                            "column '" + indicators_[j].id + "' has fewer than 2 non-missing values");
        }
    }

    const std::vector<std::string>& countries() const { return countries_; }
    const std::vector<IndicatorSpec>& indicators() const { return indicators_; }

    std::size_t n_countries() const { return countries_.size(); }
    std::size_t n_indicators() const { return indicators_.size(); }

    const Cell& cell(std::size_t country, std::size_t indicator) const {
        return cells_[country * indicators_.size() + indicator];
    }

    OptColumn column(std::size_t indicator) const {
        OptColumn col(countries_.size());
        for (std::size_t i = 0; i < countries_.size(); ++i) col[i] = cell(i, indicator);
        return col;
    }

    std::optional<std::size_t> indicator_index(std::string_view id) const {
        for (std::size_t j = 0; j < indicators_.size(); ++j)
            if (indicators_[j].id == id) return j;
        return std::nullopt;
    }

    std::optional<std::size_t> country_index(std::string_view name) const {
        std::string key = normalize_label(name);
        for (std::size_t i = 0; i < countries_.size(); ++i)
            if (countries_[i] == key) return i;
        return std::nullopt;
    }

private:
    std::vector<std::string> countries_;
    std::vector<IndicatorSpec> indicators_;
    std::vector<Cell> cells_;
};

struct ColumnStats {
    std::string id;
    int missing = 0;
    std::optional<double> min;
    std::optional<double> max;
    bool constant = false;
};

struct ValidationReport {
    std::vector<ColumnStats> columns;
    std::vector<int> country_missing;                 // aligned with table.countries()
    std::vector<std::pair<std::size_t, std::size_t>> missing_cells; // (country, indicator)
};

inline ValidationReport validate_table(const IndicatorTable& table) {
    ValidationReport report;
    report.country_missing.assign(table.n_countries(), 0);
    report.columns.reserve(table.n_indicators());
    for (std::size_t j = 0; j < table.n_indicators(); ++j) {
        ColumnStats stats;
        stats.id = table.indicators()[j].id;
        for (std::size_t i = 0; i < table.n_countries(); ++i) {
            const Cell& c = table.cell(i, j);
            if (!c) {
                ++stats.missing;
                ++report.country_missing[i];
                report.missing_cells.emplace_back(i, j);
                continue;
            }
            if (!stats.min || *c < *stats.min) stats.min = *c;
            if (!stats.max || *c > *stats.max) stats.max = *c;
        }
        stats.constant = stats.min && stats.max && *stats.min == *stats.max;
        report.columns.push_back(std::move(stats));
    }
    return report;
}

namespace detail {

inline bool is_missing_token(std::string_view s) {
    return s.empty() || s == "NA" || s == "n/a";
}

inline Cell parse_cell(std::string_view raw, std::size_t row, const std::string& column_id) {
    std::string s = trim(raw);
    if (is_missing_token(s)) return std::nullopt;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw Error(ErrorCode::NonNumericCell, "row " + std::to_string(row + 1) + ", column '" + column_id +
                                                   "': cannot parse '" + s + "'");
    return value;
}

// Shortest round-trip decimal form, so a written table reloads bit-exact.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

} // namespace detail

inline std::vector<IndicatorSpec> load_indicator_specs(const std::filesystem::path& spec_path) {
    std::ifstream in(spec_path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open spec file " + spec_path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidIndicatorSpec, "spec file is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.is_array())
        throw Error(ErrorCode::InvalidIndicatorSpec, "spec file must be a JSON array");
    std::vector<IndicatorSpec> specs;
    specs.reserve(doc.size());
    for (const auto& item : doc) {
        IndicatorSpec spec;
        if (!item.contains("id") || !item.contains("polarity"))
            throw Error(ErrorCode::InvalidIndicatorSpec, "spec entries need at least 'id' and 'polarity'");
        spec.id = item.at("id").get<std::string>();
        spec.label = item.value("label", spec.id);
        spec.polarity = polarity_from_string(item.at("polarity").get<std::string>());
        spec.index = index_from_string(item.value("index", "None"));
        spec.component_group = item.value("component_group", 0);
        spec.source_tag = item.value("source_tag", "");
        specs.push_back(std::move(spec));
    }
    return specs;
}

/// Loads a values CSV (header `country,<ids...>`) plus its JSON metadata
/// sidecar. Empty cells, "NA" and "n/a" parse as missing.
inline IndicatorTable load_indicator_table(const std::filesystem::path& path,
                                           const std::filesystem::path& spec_path) {
    std::vector<IndicatorSpec> all_specs = load_indicator_specs(spec_path);

    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open data file " + path.string());
    auto rows = read_csv(in);
    if (rows.empty()) throw Error(ErrorCode::IoError, "empty CSV " + path.string());

    const auto& header = rows.front();
    if (header.empty() || trim(header.front()) != "country")
        throw Error(ErrorCode::IoError, "first CSV column must be 'country'");

    std::vector<IndicatorSpec> specs;
    specs.reserve(header.size() - 1);
    for (std::size_t j = 1; j < header.size(); ++j) {
        std::string id = trim(header[j]);
        auto it = std::find_if(all_specs.begin(), all_specs.end(),
                               [&](const IndicatorSpec& s) { return s.id == id; });
        if (it == all_specs.end())
            throw Error(ErrorCode::UnknownIndicatorColumn, "CSV column '" + id + "' is not in the spec file");
        specs.push_back(*it);
    }

    std::vector<std::string> countries;
    std::vector<Cell> cells;
    countries.reserve(rows.size() - 1);
    cells.reserve((rows.size() - 1) * specs.size());
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() == 1 && trim(row[0]).empty()) continue; // trailing blank line
        if (row.size() != header.size())
            throw Error(ErrorCode::IoError, "row " + std::to_string(r + 1) + " has " +
                                                std::to_string(row.size()) + " fields, expected " +
                                                std::to_string(header.size()));
        countries.push_back(row[0]);
        for (std::size_t j = 1; j < row.size(); ++j)
            cells.push_back(detail::parse_cell(row[j], r, specs[j - 1].id));
    }

    return IndicatorTable(std::move(countries), std::move(specs), std::move(cells));
}

inline void save_indicator_specs(const std::vector<IndicatorSpec>& specs,
                                 const std::filesystem::path& spec_path) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& s : specs) {
        doc.push_back({{"id", s.id},
                       {"label", s.label},
                       {"polarity", to_string(s.polarity)},
                       {"index", to_string(s.index)},
                       {"component_group", s.component_group},
                       {"source_tag", s.source_tag}});
    }
    std::ofstream out(spec_path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + spec_path.string());
    out << doc.dump(2) << '\n';
}

inline void save_indicator_table(const IndicatorTable& table, const std::filesystem::path& path,
                                 const std::filesystem::path& spec_path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    std::vector<std::string> header{"country"};
    for (const auto& spec : table.indicators()) header.push_back(spec.id);
    write_csv_row(out, header);
    for (std::size_t i = 0; i < table.n_countries(); ++i) {
        std::vector<std::string> row{table.countries()[i]};
        for (std::size_t j = 0; j < table.n_indicators(); ++j) {
            const Cell& c = table.cell(i, j);
            row.push_back(c ? detail::format_double(*c) : std::string());
        }
        write_csv_row(out, row);
    }
    save_indicator_specs(table.indicators(), spec_path);
}

} // namespace foi
