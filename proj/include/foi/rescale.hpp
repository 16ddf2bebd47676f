#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "foi/data.hpp"
#include "foi/error.hpp"

namespace foi {

struct RescaleParams {
    double min = 0.0;
    double max = 0.0;
    Polarity polarity = Polarity::HigherIsBetter;
};

/// Affine map of a raw value onto [1, 7]; 7 is always the better end.
/// LowerIsBetter flips the direction. Inputs outside [min, max] clamp to
/// the endpoints. Throws DegenerateRange when the bounds collapse.
inline double minmax_recode(double x, const RescaleParams& params) {
    if (!(params.max > params.min))
        throw Error(ErrorCode::DegenerateRange, "max must exceed min");
    double span = params.max - params.min;
    double t = params.polarity == Polarity::HigherIsBetter ? (x - params.min) / span
                                                           : (params.max - x) / span;
    return std::clamp(1.0 + 6.0 * t, 1.0, 7.0);
}

/// Same shape as the source table, values recoded onto [1, 7]. `clamped`
/// records cells that fell outside caller-supplied bounds and were pulled
/// back into range.
struct RescaledTable {
    std::vector<std::string> countries;
    std::vector<IndicatorSpec> indicators;
    std::vector<Cell> cells; // row-major, countries x indicators
    std::vector<std::pair<std::size_t, std::size_t>> clamped;

    const Cell& cell(std::size_t country, std::size_t indicator) const {
        return cells[country * indicators.size() + indicator];
    }
    OptColumn column(std::size_t indicator) const {
        OptColumn col(countries.size());
        for (std::size_t i = 0; i < countries.size(); ++i) col[i] = cell(i, indicator);
        return col;
    }
};

/// Per-country composite index values on the 1-7 scale; a value is missing
/// when one of its component groups had no usable indicator.
struct FoiIndices {
    std::vector<std::string> countries;
    OptColumn f, o, i;

    const OptColumn& column(IndexKind kind) const {
        switch (kind) {
            case IndexKind::F: return f;
            case IndexKind::O: return o;
            case IndexKind::I: return i;
            default: throw Error(ErrorCode::InvalidArgument, "no column for IndexKind::None");
        }
    }
    OptColumn& column(IndexKind kind) {
        return const_cast<OptColumn&>(static_cast<const FoiIndices&>(*this).column(kind));
    }

    std::optional<std::size_t> country_index(std::string_view name) const {
        std::string key = normalize_label(name);
        for (std::size_t idx = 0; idx < countries.size(); ++idx)
            if (countries[idx] == key) return idx;
        return std::nullopt;
    }
};

/// Column-wise min-max recoding. Bounds default to the observed non-missing
/// extremes; `overrides` supplies fixed bounds per indicator id (values
/// outside them are clamped to the [1, 7] endpoints and reported).
inline RescaledTable recode_table(const IndicatorTable& table,
                                  const std::map<std::string, RescaleParams>& overrides = {}) {
    RescaledTable out;
    out.countries = table.countries();
    out.indicators = table.indicators();
    out.cells.assign(table.n_countries() * table.n_indicators(), std::nullopt);

    for (std::size_t j = 0; j < table.n_indicators(); ++j) {
        const IndicatorSpec& spec = table.indicators()[j];
        RescaleParams params;
        params.polarity = spec.polarity;
        auto it = overrides.find(spec.id);
        bool observed_bounds = it == overrides.end();
        if (observed_bounds) {
            bool any = false;
            for (std::size_t i = 0; i < table.n_countries(); ++i) {
                const Cell& c = table.cell(i, j);
                if (!c) continue;
                if (!any) {
                    params.min = params.max = *c;
                    any = true;
                } else {
                    params.min = std::min(params.min, *c);
                    params.max = std::max(params.max, *c);
                }
            }
        } else {
            params.min = it->second.min;
            params.max = it->second.max;
        }
        if (!(params.max > params.min))
            throw Error(ErrorCode::DegenerateRange, "column '" + spec.id + "' has max <= min");

        for (std::size_t i = 0; i < table.n_countries(); ++i) {
            const Cell& c = table.cell(i, j);
            if (!c) continue;
            if (!observed_bounds && (*c < params.min || *c > params.max))
                out.clamped.emplace_back(i, j);
            out.cells[i * out.indicators.size() + j] = minmax_recode(*c, params);
        }
    }
    return out;
}

/// Two-stage unweighted mean: indicators of one component group are
/// averaged first (missing members skipped), then the group values are
/// averaged into the index. A group whose members are all missing makes
/// the country's index missing.
inline FoiIndices aggregate_components(const RescaledTable& rescaled, IndexKind kind) {
    if (kind == IndexKind::None)
        throw Error(ErrorCode::InvalidArgument, "cannot aggregate IndexKind::None");

    std::map<int, std::vector<std::size_t>> groups;
    for (std::size_t j = 0; j < rescaled.indicators.size(); ++j)
        if (rescaled.indicators[j].index == kind)
            groups[rescaled.indicators[j].component_group].push_back(j);
    if (groups.empty())
        throw Error(ErrorCode::NoIndicatorsForIndex,
                    std::string("no indicators assigned to index ") + to_string(kind));

    FoiIndices out;
    out.countries = rescaled.countries;
    std::size_t n = rescaled.countries.size();
    out.f.assign(n, std::nullopt);
    out.o.assign(n, std::nullopt);
    out.i.assign(n, std::nullopt);
    OptColumn& target = out.column(kind);

    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        bool complete = true;
        for (const auto& [group, members] : groups) {
            double group_sum = 0.0;
            int group_n = 0;
            for (std::size_t j : members) {
                const Cell& c = rescaled.cell(i, j);
                if (c) {
                    group_sum += *c;
                    ++group_n;
                }
            }
            if (group_n == 0) {
                complete = false;
                break;
            }
            sum += group_sum / group_n;
        }
        if (complete) target[i] = sum / static_cast<double>(groups.size());
    }
    return out;
}

/// recode_table followed by aggregation of all three indices.
inline FoiIndices compute_foi_indices(const IndicatorTable& table,
                                      const std::map<std::string, RescaleParams>& overrides = {}) {
    RescaledTable rescaled = recode_table(table, overrides);
    FoiIndices out = aggregate_components(rescaled, IndexKind::F);
    out.o = aggregate_components(rescaled, IndexKind::O).o;
    out.i = aggregate_components(rescaled, IndexKind::I).i;
    return out;
}

} // namespace foi
