#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "foi/data.hpp"
#include "foi/error.hpp"
#include "foi/matrix.hpp"
#include "foi/student_t.hpp"

namespace foi {

enum class MissingPolicy { PairwiseComplete, ListwiseComplete };

/// Sample Pearson correlation of two complete vectors.
inline double pearson_r(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw Error(ErrorCode::InvalidArgument, "pearson_r requires equal-length vectors");
    std::size_t n = x.size();
    if (n < 3) throw Error(ErrorCode::TooFewPairs, "need at least 3 pairs");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx;
        double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw Error(ErrorCode::ZeroVariance, "constant input vector");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

struct PairwiseR {
    double r = 0.0;
    int n = 0;
};

/// Pearson correlation after pairwise deletion of entries missing in
/// either column.
inline PairwiseR pearson_r_pairwise(const OptColumn& x, const OptColumn& y) {
    if (x.size() != y.size())
        throw Error(ErrorCode::InvalidArgument, "columns must have equal length");
    std::vector<double> xs, ys;
    xs.reserve(x.size());
    ys.reserve(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] && y[i]) {
            xs.push_back(*x[i]);
            ys.push_back(*y[i]);
        }
    }
    return {pearson_r(xs, ys), static_cast<int>(xs.size())};
}

/// Two-tailed p-value of an observed correlation r over n samples, from
/// t = r*sqrt((n-2)/(1-r^2)) against Student's t with n-2 df.
inline double corr_p_value(double r, int n) {
    if (n < 3) throw Error(ErrorCode::InvalidN, "need n >= 3");
    if (std::abs(r) > 1.0) throw Error(ErrorCode::InvalidArgument, "|r| must be <= 1");
    if (std::abs(r) == 1.0) return 0.0;
    double df = static_cast<double>(n - 2);
    double t = r * std::sqrt(df / (1.0 - r * r));
    return student_t_two_tailed(t, df);
}

struct ScreenEntry {
    std::string id;
    std::optional<double> r;
    std::optional<double> p_value;
    int n = 0;
    bool selected = false;
    std::string reason; // set when the correlation could not be computed
};

struct ScreenResult {
    double alpha = 0.05;
    std::vector<ScreenEntry> entries;

    std::vector<std::string> selected_ids() const {
        std::vector<std::string> out;
        for (const auto& e : entries)
            if (e.selected) out.push_back(e.id);
        return out;
    }
};

/// Correlates every variable with the target (pairwise-complete samples)
/// and keeps those significant at `alpha`. Variables whose correlation is
/// not computable are reported unselected with the reason.
inline ScreenResult screen_variables(const std::vector<OptColumn>& variables,
                                     const std::vector<std::string>& ids, const OptColumn& target,
                                     double alpha = 0.05) {
    if (variables.size() != ids.size())
        throw Error(ErrorCode::InvalidArgument, "one id per variable required");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");

    ScreenResult result;
    result.alpha = alpha;
    result.entries.reserve(variables.size());
    for (std::size_t v = 0; v < variables.size(); ++v) {
        ScreenEntry entry;
        entry.id = ids[v];
        try {
            PairwiseR pr = pearson_r_pairwise(variables[v], target);
            entry.r = pr.r;
            entry.n = pr.n;
            entry.p_value = corr_p_value(pr.r, pr.n);
            entry.selected = *entry.p_value <= alpha;
        } catch (const Error& e) {
            entry.reason = error_code_name(e.code());
            entry.selected = false;
        }
        result.entries.push_back(std::move(entry));
    }
    return result;
}

/// Symmetric Pearson correlation matrix with per-pair sample sizes.
struct CorrelationMatrix {
    std::vector<std::string> labels;
    Matrix r;
    std::vector<int> n_used; // row-major p x p

    std::size_t size() const { return labels.size(); }
    int pair_n(std::size_t i, std::size_t j) const { return n_used[i * labels.size() + j]; }
};

inline CorrelationMatrix correlation_matrix(const std::vector<OptColumn>& variables,
                                            const std::vector<std::string>& ids,
                                            MissingPolicy policy = MissingPolicy::PairwiseComplete) {
    if (variables.size() != ids.size())
        throw Error(ErrorCode::InvalidArgument, "one id per variable required");
    std::size_t p = variables.size();
    if (p == 0) throw Error(ErrorCode::InvalidArgument, "empty variable set");
    std::size_t n_rows = variables.front().size();
    for (const auto& col : variables)
        if (col.size() != n_rows)
            throw Error(ErrorCode::InvalidArgument, "all variables must have equal length");

    // Listwise: restrict every column to rows complete across the whole set.
    std::vector<OptColumn> cols = variables;
    if (policy == MissingPolicy::ListwiseComplete) {
        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < n_rows; ++i) {
            bool complete = true;
            for (const auto& col : cols)
                if (!col[i]) {
                    complete = false;
                    break;
                }
            if (complete) keep.push_back(i);
        }
        for (auto& col : cols) {
            OptColumn reduced(keep.size());
            for (std::size_t k = 0; k < keep.size(); ++k) reduced[k] = col[keep[k]];
            col = std::move(reduced);
        }
    }

    CorrelationMatrix out;
    out.labels = ids;
    out.r = Matrix(p, p);
    out.n_used.assign(p * p, 0);
    for (std::size_t i = 0; i < p; ++i) {
        out.r(i, i) = 1.0;
        int nii = 0;
        for (const Cell& c : cols[i])
            if (c) ++nii;
        out.n_used[i * p + i] = nii;
        for (std::size_t j = i + 1; j < p; ++j) {
            PairwiseR pr;
            try {
                pr = pearson_r_pairwise(cols[i], cols[j]);
            } catch (const Error& e) {
                throw Error(e.code(), "pair ('" + ids[i] + "', '" + ids[j] + "'): " + e.what());
            }
            out.r(i, j) = out.r(j, i) = pr.r;
            out.n_used[i * p + j] = out.n_used[j * p + i] = pr.n;
        }
    }
    return out;
}

} // namespace foi
