#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "foi/correlation.hpp"
#include "foi/data.hpp"
#include "foi/eigen.hpp"
#include "foi/error.hpp"
#include "foi/matrix.hpp"

namespace foi {

namespace detail {

// Largest-magnitude entry of every column made positive; ties go to the
// first such entry. `companion` columns (the rotation matrix, score
// weights) are flipped in step.
inline void canonicalize_column_signs(Matrix& loadings, Matrix* companion = nullptr) {
    for (std::size_t j = 0; j < loadings.cols(); ++j) {
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < loadings.rows(); ++i) {
            double mag = std::abs(loadings(i, j));
            if (mag > best) {
                best = mag;
                arg = i;
            }
        }
        if (loadings(arg, j) < 0.0) {
            for (std::size_t i = 0; i < loadings.rows(); ++i) loadings(i, j) = -loadings(i, j);
            if (companion)
                for (std::size_t i = 0; i < companion->rows(); ++i)
                    (*companion)(i, j) = -(*companion)(i, j);
        }
    }
}

struct SymmetricInverse {
    Matrix inverse;
    double condition = 0.0;
};

// Inverse through the eigendecomposition; refuses matrices whose spectral
// condition estimate exceeds 1e12 rather than regularizing silently.
inline SymmetricInverse invert_symmetric(const Matrix& a) {
    EigenDecomposition eig = eig_sym(a);
    double lambda_max = eig.values.front();
    double lambda_min = eig.values.back();
    if (lambda_min <= 0.0 || lambda_max / lambda_min > 1e12)
        throw Error(ErrorCode::SingularMatrix, "matrix is singular or near-singular");

    std::size_t n = a.rows();
    Matrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                s += eig.vectors(i, k) * eig.vectors(j, k) / eig.values[k];
            inv(i, j) = inv(j, i) = s;
        }
    return {std::move(inv), lambda_max / lambda_min};
}

} // namespace detail

/// Principal-component loadings: column j is sqrt(lambda_j) * v_j for the
/// j-th largest eigenpair of the correlation matrix. Mild negative
/// eigenvalues (> -1e-8) are clipped to zero.
inline Matrix extract_principal_factors(const CorrelationMatrix& r, int m) {
    std::size_t p = r.size();
    if (m < 1 || static_cast<std::size_t>(m) > p)
        throw Error(ErrorCode::InvalidArgument, "factor count must lie in [1, p]");

    EigenDecomposition eig = eig_sym(r.r);
    for (double& lambda : eig.values) {
        if (lambda < 0.0) {
            if (lambda < -1e-8)
                throw Error(ErrorCode::NotPositiveSemiDefinite,
                            "correlation matrix has eigenvalue " + std::to_string(lambda));
            lambda = 0.0;
        }
    }

    Matrix loadings(p, static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        double scale = std::sqrt(eig.values[j]);
        for (std::size_t i = 0; i < p; ++i) loadings(i, j) = scale * eig.vectors(i, j);
    }
    detail::canonicalize_column_signs(loadings);
    return loadings;
}

/// Varimax criterion: per-factor variance of squared loadings, summed.
inline double varimax_criterion(const Matrix& loadings) {
    std::size_t p = loadings.rows();
    double total = 0.0;
    for (std::size_t j = 0; j < loadings.cols(); ++j) {
        double s2 = 0.0, s4 = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
            double sq = loadings(i, j) * loadings(i, j);
            s2 += sq;
            s4 += sq * sq;
        }
        double mean_sq = s2 / static_cast<double>(p);
        total += s4 / static_cast<double>(p) - mean_sq * mean_sq;
    }
    return total;
}

struct VarimaxResult {
    Matrix loadings;
    Matrix rotation; // accumulated orthogonal m x m rotation
    int sweeps = 0;
};

/// Varimax rotation by pairwise planar rotations, optionally with Kaiser
/// row normalization. Stops when the relative criterion change over a full
/// sweep falls below 1e-7 (at most 100 sweeps). Zero-communality rows are
/// left out of the normalization and pass through unchanged.
inline VarimaxResult varimax_rotate(const Matrix& input, bool kaiser_normalize = true) {
    std::size_t p = input.rows();
    std::size_t m = input.cols();
    if (m < 2) throw Error(ErrorCode::InvalidArgument, "varimax needs at least 2 factors");

    std::vector<double> row_norm(p, 1.0);
    Matrix w = input;
    if (kaiser_normalize) {
        for (std::size_t i = 0; i < p; ++i) {
            double h2 = 0.0;
            for (std::size_t j = 0; j < m; ++j) h2 += w(i, j) * w(i, j);
            if (h2 > 0.0) {
                row_norm[i] = std::sqrt(h2);
                for (std::size_t j = 0; j < m; ++j) w(i, j) /= row_norm[i];
            }
        }
    }

    Matrix rotation = Matrix::identity(m);
    double np = static_cast<double>(p);
    double previous = varimax_criterion(w);
    constexpr int max_sweeps = 100;
    int sweeps_used = 0;
    bool converged = false;
    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        for (std::size_t j = 0; j < m - 1; ++j) {
            for (std::size_t k = j + 1; k < m; ++k) {
                double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
                for (std::size_t i = 0; i < p; ++i) {
                    double u = w(i, j) * w(i, j) - w(i, k) * w(i, k);
                    double v = 2.0 * w(i, j) * w(i, k);
                    a += u;
                    b += v;
                    c += u * u - v * v;
                    d += 2.0 * u * v;
                }
                double num = d - 2.0 * a * b / np;
                double den = c - (a * a - b * b) / np;
                double phi = 0.25 * std::atan2(num, den);
                if (std::abs(phi) < 1e-15) continue;
                double cs = std::cos(phi);
                double sn = std::sin(phi);
                for (std::size_t i = 0; i < p; ++i) {
                    double wi = w(i, j);
                    double wk = w(i, k);
                    w(i, j) = cs * wi + sn * wk;
                    w(i, k) = -sn * wi + cs * wk;
                }
                for (std::size_t i = 0; i < m; ++i) {
                    double ri = rotation(i, j);
                    double rk = rotation(i, k);
                    rotation(i, j) = cs * ri + sn * rk;
                    rotation(i, k) = -sn * ri + cs * rk;
                }
            }
        }
        sweeps_used = sweep;
        double current = varimax_criterion(w);
        if (std::abs(current - previous) <= 1e-7 * std::max(std::abs(previous), 1e-30)) {
            converged = true;
            break;
        }
        previous = current;
    }
    if (!converged) throw Error(ErrorCode::NoConvergence, "varimax exceeded 100 sweeps");

    if (kaiser_normalize)
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < m; ++j) w(i, j) *= row_norm[i];

    detail::canonicalize_column_signs(w, &rotation);

    // The accumulated rotation must be orthogonal; deviation here means a
    // bug, not bad input.
    Matrix gram = matmul(transpose(rotation), rotation);
    if (max_abs_diff(gram, Matrix::identity(m)) > 1e-10)
        throw Error(ErrorCode::NoConvergence, "accumulated rotation lost orthogonality");

    return {std::move(w), std::move(rotation), sweeps_used};
}

/// Kaiser-Meyer-Olkin sampling adequacy: squared correlations against
/// squared correlations plus squared anti-image correlations.
inline double kmo_statistic(const CorrelationMatrix& r) {
    std::size_t p = r.size();
    if (p < 2) throw Error(ErrorCode::InvalidArgument, "KMO needs at least 2 variables");
    Matrix inv = detail::invert_symmetric(r.r).inverse;

    double sum_r2 = 0.0;
    double sum_a2 = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            if (i == j) continue;
            sum_r2 += r.r(i, j) * r.r(i, j);
            double aij = -inv(i, j) / std::sqrt(inv(i, i) * inv(j, j));
            sum_a2 += aij * aij;
        }
    }
    if (sum_r2 == 0.0)
        throw Error(ErrorCode::Undefined, "KMO is undefined when all off-diagonal correlations are zero");
    return sum_r2 / (sum_r2 + sum_a2);
}

/// Country x m factor scores; a row is fully present or fully missing.
struct FactorScores {
    std::vector<std::optional<std::vector<double>>> rows;
    std::size_t n_factors = 0;

    bool row_missing(std::size_t i) const { return !rows[i].has_value(); }
};

/// Regression-method factor scores: standardize each variable over the
/// complete rows, then scores = Z * R^-1 * Lambda. Rows with any missing
/// input receive a fully missing score row.
inline FactorScores regression_factor_scores(const Matrix& loadings, const CorrelationMatrix& r,
                                             const std::vector<OptColumn>& data,
                                             Matrix* score_weights_out = nullptr) {
    std::size_t p = loadings.rows();
    if (r.size() != p || data.size() != p)
        throw Error(ErrorCode::InvalidArgument, "loadings, correlations and data must share variable order");
    std::size_t n_rows = data.empty() ? 0 : data.front().size();
    for (const auto& col : data)
        if (col.size() != n_rows)
            throw Error(ErrorCode::InvalidArgument, "all variables must have equal length");

    std::vector<bool> complete(n_rows, true);
    for (std::size_t i = 0; i < n_rows; ++i)
        for (std::size_t v = 0; v < p; ++v)
            if (!data[v][i]) {
                complete[i] = false;
                break;
            }
    std::size_t n_complete = static_cast<std::size_t>(std::count(complete.begin(), complete.end(), true));
    if (n_complete < 2)
        throw Error(ErrorCode::TooFewRows, "need at least 2 complete rows to standardize");

    std::vector<double> mean(p, 0.0), sd(p, 0.0);
    for (std::size_t v = 0; v < p; ++v) {
        for (std::size_t i = 0; i < n_rows; ++i)
            if (complete[i]) mean[v] += *data[v][i];
        mean[v] /= static_cast<double>(n_complete);
        double ss = 0.0;
        for (std::size_t i = 0; i < n_rows; ++i)
            if (complete[i]) {
                double d = *data[v][i] - mean[v];
                ss += d * d;
            }
        sd[v] = std::sqrt(ss / static_cast<double>(n_complete - 1));
        if (sd[v] == 0.0)
            throw Error(ErrorCode::ZeroVariance, "variable '" + r.labels[v] + "' is constant");
    }

    Matrix weights = matmul(detail::invert_symmetric(r.r).inverse, loadings);
    if (score_weights_out) *score_weights_out = weights;

    FactorScores out;
    out.n_factors = loadings.cols();
    out.rows.resize(n_rows);
    for (std::size_t i = 0; i < n_rows; ++i) {
        if (!complete[i]) continue;
        std::vector<double> score(out.n_factors, 0.0);
        for (std::size_t v = 0; v < p; ++v) {
            double z = (*data[v][i] - mean[v]) / sd[v];
            for (std::size_t j = 0; j < out.n_factors; ++j) score[j] += z * weights(v, j);
        }
        out.rows[i] = std::move(score);
    }
    return out;
}

/// Fraction of total variance carried by the retained eigenvalues.
inline double explained_variance(std::span<const double> retained, int p) {
    if (p < 1) throw Error(ErrorCode::InvalidArgument, "p must be >= 1");
    double sum = 0.0;
    for (double lambda : retained) {
        if (lambda < 0.0) throw Error(ErrorCode::InvalidArgument, "eigenvalues must be nonnegative");
        sum += lambda;
    }
    return sum / static_cast<double>(p);
}

/// Kaiser rule: retain eigenvalues greater than 1.
inline int kaiser_factor_count(std::span<const double> eigenvalues) {
    int count = 0;
    for (double lambda : eigenvalues)
        if (lambda > 1.0) ++count;
    return count;
}

/// Everything the factor stage produces in one bundle.
struct FactorModel {
    std::vector<std::string> variable_ids;
    Matrix loadings_unrotated;
    Matrix loadings_rotated;
    Matrix rotation;
    Matrix score_weights;
    std::vector<double> eigenvalues; // retained, descending
    double explained_variance_fraction = 0.0;
    std::optional<double> kmo;
    FactorScores scores;
    int rotation_sweeps = 0;
    int m = 0;
};

/// Correlation matrix (listwise rows), principal-component extraction,
/// optional varimax, KMO and regression scores. `m_requested == 0` lets
/// the Kaiser rule pick the factor count.
inline FactorModel fit_factor_model(const std::vector<OptColumn>& data,
                                    const std::vector<std::string>& ids, int m_requested,
                                    bool rotate = true) {
    FactorModel model;
    model.variable_ids = ids;
    CorrelationMatrix r = correlation_matrix(data, ids, MissingPolicy::ListwiseComplete);

    EigenDecomposition eig = eig_sym(r.r);
    int m = m_requested > 0 ? m_requested : std::max(1, kaiser_factor_count(eig.values));
    model.m = m;
    model.eigenvalues.assign(eig.values.begin(), eig.values.begin() + m);
    model.explained_variance_fraction = explained_variance(model.eigenvalues, static_cast<int>(r.size()));
    model.loadings_unrotated = extract_principal_factors(r, m);

    if (rotate && m >= 2) {
        VarimaxResult rotated = varimax_rotate(model.loadings_unrotated, true);
        model.loadings_rotated = std::move(rotated.loadings);
        model.rotation = std::move(rotated.rotation);
        model.rotation_sweeps = rotated.sweeps;
    } else {
        model.loadings_rotated = model.loadings_unrotated;
        model.rotation = Matrix::identity(m);
    }

    try {
        model.kmo = kmo_statistic(r);
    } catch (const Error&) {
        model.kmo = std::nullopt; // undefined or singular: report as absent
    }
    model.scores = regression_factor_scores(model.loadings_rotated, r, data, &model.score_weights);
    return model;
}

} // namespace foi
