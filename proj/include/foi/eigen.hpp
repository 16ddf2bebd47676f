#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "foi/error.hpp"
#include "foi/matrix.hpp"

namespace foi {

struct EigenDecomposition {
    std::vector<double> values; // descending
    Matrix vectors;             // orthonormal columns, aligned with values
    int sweeps = 0;
};

namespace detail {

inline double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
}

} // namespace detail

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Sweeps until the off-diagonal Frobenius norm drops below 1e-12 relative
/// to the matrix scale; quadratic convergence makes this a handful of
/// sweeps for the sizes seen here.
inline EigenDecomposition eig_sym(const Matrix& a) {
    std::size_t n = a.rows();
    if (n != a.cols()) throw Error(ErrorCode::NotSymmetric, "matrix is not square");
    double scale = std::max(1.0, max_abs(a));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(a(i, j) - a(j, i)) > 1e-10 * scale)
                throw Error(ErrorCode::NotSymmetric, "matrix is not symmetric to 1e-10");

    Matrix b = a;
    // Symmetrize exactly so rotations preserve symmetry bit-for-bit.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) b(i, j) = b(j, i) = 0.5 * (b(i, j) + b(j, i));
    Matrix v = Matrix::identity(n);

    const double tol = 1e-12 * std::max(1.0, frobenius_norm(b));
    constexpr int max_sweeps = 100;
    int done = 0;
    if (n > 1) {
        int sweep = 1;
        for (; sweep <= max_sweeps; ++sweep) {
            if (detail::off_diagonal_norm(b) < tol) break;
            for (std::size_t p = 0; p < n - 1; ++p) {
                for (std::size_t q = p + 1; q < n; ++q) {
                    double apq = b(p, q);
                    if (apq == 0.0) continue;
                    double app = b(p, p);
                    double aqq = b(q, q);
                    double tau = (aqq - app) / (2.0 * apq);
                    double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                    double c = 1.0 / std::sqrt(1.0 + t * t);
                    double s = t * c;

                    for (std::size_t k = 0; k < n; ++k) {
                        double bkp = b(k, p);
                        double bkq = b(k, q);
                        b(k, p) = c * bkp - s * bkq;
                        b(k, q) = s * bkp + c * bkq;
                    }
                    for (std::size_t k = 0; k < n; ++k) {
                        double bpk = b(p, k);
                        double bqk = b(q, k);
                        b(p, k) = c * bpk - s * bqk;
                        b(q, k) = s * bpk + c * bqk;
                    }
                    b(p, q) = b(q, p) = 0.0;

                    for (std::size_t k = 0; k < n; ++k) {
                        double vkp = v(k, p);
                        double vkq = v(k, q);
                        v(k, p) = c * vkp - s * vkq;
                        v(k, q) = s * vkp + c * vkq;
                    }
                }
            }
            done = sweep;
        }
        if (sweep > max_sweeps && detail::off_diagonal_norm(b) >= tol)
            throw Error(ErrorCode::NoConvergence, "Jacobi iteration exceeded 100 sweeps");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return b(x, x) > b(y, y); });

    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    out.sweeps = done;
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = b(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
    }
    return out;
}

} // namespace foi
