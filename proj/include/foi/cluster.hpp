#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "foi/data.hpp"
#include "foi/error.hpp"
#include "foi/matrix.hpp"

namespace foi {

enum class Metric { Euclidean, SquaredEuclidean };
enum class Linkage { BetweenGroupsAverage, Single, Complete };

inline const char* to_string(Metric m) {
    return m == Metric::Euclidean ? "euclidean" : "sqeuclidean";
}

inline const char* to_string(Linkage l) {
    switch (l) {
        case Linkage::BetweenGroupsAverage: return "average";
        case Linkage::Single: return "single";
        case Linkage::Complete: return "complete";
    }
    return "average";
}

inline Metric metric_from_string(std::string_view s) {
    if (s == "euclidean") return Metric::Euclidean;
    if (s == "sqeuclidean" || s == "squared_euclidean") return Metric::SquaredEuclidean;
    throw Error(ErrorCode::InvalidArgument, "unknown metric '" + std::string(s) + "'");
}

inline Linkage linkage_from_string(std::string_view s) {
    if (s == "average" || s == "between-groups") return Linkage::BetweenGroupsAverage;
    if (s == "single") return Linkage::Single;
    if (s == "complete") return Linkage::Complete;
    throw Error(ErrorCode::InvalidArgument, "unknown linkage '" + std::string(s) + "'");
}

struct DistanceMatrix {
    std::vector<std::string> labels;
    Matrix d;
    Metric metric = Metric::SquaredEuclidean;

    std::size_t size() const { return labels.size(); }
};

/// Pairwise distances between the rows of `points`.
inline DistanceMatrix distance_matrix(const std::vector<std::string>& labels, const Matrix& points,
                                      Metric metric) {
    std::size_t n = points.rows();
    if (labels.size() != n)
        throw Error(ErrorCode::InvalidArgument, "one label per point required");
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 points");

    DistanceMatrix out;
    out.labels = labels;
    out.metric = metric;
    out.d = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double sq = 0.0;
            for (std::size_t k = 0; k < points.cols(); ++k) {
                double diff = points(i, k) - points(j, k);
                sq += diff * diff;
            }
            double dist = metric == Metric::Euclidean ? std::sqrt(sq) : sq;
            out.d(i, j) = out.d(j, i) = dist;
        }
    }
    return out;
}

/// One agglomeration step: clusters `a` and `b` (a < b) merged into
/// `id` at the given inter-cluster distance. Leaves are 0..n-1, merged
/// clusters continue from n.
struct Merge {
    int a = 0;
    int b = 0;
    double height = 0.0;
    int id = 0;
    int size = 0;
};

struct Dendrogram {
    std::vector<std::string> labels;
    std::vector<Merge> merges; // n-1 entries
    Metric metric = Metric::SquaredEuclidean;
    Linkage linkage = Linkage::BetweenGroupsAverage;

    std::size_t n_leaves() const { return labels.size(); }
};

/// Sequential agglomeration over a distance matrix. Between-groups
/// (average) linkage updates distances with the Lance-Williams recurrence
///   d(k, i+j) = (n_i d(k,i) + n_j d(k,j)) / (n_i + n_j).
/// Ties on the minimal distance break toward the lowest (a, b) id pair,
/// which keeps runs reproducible across platforms.
inline Dendrogram agglomerate(const DistanceMatrix& dm, Linkage linkage = Linkage::BetweenGroupsAverage) {
    std::size_t n = dm.size();
    Dendrogram out;
    out.labels = dm.labels;
    out.metric = dm.metric;
    out.linkage = linkage;
    out.merges.reserve(n - 1);

    // Active clusters as (id, size); working distances in slot space.
    std::vector<int> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    std::vector<int> sizes(n, 1);
    Matrix d = dm.d;
    std::vector<bool> active(n, true);

    for (std::size_t step = 0; step + 1 < n; ++step) {
        std::size_t best_i = 0, best_j = 0;
        double best = std::numeric_limits<double>::infinity();
        int best_a = 0, best_b = 0;
        bool found = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!active[j]) continue;
                double dist = d(i, j);
                int a = std::min(ids[i], ids[j]);
                int b = std::max(ids[i], ids[j]);
                bool better = !found || dist < best ||
                              (dist == best && (a < best_a || (a == best_a && b < best_b)));
                if (better) {
                    best = dist;
                    best_i = i;
                    best_j = j;
                    best_a = a;
                    best_b = b;
                    found = true;
                }
            }
        }

        int new_id = static_cast<int>(n + step);
        int ni = sizes[best_i];
        int nj = sizes[best_j];
        out.merges.push_back({best_a, best_b, best, new_id, ni + nj});

        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == best_i || k == best_j) continue;
            double dki = d(k, best_i);
            double dkj = d(k, best_j);
            double updated = 0.0;
            switch (linkage) {
                case Linkage::BetweenGroupsAverage:
                    updated = (ni * dki + nj * dkj) / static_cast<double>(ni + nj);
                    break;
                case Linkage::Single:
                    updated = std::min(dki, dkj);
                    break;
                case Linkage::Complete:
                    updated = std::max(dki, dkj);
                    break;
            }
            d(k, best_i) = d(best_i, k) = updated;
        }
        ids[best_i] = new_id;
        sizes[best_i] = ni + nj;
        active[best_j] = false;
    }
    return out;
}

/// Flat partition: cluster ids assigned in order of first member
/// appearance, so the same grouping always gets the same labeling.
struct ClusterAssignment {
    int k = 0;
    std::vector<std::string> labels;
    std::vector<int> membership;      // aligned with labels, values 0..k-1
    std::vector<std::string> names;   // optional, one per cluster

    std::vector<std::vector<std::string>> groups() const {
        std::vector<std::vector<std::string>> out(static_cast<std::size_t>(k));
        for (std::size_t i = 0; i < labels.size(); ++i)
            out[static_cast<std::size_t>(membership[i])].push_back(labels[i]);
        return out;
    }
};

/// Cuts the dendrogram into k clusters by undoing the last k-1 merges.
inline ClusterAssignment cut_k(const Dendrogram& tree, int k) {
    std::size_t n = tree.n_leaves();
    if (k < 1 || static_cast<std::size_t>(k) > n)
        throw Error(ErrorCode::InvalidK, "k must lie in [1, n]");

    // Union-find over the first n-k merges.
    std::vector<int> parent(2 * n - 1);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    std::size_t applied = n - static_cast<std::size_t>(k);
    for (std::size_t s = 0; s < applied; ++s) {
        const Merge& m = tree.merges[s];
        parent[find(m.a)] = m.id;
        parent[find(m.b)] = m.id;
    }

    ClusterAssignment out;
    out.k = k;
    out.labels = tree.labels;
    out.membership.assign(n, -1);
    std::map<int, int> root_to_cluster;
    for (std::size_t i = 0; i < n; ++i) {
        int root = find(static_cast<int>(i));
        auto it = root_to_cluster.try_emplace(root, static_cast<int>(root_to_cluster.size())).first;
        out.membership[i] = it->second;
    }
    return out;
}

/// Adjusted Rand index between two partitions of the same label set.
inline double adjusted_rand_index(const ClusterAssignment& a, const ClusterAssignment& b) {
    if (a.labels.size() != b.labels.size())
        throw Error(ErrorCode::LabelMismatch, "partitions cover different numbers of items");

    std::map<std::string, int> b_of;
    for (std::size_t i = 0; i < b.labels.size(); ++i) b_of[b.labels[i]] = b.membership[i];

    std::size_t n = a.labels.size();
    std::map<std::pair<int, int>, long long> contingency;
    std::map<int, long long> row_sum, col_sum;
    for (std::size_t i = 0; i < n; ++i) {
        auto it = b_of.find(a.labels[i]);
        if (it == b_of.end())
            throw Error(ErrorCode::LabelMismatch, "label '" + a.labels[i] + "' missing from second partition");
        int ai = a.membership[i];
        int bi = it->second;
        ++contingency[{ai, bi}];
        ++row_sum[ai];
        ++col_sum[bi];
    }

    auto choose2 = [](long long x) { return 0.5 * static_cast<double>(x) * static_cast<double>(x - 1); };
    double sum_ij = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (const auto& [key, count] : contingency) sum_ij += choose2(count);
    for (const auto& [key, count] : row_sum) sum_a += choose2(count);
    for (const auto& [key, count] : col_sum) sum_b += choose2(count);
    double total_pairs = choose2(static_cast<long long>(n));

    double expected = sum_a * sum_b / total_pairs;
    double max_index = 0.5 * (sum_a + sum_b);
    if (max_index == expected) return 1.0; // both partitions degenerate
    return (sum_ij - expected) / (max_index - expected);
}

struct GroupMean {
    std::optional<double> mean;
    int n_used = 0;
};

/// Per-cluster arithmetic mean of an optional-valued country statistic.
/// Clusters with no usable member values report a missing mean.
inline std::vector<GroupMean> cluster_means(const ClusterAssignment& assignment, const OptColumn& values) {
    if (values.size() != assignment.labels.size())
        throw Error(ErrorCode::InvalidArgument, "one value slot per country required");
    std::vector<GroupMean> out(static_cast<std::size_t>(assignment.k));
    std::vector<double> sums(static_cast<std::size_t>(assignment.k), 0.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!values[i]) continue;
        auto c = static_cast<std::size_t>(assignment.membership[i]);
        sums[c] += *values[i];
        ++out[c].n_used;
    }
    for (std::size_t c = 0; c < out.size(); ++c)
        if (out[c].n_used > 0) out[c].mean = sums[c] / out[c].n_used;
    return out;
}

/// Newick rendering with node heights equal to merge heights; the branch
/// length of a child is the height gap to its parent.
inline std::string to_newick(const Dendrogram& tree) {
    std::size_t n = tree.n_leaves();
    struct Node {
        int left = -1, right = -1;
        double height = 0.0;
    };
    std::vector<Node> nodes(2 * n - 1);
    for (const Merge& m : tree.merges) {
        nodes[static_cast<std::size_t>(m.id)] = {m.a, m.b, m.height};
    }

    auto escape = [](const std::string& label) {
        std::string s = label;
        for (char& c : s)
            if (c == ' ') c = '_';
        return s;
    };
    auto format_len = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.10g", v);
        return std::string(buf);
    };
    std::function<std::string(int)> render = [&](int id) -> std::string {
        if (id < static_cast<int>(n)) return escape(tree.labels[static_cast<std::size_t>(id)]);
        const Node& node = nodes[static_cast<std::size_t>(id)];
        double lh = node.left < static_cast<int>(n) ? 0.0 : nodes[static_cast<std::size_t>(node.left)].height;
        double rh = node.right < static_cast<int>(n) ? 0.0 : nodes[static_cast<std::size_t>(node.right)].height;
        return "(" + render(node.left) + ":" + format_len(node.height - lh) + "," + render(node.right) +
               ":" + format_len(node.height - rh) + ")";
    };
    int root = tree.merges.empty() ? 0 : tree.merges.back().id;
    return render(root) + ";";
}

} // namespace foi
