#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "mirage/errors.hpp"

namespace mirage {

struct assignment {
    std::vector<int> row_to_col;  // -1 marks an unassigned row (only possible when rows > cols)
    double total_cost = 0.0;
};

namespace detail {

// Shortest-augmenting-path assignment on a square matrix with dual
// potentials. Returns col -> row (1-indexed, 0 = none) and fills u, v.
inline std::vector<int> square_assign(const std::vector<double>& a, int n,
                                      std::vector<double>& u, std::vector<double>& v) {
    const double inf = std::numeric_limits<double>::infinity();
    u.assign(n + 1, 0.0);
    v.assign(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    std::vector<double> minv(n + 1);
    std::vector<char> used(n + 1);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        minv.assign(n + 1, inf);
        used.assign(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = 0;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j])
                    continue;
                const double cur = a[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    return p;
}

// Kuhn matching of rows [from, n) into non-banned columns along `adj`.
// On success writes the columns into match_of_row.
inline bool complete_matching(const std::vector<std::vector<int>>& adj, int n, int from,
                              std::vector<char>& banned, std::vector<int>& match_of_row) {
    std::vector<int> col_owner(n, -1);
    std::vector<char> visited(n);
    // recursive augment via explicit lambda
    auto augment = [&](auto&& self, int row) -> bool {
        for (int j : adj[row]) {
            if (banned[j] || visited[j])
                continue;
            visited[j] = 1;
            if (col_owner[j] < 0 || self(self, col_owner[j])) {
                col_owner[j] = row;
                return true;
            }
        }
        return false;
    };
    for (int i = from; i < n; ++i) {
        visited.assign(n, 0);
        if (!augment(augment, i))
            return false;
    }
    for (int j = 0; j < n; ++j)
        if (col_owner[j] >= 0)
            match_of_row[col_owner[j]] = j;
    return true;
}

} // namespace detail

// Minimum-total-cost matching of rows into columns. Every row is assigned
// when rows <= cols; otherwise the matrix is padded with zero-cost dummy
// columns and the rows landing on them are reported unassigned. Ties are
// broken toward the lexicographically smallest assignment vector, found by
// re-matching inside the subgraph of dual-tight edges.
inline assignment hungarian_solve(const std::vector<std::vector<double>>& cost) {
    const int rows = static_cast<int>(cost.size());
    if (rows == 0)
        return {};
    const int cols = static_cast<int>(cost[0].size());
    double scale = 0.0;
    for (const auto& r : cost) {
        if (static_cast<int>(r.size()) != cols)
            throw dimension_mismatch("cost matrix is ragged");
        for (double c : r) {
            if (!std::isfinite(c))
                throw non_finite_cost("cost matrix entries must be finite");
            scale = std::max(scale, std::abs(c));
        }
    }
    if (cols == 0)
        return {std::vector<int>(rows, -1), 0.0};

    // pad to square; dummy rows/columns cost 0 toward everything
    const int n = std::max(rows, cols);
    std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            a[static_cast<std::size_t>(i) * n + j] = cost[i][j];

    std::vector<double> u, v;
    const auto p = detail::square_assign(a, n, u, v);
    std::vector<int> match(n, -1);
    for (int j = 1; j <= n; ++j)
        match[p[j] - 1] = j - 1;

    // Lexicographic refinement: for each real row in order, move it to the
    // smallest tight column that still allows the remaining rows a perfect
    // matching on tight edges. All tight perfect matchings share the
    // optimal total, so this only reorders ties.
    const double tol = 1e-9 * (1.0 + scale);
    std::vector<std::vector<int>> tight(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (a[static_cast<std::size_t>(i) * n + j] - u[i + 1] - v[j + 1] <= tol)
                tight[i].push_back(j);

    std::vector<char> fixed(n, 0);
    for (int i = 0; i < rows; ++i) {
        const int current = match[i];
        for (int j : tight[i]) {
            if (j >= current)
                break;
            if (fixed[j])
                continue;
            std::vector<char> banned = fixed;
            banned[j] = 1;
            std::vector<int> trial(match);
            trial[i] = j;
            if (detail::complete_matching(tight, n, i + 1, banned, trial)) {
                match = std::move(trial);
                break;
            }
        }
        fixed[match[i]] = 1;
    }

    assignment out;
    out.row_to_col.resize(rows);
    for (int i = 0; i < rows; ++i) {
        const int j = match[i];
        out.row_to_col[i] = (j < cols) ? j : -1;
        if (j < cols)
            out.total_cost += cost[i][j];
    }
    return out;
}

} // namespace mirage
