#include "seqscan/evaluation.hpp"

#include "seqscan/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>

namespace seqscan {

std::vector<std::size_t> solve_assignment(const std::vector<std::vector<double>>& cost) {
    // Hungarian method with potentials, O(rows^2 * cols).
    const std::size_t n = cost.size();
    if (n == 0)
        return {};
    const std::size_t m = cost.front().size();
    if (m < n)
        throw InvariantViolation("solve_assignment: needs rows <= cols");
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<std::size_t> owner(m + 1, 0), way(m + 1, 0);
    for (std::size_t row = 1; row <= n; ++row) {
        owner[0] = row;
        std::size_t col0 = 0;
        std::vector<double> minv(m + 1, inf);
        std::vector<char> used(m + 1, 0);
        do {
            used[col0] = 1;
            const std::size_t r0 = owner[col0];
            double delta = inf;
            std::size_t col1 = 0;
            for (std::size_t col = 1; col <= m; ++col) {
                if (used[col])
                    continue;
                const double cur = cost[r0 - 1][col - 1] - u[r0] - v[col];
                if (cur < minv[col]) {
                    minv[col] = cur;
                    way[col] = col0;
                }
                if (minv[col] < delta) {
                    delta = minv[col];
                    col1 = col;
                }
            }
            for (std::size_t col = 0; col <= m; ++col) {
                if (used[col]) {
                    u[owner[col]] += delta;
                    v[col] -= delta;
                } else {
                    minv[col] -= delta;
                }
            }
            col0 = col1;
        } while (owner[col0] != 0);
        do {
            const std::size_t col1 = way[col0];
            owner[col0] = owner[col1];
            col0 = col1;
        } while (col0 != 0);
    }
    std::vector<std::size_t> assign(n);
    for (std::size_t col = 1; col <= m; ++col)
        if (owner[col] != 0)
            assign[owner[col] - 1] = col - 1;
    return assign;
}

MatchReport match_changepoints(std::span<const std::int64_t> called, std::span<const std::int64_t> truth,
                               std::int64_t tolerance) {
    if (tolerance < 0)
        throw InputError("match_changepoints: tolerance must be >= 0");
    MatchReport rep;
    rep.n_called = called.size();
    rep.n_true = truth.size();

    if (!called.empty() && !truth.empty()) {
        const bool called_rows = called.size() <= truth.size();
        const auto rows = called_rows ? called : truth;
        const auto cols = called_rows ? truth : called;
        // An infeasible edge costs more than any feasible matching of all rows,
        // so the assignment maximises feasible pairs before minimising distance.
        const double blocked = static_cast<double>(rows.size()) * static_cast<double>(tolerance) + 1.0;
        std::vector<std::vector<double>> cost(rows.size(), std::vector<double>(cols.size()));
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c = 0; c < cols.size(); ++c) {
                const auto d = std::llabs(rows[r] - cols[c]);
                cost[r][c] = d <= tolerance ? static_cast<double>(d) : blocked;
            }
        const auto assign = solve_assignment(cost);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const auto d = std::llabs(rows[r] - cols[assign[r]]);
            if (d > tolerance)
                continue;
            if (called_rows)
                rep.pairs.push_back({rows[r], cols[assign[r]], d});
            else
                rep.pairs.push_back({cols[assign[r]], rows[r], d});
            rep.total_distance += d;
        }
        std::sort(rep.pairs.begin(), rep.pairs.end(),
                  [](const MatchPair& a, const MatchPair& b) { return a.called < b.called; });
    }

    const auto matched = rep.pairs.size();
    rep.unmatched_called = rep.n_called - matched;
    rep.unmatched_true = rep.n_true - matched;
    rep.recall = rep.n_true == 0 ? 1.0 : static_cast<double>(matched) / static_cast<double>(rep.n_true);
    if (rep.n_called == 0)
        rep.precision = rep.n_true == 0 ? 1.0 : 0.0;
    else
        rep.precision = static_cast<double>(matched) / static_cast<double>(rep.n_called);
    return rep;
}

std::vector<Index> breakpoints_to_indices(std::span<const Position> breakpoints, const CombinedProcess& process) {
    const auto pos = process.positions();
    std::vector<Index> out;
    out.reserve(breakpoints.size());
    for (Position bp : breakpoints)
        out.push_back(static_cast<Index>(std::lower_bound(pos.begin(), pos.end(), bp) - pos.begin()) + 1);
    return out;
}

} // namespace seqscan
