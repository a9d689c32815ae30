#pragma once

#include "seqscan/process.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace seqscan {

struct MatchPair {
    std::int64_t called;
    std::int64_t truth;
    std::int64_t distance;
};

struct MatchReport {
    std::vector<MatchPair> pairs;  // sorted by called point
    double recall = 0.0;
    double precision = 0.0;
    std::size_t n_called = 0;
    std::size_t n_true = 0;
    std::size_t unmatched_called = 0;
    std::size_t unmatched_true = 0;
    std::int64_t total_distance = 0;
};

/**
 * One-to-one matching of called to true change points that first maximises
 * the number of pairs within `tolerance` and then minimises their total
 * distance (optimal assignment). Works in whatever unit the points are given
 * in: read indices for the usual 100-read rule, or base pairs.
 */
MatchReport match_changepoints(std::span<const std::int64_t> called, std::span<const std::int64_t> truth,
                               std::int64_t tolerance);

/// Index of the first read at or after each genomic breakpoint (m + 1 past the end).
std::vector<Index> breakpoints_to_indices(std::span<const Position> breakpoints, const CombinedProcess& process);

/// Rectangular min-cost assignment; returns for each row its column (every
/// row is assigned, rows <= cols required).
std::vector<std::size_t> solve_assignment(const std::vector<std::vector<double>>& cost);

} // namespace seqscan
