#pragma once

#include "seqscan/interval_stats.hpp"
#include "seqscan/process.hpp"

#include <cstdint>
#include <vector>

namespace seqscan {

/// Restrictions applied to the intervals a scan may return.
struct ScanOptions {
    /// If > 0, no interval may induce a change point above this index.
    /// Segmentation passes m - 1 so that the final segment keeps a non-zero
    /// index length in the mBIC penalty.
    Index max_cut = 0;
    /// Number of runners-up to keep in ScanResult::candidates.
    int keep_candidates = 5;
};

struct ScanResult {
    bool found = false;
    IntervalStat best;        // statistics relative to the scanned window
    double objective = 0.0;   // |t| (score) or Lambda (glr)
    std::vector<IntervalStat> candidates;  // ranked by objective, best first
    std::uint64_t evaluated = 0;
};

/// Objective of [i, j] against window [lo, hi] for the given statistic.
double window_objective(const CombinedProcess& process, StatKind kind, Index lo, Index hi, Index i, Index j);

/**
 * Evaluate every interval lo <= i <= j <= hi except [lo, hi] itself and
 * return the maximiser. Ties go to the lexicographically smallest (i, j).
 * A window narrower than 2 reads yields found == false.
 */
ScanResult exhaustive_scan(const CombinedProcess& process, StatKind kind, Index lo, Index hi,
                           const ScanOptions& options = {});

/**
 * Iterative Grid Scan.
 *
 * Start and end points are laid on a coarse grid of G cells per axis. Each
 * cell pair is a block of intervals; the grid-corner interval of every block
 * is evaluated, and the block is refined onto a grid G times finer only if
 * an upper bound of the statistic over the block can still beat the best
 * interval found so far. Blocks are refined best-bound first.
 *
 * The upper bound is exact-safe: the GLR is jointly convex in the interval's
 * (size, successes), so its maximum over a block is attained at a vertex of
 * the block's feasible polygon; for the score, |S| is bounded the same way
 * and the null standard deviation by its minimum at the size extremes. The
 * scan therefore returns the same interval as exhaustive_scan while
 * evaluating far fewer intervals when a clear signal exists.
 */
ScanResult iterative_grid_scan(const CombinedProcess& process, StatKind kind, Index lo, Index hi,
                               int grid_factor, const ScanOptions& options = {});

struct ChangePointStep {
    std::vector<Index> added;  // ascending; one or two change points
    Index region_lo = 0;
    Index region_hi = 0;
    double objective = 0.0;
    IntervalStat interval;
};

struct ChangePointSequence {
    Index m = 0;
    std::vector<ChangePointStep> steps;

    /// Change points in insertion order, left endpoint first within a step.
    std::vector<Index> insertion_order() const;
    std::size_t total_change_points() const;
};

struct SegmentOptions {
    StatKind kind = StatKind::Glr;
    int grid_factor = 10;
    int max_k = 50;
    int threads = 1;
    bool exhaustive = false;  // use exhaustive_scan per region (testing/oracle)
};

/**
 * Greedy circular-binary-segmentation style recursion.
 *
 * Maintains a partition of [1, m]. Each step inserts the endpoints of the
 * best interval over all current regions (one change point if the interval
 * touches an edge of its region, otherwise two). Only regions created by the
 * previous step are rescanned. Stops at max_k change points or when no region
 * has a positive objective.
 */
ChangePointSequence cbs_segment(const CombinedProcess& process, const SegmentOptions& options);

} // namespace seqscan
