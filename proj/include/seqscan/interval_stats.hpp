#pragma once

#include "seqscan/process.hpp"

#include <string_view>

namespace seqscan {

enum class StatKind { Score, Glr };

std::string_view to_string(StatKind kind);
StatKind parse_stat_kind(std::string_view name);

/**
 * Sufficient statistics of one interval inside a reference window:
 * the window holds `n_total` reads with `k_total` successes, the interval
 * holds `n_in` reads with `k_in` successes.
 *
 * Doubles so that the same formulas can be evaluated at non-integer points
 * when bounding the statistic over a family of intervals.
 */
struct IntervalCounts {
    double n_total = 0;
    double k_total = 0;
    double n_in = 0;
    double k_in = 0;
};

/// Score and GLR evaluation of an interval [i, j].
struct IntervalStat {
    Index i = 0;
    Index j = 0;
    double s_ij = 0.0;
    double sigma_ij = 0.0;
    double t_ij = 0.0;
    double lambda_ij = 0.0;  // natural log
    double p_hat = 0.0;
    double p_hat_in = 0.0;
    double p_hat_out = 0.0;
};

// Kernels over counts; O(1).
double score_raw(const IntervalCounts& c);
double score_sigma(const IntervalCounts& c);
/// Standardized score; 0 when the null standard deviation is 0.
double score_t(const IntervalCounts& c);
/// Binomial GLR with 0 log 0 = 0. Requires 0 < n_in < n_total.
double glr_lambda(const IntervalCounts& c);

/// Scan objective: |t| for the score statistic, Lambda for the GLR.
double objective(StatKind kind, const IntervalCounts& c);

/// Counts of [i, j] relative to the window [lo, hi].
IntervalCounts counts_in_window(const CombinedProcess& process, Index lo, Index hi, Index i, Index j);

/// Score fields for [i, j] against the whole sequence.
IntervalStat score(const CombinedProcess& process, Index i, Index j);
/// GLR fields (and MLEs) for [i, j] against the whole sequence.
IntervalStat glr(const CombinedProcess& process, Index i, Index j);

/// Every field for [i, j] with the window [lo, hi] playing the role of the sequence.
/// The GLR fields are left at zero when [i, j] == [lo, hi].
IntervalStat evaluate_in_window(const CombinedProcess& process, Index lo, Index hi, Index i, Index j);

} // namespace seqscan
