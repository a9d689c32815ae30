#pragma once

#include "seqscan/process.hpp"
#include "seqscan/segmenter.hpp"

#include <span>
#include <vector>

namespace seqscan {

/// Log-likelihood ratio of the piecewise-constant Bernoulli model with the
/// given change points against the single-probability null.
double log_glr_full(const CombinedProcess& process, std::span<const Index> taus);

/**
 * Modified BIC of a segmentation:
 *   log GLR - 1/2 sum_{k=0..K} log(tau_{k+1} - tau_k) + 1/2 log m - K log m'
 * with tau_0 = 1 and tau_{K+1} = m. Throws InvariantViolation if any
 * penalty length is zero.
 */
double mbic(const CombinedProcess& process, std::span<const Index> taus);

struct MbicCurve {
    std::vector<double> values;  // values[K] = mBIC with the first K inserted change points
    int k_hat = 0;
};

struct Selection {
    int k_hat = 0;
    MbicCurve curve;
    std::vector<Index> taus;  // sorted, the first k_hat inserted change points
};

/// Evaluate mBIC over every prefix of the insertion order and keep the best
/// (ties go to the smaller K).
Selection select_k(const CombinedProcess& process, const ChangePointSequence& sequence);

} // namespace seqscan
