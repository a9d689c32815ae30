#pragma once

#include "seqscan/process.hpp"

#include <span>
#include <vector>

namespace seqscan {

/**
 * Log marginal likelihoods of a single change point inside [lo, hi].
 *
 * Candidate i means reads lo..i share one success probability and reads
 * i+1..hi another (i == hi is the no-change model). Both probabilities carry
 * independent Beta(alpha, beta) priors, which integrate out in closed form:
 *
 *   L_i = B(a + S_i, b + n_i - S_i) B(a + S_hi - S_i, b + ...) / B(a, b)^2
 *
 * with prefix sums taken relative to the window.
 */
struct CpLikelihoods {
    Index lo = 0;
    Index hi = 0;
    Index first_candidate = 0;
    std::vector<double> log_l;  // log_l[k] is candidate first_candidate + k
    double log_l_max = 0.0;
    Index tau_hat = 0;

    Index last_candidate() const { return first_candidate + static_cast<Index>(log_l.size()) - 1; }
    double log_at(Index i) const { return log_l[static_cast<std::size_t>(i - first_candidate)]; }
};

/// Candidates are every i in [lo, hi].
CpLikelihoods cp_likelihoods(const CombinedProcess& process, double alpha, double beta, Index lo, Index hi);
/// Candidates restricted to [candidate_lo, candidate_hi] within [lo, hi].
CpLikelihoods cp_likelihoods(const CombinedProcess& process, double alpha, double beta, Index lo, Index hi,
                             Index candidate_lo, Index candidate_hi);

/// Relative weights L_i / L_max above epsilon, renormalised to sum to one.
struct PosteriorWeights {
    Index lo = 0;
    Index hi = 0;
    std::vector<Index> support;    // ascending candidate indices
    std::vector<double> weights;   // same length, sums to 1
};

PosteriorWeights posterior_weights(const CpLikelihoods& likelihoods, double epsilon);

struct BetaComponent {
    double weight;
    double a;
    double b;
};

/// Finite mixture of Beta densities on [0, 1].
struct BetaMixture {
    std::vector<BetaComponent> components;

    double cdf(double x) const;
    double pdf(double x) const;
    double mean() const;
};

/// Posterior of the success probability at read t given the weighted change
/// point candidates: one Beta component per surviving candidate.
BetaMixture posterior_at(Index t, const PosteriorWeights& weights, const CombinedProcess& process,
                         double alpha, double beta);

/// Quantile by bisection on [0, 1] until |CDF(x) - q| <= 1e-8.
double mixture_quantile(const BetaMixture& mixture, double q);

struct BandOptions {
    double alpha = 1.0;
    double beta = 1.0;
    double level = 0.95;
    double epsilon = 1e-4;
    int threads = 1;
};

struct PosteriorBand {
    std::vector<Position> grid;
    std::vector<Index> grid_index;  // read index representing each grid position
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<double> point_est;
};

/**
 * Point-wise credible band for p(t) given a segmentation.
 *
 * A position inside segment k takes its posterior from the two flanking
 * change points. Each flank is varied over the open span between its own
 * neighbours with the other flank fixed at its estimate, and the two
 * resulting mixtures are averaged. With no change points the band is the
 * exact Beta posterior of the whole sequence.
 *
 * The default grid is every distinct read position, each represented by the
 * last read at that coordinate.
 */
PosteriorBand ci_band(const CombinedProcess& process, std::span<const Index> taus, const BandOptions& options);
PosteriorBand ci_band(const CombinedProcess& process, std::span<const Index> taus, const BandOptions& options,
                      std::span<const Position> grid);

} // namespace seqscan
