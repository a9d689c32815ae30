#include "seqscan/posterior.hpp"

#include "seqscan/errors.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>

namespace seqscan {

namespace {

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

constexpr double kCdfTolerance = 1e-8;

} // namespace

CpLikelihoods cp_likelihoods(const CombinedProcess& process, double alpha, double beta, Index lo, Index hi) {
    return cp_likelihoods(process, alpha, beta, lo, hi, lo, hi);
}

CpLikelihoods cp_likelihoods(const CombinedProcess& process, double alpha, double beta, Index lo, Index hi,
                             Index candidate_lo, Index candidate_hi) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw InputError("cp_likelihoods: prior parameters must be positive");
    if (lo < 1 || hi > process.size() || lo > hi || candidate_lo < lo || candidate_hi > hi ||
        candidate_lo > candidate_hi)
        throw InvariantViolation("cp_likelihoods: bad window [" + std::to_string(lo) + ", " +
                                 std::to_string(hi) + "] / candidates [" + std::to_string(candidate_lo) +
                                 ", " + std::to_string(candidate_hi) + "]");

    CpLikelihoods out;
    out.lo = lo;
    out.hi = hi;
    out.first_candidate = candidate_lo;
    out.log_l.reserve(static_cast<std::size_t>(candidate_hi - candidate_lo + 1));

    const double n_total = static_cast<double>(hi - lo + 1);
    const double k_total = static_cast<double>(process.successes_in(lo, hi));
    const double log_norm = 2.0 * log_beta(alpha, beta);
    out.log_l_max = -std::numeric_limits<double>::infinity();
    for (Index i = candidate_lo; i <= candidate_hi; ++i) {
        const double n_left = static_cast<double>(i - lo + 1);
        const double k_left = static_cast<double>(process.successes_in(lo, i));
        const double n_right = n_total - n_left;
        const double k_right = k_total - k_left;
        const double ll = log_beta(alpha + k_left, beta + n_left - k_left) +
                          log_beta(alpha + k_right, beta + n_right - k_right) - log_norm;
        out.log_l.push_back(ll);
        if (ll > out.log_l_max) {
            out.log_l_max = ll;
            out.tau_hat = i;
        }
    }
    return out;
}

PosteriorWeights posterior_weights(const CpLikelihoods& likelihoods, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw InputError("posterior_weights: epsilon must lie in (0, 1)");
    PosteriorWeights out;
    out.lo = likelihoods.lo;
    out.hi = likelihoods.hi;
    double total = 0.0;
    for (std::size_t k = 0; k < likelihoods.log_l.size(); ++k) {
        const double w = std::exp(likelihoods.log_l[k] - likelihoods.log_l_max);
        if (w > epsilon) {
            out.support.push_back(likelihoods.first_candidate + static_cast<Index>(k));
            out.weights.push_back(w);
            total += w;
        }
    }
    for (auto& w : out.weights)
        w /= total;
    return out;
}

double BetaMixture::cdf(double x) const {
    if (x <= 0.0)
        return 0.0;
    if (x >= 1.0)
        return 1.0;
    double f = 0.0;
    for (const auto& c : components)
        f += c.weight * boost::math::ibeta(c.a, c.b, x);
    return f;
}

double BetaMixture::pdf(double x) const {
    double f = 0.0;
    for (const auto& c : components)
        f += c.weight * boost::math::ibeta_derivative(c.a, c.b, x);
    return f;
}

double BetaMixture::mean() const {
    double mu = 0.0;
    for (const auto& c : components)
        mu += c.weight * c.a / (c.a + c.b);
    return mu;
}

BetaMixture posterior_at(Index t, const PosteriorWeights& weights, const CombinedProcess& process,
                         double alpha, double beta) {
    if (t < weights.lo || t > weights.hi)
        throw InvariantViolation("posterior_at: position " + std::to_string(t) + " outside window");
    BetaMixture mix;
    const Index k_total = process.successes_in(weights.lo, weights.hi);
    for (std::size_t k = 0; k < weights.support.size(); ++k) {
        const Index i = weights.support[k];
        const Index n_left = i - weights.lo + 1;
        const Index k_left = process.successes_in(weights.lo, i);
        if (t <= i) {
            mix.components.push_back({weights.weights[k], alpha + static_cast<double>(k_left),
                                      beta + static_cast<double>(n_left - k_left)});
        } else {
            const Index n_right = weights.hi - i;
            const Index k_right = k_total - k_left;
            mix.components.push_back({weights.weights[k], alpha + static_cast<double>(k_right),
                                      beta + static_cast<double>(n_right - k_right)});
        }
    }
    return mix;
}

double mixture_quantile(const BetaMixture& mixture, double q) {
    if (!(q > 0.0 && q < 1.0))
        throw InputError("mixture_quantile: q must lie in (0, 1)");
    double lo = 0.0, hi = 1.0;
    double x = 0.5;
    for (int iter = 0; iter < 200; ++iter) {
        x = 0.5 * (lo + hi);
        const double f = mixture.cdf(x);
        if (std::abs(f - q) <= kCdfTolerance)
            break;
        if (f < q)
            lo = x;
        else
            hi = x;
        if (hi - lo <= std::numeric_limits<double>::epsilon() * 4)
            break;
    }
    return x;
}

// ---------------------------------------------------------------------------
// Band evaluation.
//
// Every mixture the band needs is a union of "runs": consecutive candidates i
// of one flanking change point whose components differ by one read. Moving
// from candidate i to i+1 changes one shape parameter by one, and the
// regularised incomplete beta obeys
//   I_x(a + 1, b) = I_x(a, b) - x^a (1 - x)^b / (a B(a, b))
//   I_x(a, b + 1) = I_x(a, b) + x^a (1 - x)^b / (b B(a, b)),
// so a run of length r costs one incomplete beta call plus r cheap updates
// instead of r calls. The exact value is recomputed every kResync steps.
// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kResync = 256;

struct FlankModel {
    Index lo = 0;
    Index hi = 0;
    Index support_lo = 0;  // first surviving candidate
    Index support_hi = -1;
    std::vector<double> dense;  // weights over [support_lo, support_hi], zeros where truncated
};

struct Run {
    const FlankModel* flank;
    Index first;
    Index last;
    bool left_part;  // component describes reads lo..i (else i+1..hi)
    double scale;    // flank share of the mixture
};

class BandEvaluator {
public:
    BandEvaluator(const CombinedProcess& process, double alpha, double beta)
        : process_(process), alpha_(alpha), beta_(beta) {
        const auto m = static_cast<std::size_t>(process.size());
        log_a_.resize(m + 2);
        log_b_.resize(m + 2);
        log_ab_.resize(m + 2);
        for (std::size_t k = 0; k < m + 2; ++k) {
            log_a_[k] = std::log(alpha + static_cast<double>(k));
            log_b_[k] = std::log(beta + static_cast<double>(k));
            log_ab_[k] = std::log(alpha + beta + static_cast<double>(k));
        }
    }

    // Mixture CDF and density at x over the given runs.
    void evaluate(const std::vector<Run>& runs, double x, double& cdf, double& pdf) const {
        cdf = 0.0;
        pdf = 0.0;
        const double lx = std::log(x);
        const double l1x = std::log1p(-x);
        const double inv = 1.0 / (x * (1.0 - x));
        for (const auto& run : runs) {
            Index ka = 0, kb = 0;  // shape parameters are alpha + ka, beta + kb
            shapes(run, run.first, ka, kb);
            double value = 0.0, lbeta = 0.0;
            resync(ka, kb, x, value, lbeta);
            const double* w = run.flank->dense.data() + (run.first - run.flank->support_lo);
            std::size_t since = 0;
            for (Index i = run.first;; ++i, ++w) {
                const double a = alpha_ + static_cast<double>(ka);
                const double b = beta_ + static_cast<double>(kb);
                if (*w > 0.0) {
                    cdf += run.scale * *w * value;
                    pdf += run.scale * *w * std::exp((a * lx + b * l1x - lbeta)) * inv;
                }
                if (i == run.last)
                    break;
                const bool success = process_.label(i + 1) == 1;
                step(run.left_part, success, ka, kb, lx, l1x, value, lbeta);
                if (++since == kResync) {
                    resync(ka, kb, x, value, lbeta);
                    since = 0;
                }
            }
        }
    }

    double mean(const std::vector<Run>& runs) const {
        double mu = 0.0;
        for (const auto& run : runs) {
            const double* w = run.flank->dense.data() + (run.first - run.flank->support_lo);
            for (Index i = run.first; i <= run.last; ++i, ++w) {
                if (*w <= 0.0)
                    continue;
                Index ka = 0, kb = 0;
                shapes(run, i, ka, kb);
                const double a = alpha_ + static_cast<double>(ka);
                const double b = beta_ + static_cast<double>(kb);
                mu += run.scale * *w * a / (a + b);
            }
        }
        return mu;
    }

    // Safeguarded Newton inside a shrinking bisection bracket.
    double quantile(const std::vector<Run>& runs, double q, double start) const {
        double lo = 0.0, hi = 1.0;
        double x = std::clamp(start, 1e-12, 1.0 - 1e-12);
        for (int iter = 0; iter < 200; ++iter) {
            double f = 0.0, d = 0.0;
            evaluate(runs, x, f, d);
            if (std::abs(f - q) <= kCdfTolerance)
                return x;
            if (f < q)
                lo = x;
            else
                hi = x;
            if (hi - lo <= std::numeric_limits<double>::epsilon() * 4)
                return x;
            double next = d > 0.0 ? x - (f - q) / d : -1.0;
            if (!(next > lo && next < hi))
                next = 0.5 * (lo + hi);
            x = next;
        }
        return x;
    }

private:
    void shapes(const Run& run, Index i, Index& ka, Index& kb) const {
        const FlankModel& fl = *run.flank;
        if (run.left_part) {
            ka = process_.successes_in(fl.lo, i);
            kb = (i - fl.lo + 1) - ka;
        } else {
            ka = process_.successes_in(i + 1, fl.hi);
            kb = (fl.hi - i) - ka;
        }
    }

    void resync(Index ka, Index kb, double x, double& value, double& lbeta) const {
        const double a = alpha_ + static_cast<double>(ka);
        const double b = beta_ + static_cast<double>(kb);
        value = boost::math::ibeta(a, b, x);
        lbeta = log_beta(a, b);
    }

    // Move from candidate i to i + 1: the left part gains read i + 1, the
    // right part loses it.
    void step(bool left_part, bool success, Index& ka, Index& kb, double lx, double l1x, double& value,
              double& lbeta) const {
        const auto ua = static_cast<std::size_t>(ka);
        const auto ub = static_cast<std::size_t>(kb);
        const double a = alpha_ + static_cast<double>(ka);
        const double b = beta_ + static_cast<double>(kb);
        if (left_part) {
            const double term = std::exp(a * lx + b * l1x - lbeta);
            if (success) {
                value -= term / a;
                lbeta += log_a_[ua] - log_ab_[ua + ub];
                ++ka;
            } else {
                value += term / b;
                lbeta += log_b_[ub] - log_ab_[ua + ub];
                ++kb;
            }
        } else if (success) {
            // (a - 1, b) -> value(a - 1) = value(a) + x^(a-1)(1-x)^b / ((a-1) B(a-1, b))
            lbeta += log_ab_[ua - 1 + ub] - log_a_[ua - 1];
            --ka;
            const double am = alpha_ + static_cast<double>(ka);
            value += std::exp(am * lx + b * l1x - lbeta) / am;
        } else {
            lbeta += log_ab_[ua + ub - 1] - log_b_[ub - 1];
            --kb;
            const double bm = beta_ + static_cast<double>(kb);
            value -= std::exp(a * lx + bm * l1x - lbeta) / bm;
        }
    }

    const CombinedProcess& process_;
    double alpha_;
    double beta_;
    std::vector<double> log_a_, log_b_, log_ab_;
};

FlankModel build_flank(const CombinedProcess& process, const BandOptions& opt, Index lo, Index hi) {
    FlankModel fl;
    fl.lo = lo;
    fl.hi = hi;
    const auto lik = cp_likelihoods(process, opt.alpha, opt.beta, lo, hi, lo, hi - 1);
    const auto w = posterior_weights(lik, opt.epsilon);
    fl.support_lo = w.support.front();
    fl.support_hi = w.support.back();
    fl.dense.assign(static_cast<std::size_t>(fl.support_hi - fl.support_lo + 1), 0.0);
    for (std::size_t k = 0; k < w.support.size(); ++k)
        fl.dense[static_cast<std::size_t>(w.support[k] - fl.support_lo)] = w.weights[k];
    return fl;
}

// Split of a flank's support induced by t; positions with equal keys share a mixture.
Index flank_key(const FlankModel* fl, Index t) {
    return fl ? std::clamp(t, fl->support_lo, fl->support_hi + 1) : 0;
}

void append_runs(std::vector<Run>& runs, const FlankModel& fl, Index t, double scale) {
    // candidates i >= t keep t in the left part
    const Index split = std::clamp(t, fl.support_lo, fl.support_hi + 1);
    if (split > fl.support_lo)
        runs.push_back({&fl, fl.support_lo, split - 1, false, scale});
    if (split <= fl.support_hi)
        runs.push_back({&fl, split, fl.support_hi, true, scale});
}

} // namespace

PosteriorBand ci_band(const CombinedProcess& process, std::span<const Index> taus, const BandOptions& options) {
    std::vector<Position> grid;
    const auto pos = process.positions();
    for (std::size_t k = 0; k < pos.size(); ++k)
        if (k + 1 == pos.size() || pos[k + 1] != pos[k])
            grid.push_back(pos[k]);
    return ci_band(process, taus, options, grid);
}

PosteriorBand ci_band(const CombinedProcess& process, std::span<const Index> taus, const BandOptions& options,
                      std::span<const Position> grid) {
    if (!(options.level > 0.0 && options.level < 1.0))
        throw InputError("ci_band: level must lie in (0, 1)");
    if (!(options.alpha > 0.0) || !(options.beta > 0.0))
        throw InputError("ci_band: prior parameters must be positive");
    if (!(options.epsilon > 0.0 && options.epsilon < 1.0))
        throw InputError("ci_band: epsilon must lie in (0, 1)");

    const Index m = process.size();
    PosteriorBand band;
    if (m == 0)
        return band;
    const auto segs = index_segments(taus, m);
    const auto positions = process.positions();

    band.grid.assign(grid.begin(), grid.end());
    for (Position g : grid) {
        const auto it = std::upper_bound(positions.begin(), positions.end(), g);
        band.grid_index.push_back(std::max<Index>(1, static_cast<Index>(it - positions.begin())));
    }
    const std::size_t n = band.grid.size();
    band.lower.resize(n);
    band.upper.resize(n);
    band.point_est.resize(n);

    const double q_lo = (1.0 - options.level) / 2.0;
    const double q_hi = 1.0 - q_lo;

    std::vector<std::size_t> seg_of(n);
    for (std::size_t g = 0; g < n; ++g) {
        const Index t = band.grid_index[g];
        std::size_t k = static_cast<std::size_t>(
            std::upper_bound(segs.begin(), segs.end(), t, [](Index v, const IndexSegment& s) { return v < s.start; }) -
            segs.begin() - 1);
        seg_of[g] = k;
        const auto& s = segs[k];
        band.point_est[g] =
            static_cast<double>(process.successes_in(s.start, s.end)) / static_cast<double>(s.end - s.start + 1);
    }

    if (taus.empty()) {
        const double a = options.alpha + static_cast<double>(process.case_count());
        const double b = options.beta + static_cast<double>(process.control_count());
        const double lower = boost::math::ibeta_inv(a, b, q_lo);
        const double upper = boost::math::ibeta_inv(a, b, q_hi);
        std::fill(band.lower.begin(), band.lower.end(), lower);
        std::fill(band.upper.begin(), band.upper.end(), upper);
        return band;
    }

    // flanks[c] models change point c (1-based) over the two segments it separates
    std::vector<FlankModel> flanks(taus.size() + 1);
    for (std::size_t c = 1; c <= taus.size(); ++c)
        flanks[c] = build_flank(process, options, segs[c - 1].start, segs[c].end);

    const BandEvaluator evaluator(process, options.alpha, options.beta);
    const std::size_t n_cp = taus.size();

    // Newton warm-starts from the previous grid point. Warm starts restart at
    // fixed block boundaries so the result does not depend on the thread count.
    constexpr std::size_t kBlock = 64;
    auto work = [&](std::size_t begin, std::size_t end) {
        std::size_t prev_seg = std::numeric_limits<std::size_t>::max();
        Index prev_left = -1, prev_right = -1;
        double lower = 0.0, upper = 0.0;
        std::vector<Run> runs;
        for (std::size_t g = begin; g < end; ++g) {
            if ((g - begin) % kBlock == 0)
                prev_seg = std::numeric_limits<std::size_t>::max();
            const Index t = band.grid_index[g];
            const std::size_t k = seg_of[g];
            const FlankModel* left = k >= 1 ? &flanks[k] : nullptr;
            const FlankModel* right = k + 1 <= n_cp ? &flanks[k + 1] : nullptr;
            const Index key_l = flank_key(left, t);
            const Index key_r = flank_key(right, t);
            if (k != prev_seg || key_l != prev_left || key_r != prev_right) {
                runs.clear();
                const double share = (left && right) ? 0.5 : 1.0;
                if (left)
                    append_runs(runs, *left, t, share);
                if (right)
                    append_runs(runs, *right, t, share);
                if (k != prev_seg) {
                    const double mu = evaluator.mean(runs);
                    lower = evaluator.quantile(runs, q_lo, mu);
                    upper = evaluator.quantile(runs, q_hi, mu);
                } else {
                    lower = evaluator.quantile(runs, q_lo, lower);
                    upper = evaluator.quantile(runs, q_hi, upper);
                }
                prev_seg = k;
                prev_left = key_l;
                prev_right = key_r;
            }
            band.lower[g] = lower;
            band.upper[g] = upper;
        }
    };

    const std::size_t threads = static_cast<std::size_t>(std::max(1, options.threads));
    const std::size_t n_blocks = (n + kBlock - 1) / kBlock;
    if (threads == 1 || n_blocks < 2) {
        work(0, n);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::future<void>> futs;
        for (std::size_t w = 0; w < std::min(threads, n_blocks); ++w)
            futs.push_back(std::async(std::launch::async, [&] {
                for (std::size_t b = next++; b < n_blocks; b = next++)
                    work(b * kBlock, std::min(n, (b + 1) * kBlock));
            }));
        for (auto& f : futs)
            f.get();
    }
    return band;
}

} // namespace seqscan
