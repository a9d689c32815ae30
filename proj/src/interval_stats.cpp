#include "seqscan/interval_stats.hpp"

#include "seqscan/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace seqscan {

std::string_view to_string(StatKind kind) {
    return kind == StatKind::Score ? "score" : "glr";
}

StatKind parse_stat_kind(std::string_view name) {
    if (name == "score")
        return StatKind::Score;
    if (name == "glr")
        return StatKind::Glr;
    throw InputError("unknown statistic '" + std::string(name) + "' (expected score or glr)");
}

namespace {

// count * log((count / size) / (total_count / total_size)), with 0 log 0 = 0.
double log_ratio_term(double count, double size, double total_count, double total_size) {
    if (count <= 0.0)
        return 0.0;
    return count * std::log((count * total_size) / (size * total_count));
}

} // namespace

double score_raw(const IntervalCounts& c) {
    const double p = c.k_total / c.n_total;
    return c.k_in - p * c.n_in;
}

double score_sigma(const IntervalCounts& c) {
    const double p = c.k_total / c.n_total;
    const double var = (1.0 - c.n_in / c.n_total) * c.n_in * p * (1.0 - p);
    return var > 0.0 ? std::sqrt(var) : 0.0;
}

double score_t(const IntervalCounts& c) {
    const double sigma = score_sigma(c);
    return sigma > 0.0 ? score_raw(c) / sigma : 0.0;
}

double glr_lambda(const IntervalCounts& c) {
    const double n_out = c.n_total - c.n_in;
    const double k_out = c.k_total - c.k_in;
    const double f_total = c.n_total - c.k_total;
    const double lambda = log_ratio_term(c.k_in, c.n_in, c.k_total, c.n_total) +
                          log_ratio_term(c.n_in - c.k_in, c.n_in, f_total, c.n_total) +
                          log_ratio_term(k_out, n_out, c.k_total, c.n_total) +
                          log_ratio_term(n_out - k_out, n_out, f_total, c.n_total);
    return std::max(lambda, 0.0);
}

double objective(StatKind kind, const IntervalCounts& c) {
    return kind == StatKind::Score ? std::abs(score_t(c)) : glr_lambda(c);
}

IntervalCounts counts_in_window(const CombinedProcess& process, Index lo, Index hi, Index i, Index j) {
    if (lo < 1 || hi > process.size() || lo > hi || i < lo || j > hi || i > j)
        throw InvariantViolation("interval [" + std::to_string(i) + ", " + std::to_string(j) +
                                 "] is not inside window [" + std::to_string(lo) + ", " +
                                 std::to_string(hi) + "]");
    return {static_cast<double>(hi - lo + 1), static_cast<double>(process.successes_in(lo, hi)),
            static_cast<double>(j - i + 1), static_cast<double>(process.successes_in(i, j))};
}

namespace {

void fill_score(IntervalStat& st, const IntervalCounts& c) {
    st.p_hat = c.k_total / c.n_total;
    st.s_ij = score_raw(c);
    st.sigma_ij = score_sigma(c);
    st.t_ij = st.sigma_ij > 0.0 ? st.s_ij / st.sigma_ij : 0.0;
}

void fill_glr(IntervalStat& st, const IntervalCounts& c) {
    st.p_hat = c.k_total / c.n_total;
    st.p_hat_in = c.k_in / c.n_in;
    st.p_hat_out = (c.k_total - c.k_in) / (c.n_total - c.n_in);
    st.lambda_ij = glr_lambda(c);
}

} // namespace

IntervalStat score(const CombinedProcess& process, Index i, Index j) {
    if (process.size() < 2)
        throw InvariantViolation("score: need at least 2 reads");
    const auto c = counts_in_window(process, 1, process.size(), i, j);
    IntervalStat st;
    st.i = i;
    st.j = j;
    fill_score(st, c);
    return st;
}

IntervalStat glr(const CombinedProcess& process, Index i, Index j) {
    const Index m = process.size();
    if (i == 1 && j == m)
        throw InvariantViolation("glr: the whole sequence [1, m] has no outside region");
    const auto c = counts_in_window(process, 1, m, i, j);
    IntervalStat st;
    st.i = i;
    st.j = j;
    fill_glr(st, c);
    return st;
}

IntervalStat evaluate_in_window(const CombinedProcess& process, Index lo, Index hi, Index i, Index j) {
    const auto c = counts_in_window(process, lo, hi, i, j);
    IntervalStat st;
    st.i = i;
    st.j = j;
    fill_score(st, c);
    if (i != lo || j != hi)
        fill_glr(st, c);
    else
        st.p_hat_in = st.p_hat_out = st.p_hat;
    return st;
}

} // namespace seqscan
