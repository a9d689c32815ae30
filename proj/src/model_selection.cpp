#include "seqscan/model_selection.hpp"

#include "seqscan/errors.hpp"

#include <algorithm>
#include <cmath>

namespace seqscan {

namespace {

// Maximised Bernoulli log-likelihood of k successes in n trials, 0 log 0 = 0.
double bernoulli_loglik(double k, double n) {
    double ll = 0.0;
    if (k > 0)
        ll += k * std::log(k / n);
    if (n - k > 0)
        ll += (n - k) * std::log((n - k) / n);
    return ll;
}

} // namespace

double log_glr_full(const CombinedProcess& process, std::span<const Index> taus) {
    const Index m = process.size();
    if (m == 0)
        return 0.0;
    double ll = 0.0;
    for (auto [start, end] : index_segments(taus, m))
        ll += bernoulli_loglik(static_cast<double>(process.successes_in(start, end)),
                               static_cast<double>(end - start + 1));
    return ll - bernoulli_loglik(static_cast<double>(process.case_count()), static_cast<double>(m));
}

double mbic(const CombinedProcess& process, std::span<const Index> taus) {
    const Index m = process.size();
    if (m < 2)
        throw InvariantViolation("mbic: need at least 2 reads");
    validate_change_points(taus, m);

    double penalty = 0.0;
    Index prev = 1;
    auto add_length = [&](Index next) {
        if (next - prev <= 0)
            throw InvariantViolation("mbic: zero-length segment between change points " +
                                     std::to_string(prev) + " and " + std::to_string(next));
        penalty += std::log(static_cast<double>(next - prev));
        prev = next;
    };
    for (Index tau : taus)
        add_length(tau);
    add_length(m);

    const double k = static_cast<double>(taus.size());
    return log_glr_full(process, taus) - 0.5 * penalty + 0.5 * std::log(static_cast<double>(m)) -
           k * std::log(static_cast<double>(process.unique_positions()));
}

Selection select_k(const CombinedProcess& process, const ChangePointSequence& sequence) {
    Selection sel;
    const auto order = sequence.insertion_order();
    if (process.size() < 2) {
        sel.curve.values.push_back(0.0);
        return sel;
    }

    std::vector<Index> prefix;
    sel.curve.values.push_back(mbic(process, prefix));
    for (Index cp : order) {
        prefix.insert(std::upper_bound(prefix.begin(), prefix.end(), cp), cp);
        sel.curve.values.push_back(mbic(process, prefix));
    }

    const auto& v = sel.curve.values;
    // first maximum wins, i.e. smaller K on ties
    sel.curve.k_hat = static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
    sel.k_hat = sel.curve.k_hat;
    sel.taus.assign(order.begin(), order.begin() + sel.k_hat);
    std::sort(sel.taus.begin(), sel.taus.end());
    return sel;
}

} // namespace seqscan
