#pragma once

#include "seqscan/process.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace testing {

// Process with positions 1..m and the given labels.
inline seqscan::CombinedProcess from_labels(const std::vector<int>& z) {
    std::vector<seqscan::Position> w(z.size());
    std::vector<std::uint8_t> labels(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) {
        w[k] = static_cast<seqscan::Position>(k + 1);
        labels[k] = static_cast<std::uint8_t>(z[k]);
    }
    return seqscan::CombinedProcess("chrT", std::move(w), std::move(labels));
}

inline std::vector<int> bernoulli(std::size_t m, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution d(p);
    std::vector<int> z(m);
    for (auto& v : z)
        v = d(rng) ? 1 : 0;
    return z;
}

// Piecewise Bernoulli: p_out everywhere, p_in on each [first, last] block (1-based).
struct Block {
    std::size_t first;
    std::size_t last;
};

inline std::vector<int> blocks(std::size_t m, double p_out, double p_in, const std::vector<Block>& bs,
                               std::mt19937_64& rng) {
    auto z = bernoulli(m, p_out, rng);
    std::bernoulli_distribution d(p_in);
    for (const auto& b : bs)
        for (std::size_t t = b.first; t <= b.last; ++t)
            z[t - 1] = d(rng) ? 1 : 0;
    return z;
}

} // namespace testing
