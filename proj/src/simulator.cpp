#include "seqscan/simulator.hpp"

#include "seqscan/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace seqscan {

double IntensityFunction::total() const {
    return std::accumulate(values.begin(), values.end(), 0.0);
}

std::vector<Position> SpikeInTruth::breakpoints() const {
    std::vector<Position> out;
    for (const auto& s : segments) {
        out.push_back(s.start_bp);
        out.push_back(s.end_bp + 1);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 over the pair
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

IntensityFunction estimate_baseline(const ReadSet& control, Position bin_width, double bandwidth) {
    if (control.positions.empty())
        throw InputError("estimate_baseline: empty read set");
    if (bin_width < 1)
        throw InputError("estimate_baseline: bin width must be >= 1");
    if (!(bandwidth > 0.0))
        throw InputError("estimate_baseline: bandwidth must be positive");
    if (!control.is_sorted())
        throw InputError("estimate_baseline: read positions must be sorted");

    const auto reach = static_cast<Position>(std::ceil(4.0 * bandwidth));
    const Position first = control.positions.front();
    const Position last = control.positions.back();
    Position origin = 1 + ((first - 1) / bin_width) * bin_width;
    const Position pad_left = std::min(reach, (origin - 1) / bin_width);
    origin -= pad_left * bin_width;
    const Position n_bins = (last - origin) / bin_width + 1 + reach;

    std::vector<double> counts(static_cast<std::size_t>(n_bins), 0.0);
    for (Position p : control.positions)
        counts[static_cast<std::size_t>((p - origin) / bin_width)] += 1.0;

    std::vector<double> kernel(static_cast<std::size_t>(2 * reach + 1));
    for (Position d = -reach; d <= reach; ++d) {
        const double z = static_cast<double>(d) / bandwidth;
        kernel[static_cast<std::size_t>(d + reach)] = std::exp(-0.5 * z * z);
    }

    IntensityFunction out;
    out.origin = origin;
    out.bin_width = bin_width;
    out.values.assign(counts.size(), 0.0);
    for (Position b = 0; b < n_bins; ++b) {
        const double c = counts[static_cast<std::size_t>(b)];
        if (c == 0.0)
            continue;
        const Position lo = std::max<Position>(0, b - reach);
        const Position hi = std::min<Position>(n_bins - 1, b + reach);
        double norm = 0.0;
        for (Position t = lo; t <= hi; ++t)
            norm += kernel[static_cast<std::size_t>(t - b + reach)];
        for (Position t = lo; t <= hi; ++t)
            out.values[static_cast<std::size_t>(t)] += c * kernel[static_cast<std::size_t>(t - b + reach)] / norm;
    }
    return out;
}

SpikeIn spike_in(const IntensityFunction& baseline, int n_segments, const LengthLaw& length_law,
                 const std::vector<double>& multipliers, std::uint64_t seed) {
    if (n_segments < 0)
        throw InputError("spike_in: segment count must be >= 0");
    if (n_segments > 0 && multipliers.empty())
        throw InputError("spike_in: no multipliers given");
    if (length_law.min_bp < 1 || length_law.max_bp < length_law.min_bp)
        throw InputError("spike_in: invalid length range");

    SpikeIn out;
    out.case_intensity = baseline;
    const auto n_bins = static_cast<Position>(baseline.values.size());
    const Position bw = baseline.bin_width;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, multipliers.empty() ? 0 : multipliers.size() - 1);
    const double log_min = std::log(static_cast<double>(length_law.min_bp));
    const double log_max = std::log(static_cast<double>(length_law.max_bp));

    struct Placed {
        Position first_bin;
        Position last_bin;
        double multiplier;
    };
    std::vector<Placed> placed;
    const int max_attempts = 1000 * std::max(1, n_segments);
    int attempts = 0;
    while (static_cast<int>(placed.size()) < n_segments) {
        if (++attempts > max_attempts)
            throw InputError("spike_in: could not place " + std::to_string(n_segments) +
                             " disjoint segments (placed " + std::to_string(placed.size()) + ")");
        const double len_bp = std::exp(log_min + (log_max - log_min) * unit(rng));
        const Position len_bins = std::max<Position>(1, std::llround(len_bp / static_cast<double>(bw)));
        // keep one unspiked bin at each chromosome end so both breakpoints are interior
        if (len_bins + 2 > n_bins)
            continue;
        std::uniform_int_distribution<Position> where(1, n_bins - 1 - len_bins);
        const Position first = where(rng);
        const Position last = first + len_bins - 1;
        const double mult = multipliers[pick(rng)];
        // at least one untouched bin between neighbours keeps breakpoints distinct
        const bool clash = std::any_of(placed.begin(), placed.end(), [&](const Placed& p) {
            return first <= p.last_bin + 1 && p.first_bin <= last + 1;
        });
        if (clash)
            continue;
        placed.push_back({first, last, mult});
    }

    std::sort(placed.begin(), placed.end(), [](const Placed& a, const Placed& b) { return a.first_bin < b.first_bin; });
    for (const auto& p : placed) {
        for (Position b = p.first_bin; b <= p.last_bin; ++b)
            out.case_intensity.values[static_cast<std::size_t>(b)] *= p.multiplier;
        out.truth.segments.push_back({baseline.origin + p.first_bin * bw, baseline.origin + (p.last_bin + 1) * bw - 1,
                                      p.multiplier});
    }
    return out;
}

ReadSet sample_nhpp(const IntensityFunction& intensity, double target_reads, std::uint64_t seed,
                    const std::string& chromosome) {
    if (target_reads < 0.0)
        throw InputError("sample_nhpp: target read count must be >= 0");
    ReadSet out;
    out.chromosome = chromosome;
    const double total = intensity.total();
    if (total <= 0.0 || target_reads == 0.0)
        return out;

    const double scale = target_reads / total;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Position> offset(0, intensity.bin_width - 1);
    std::vector<Position> bin_reads;
    for (std::size_t b = 0; b < intensity.values.size(); ++b) {
        const double mean = intensity.values[b] * scale;
        if (mean <= 0.0)
            continue;
        std::poisson_distribution<long long> count(mean);
        const long long k = count(rng);
        const Position base = intensity.origin + static_cast<Position>(b) * intensity.bin_width;
        bin_reads.clear();
        for (long long r = 0; r < k; ++r)
            bin_reads.push_back(base + offset(rng));
        std::sort(bin_reads.begin(), bin_reads.end());
        out.positions.insert(out.positions.end(), bin_reads.begin(), bin_reads.end());
    }
    return out;
}

IntensityFunction sinusoid_intensity(Position length, Position bin_width, Position period, double amplitude) {
    if (length < 1 || bin_width < 1 || period < 1)
        throw InputError("sinusoid_intensity: length, bin width and period must be positive");
    if (amplitude < 0.0 || amplitude >= 1.0)
        throw InputError("sinusoid_intensity: amplitude must lie in [0, 1)");
    IntensityFunction out;
    out.origin = 1;
    out.bin_width = bin_width;
    const Position n_bins = (length + bin_width - 1) / bin_width;
    out.values.resize(static_cast<std::size_t>(n_bins));
    for (Position b = 0; b < n_bins; ++b) {
        const double centre = (static_cast<double>(b) + 0.5) * static_cast<double>(bin_width);
        out.values[static_cast<std::size_t>(b)] =
            static_cast<double>(bin_width) *
            (1.0 + amplitude * std::sin(2.0 * std::numbers::pi * centre / static_cast<double>(period)));
    }
    return out;
}

} // namespace seqscan
