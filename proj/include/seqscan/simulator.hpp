#pragma once

#include "seqscan/process.hpp"

#include <cstdint>
#include <vector>

namespace seqscan {

/// Piecewise-constant intensity. Bin b covers
/// [origin + b * bin_width, origin + (b + 1) * bin_width - 1].
struct IntensityFunction {
    Position origin = 1;
    Position bin_width = 1000;
    std::vector<double> values;  // expected reads per bin, >= 0

    double total() const;
    Position end() const { return origin + bin_width * static_cast<Position>(values.size()) - 1; }
};

struct SpikedSegment {
    Position start_bp;
    Position end_bp;  // inclusive
    double multiplier;
};

struct SpikeInTruth {
    std::string chromosome;
    std::vector<SpikedSegment> segments;  // sorted, disjoint

    /// start_bp and end_bp + 1 of every segment, ascending.
    std::vector<Position> breakpoints() const;
    std::size_t n_segments() const { return segments.size(); }
};

/// Segment length distribution: log-uniform on [min_bp, max_bp].
struct LengthLaw {
    Position min_bp = 20'000;
    Position max_bp = 200'000;
};

/// Bin the reads and smooth with a truncated (4 sigma) Gaussian kernel whose
/// standard deviation is `bandwidth` bins. The kernel is renormalised over the
/// bins it reaches, so the total count is preserved.
IntensityFunction estimate_baseline(const ReadSet& control, Position bin_width, double bandwidth);

struct SpikeIn {
    IntensityFunction case_intensity;
    SpikeInTruth truth;
};

/// Scale `n_segments` disjoint, bin-aligned segments of the baseline by
/// multipliers drawn uniformly from `multipliers`.
SpikeIn spike_in(const IntensityFunction& baseline, int n_segments, const LengthLaw& length_law,
                 const std::vector<double>& multipliers, std::uint64_t seed);

/// Sample read positions: Poisson counts per bin, uniform positions within a bin.
ReadSet sample_nhpp(const IntensityFunction& intensity, double target_reads, std::uint64_t seed,
                    const std::string& chromosome = "chr1");

/// A smooth synthetic rate 1 + amplitude * sin(2 pi x / period) on [1, length].
IntensityFunction sinusoid_intensity(Position length, Position bin_width, Position period, double amplitude);

/// Deterministic seed derivation for independent streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

} // namespace seqscan
