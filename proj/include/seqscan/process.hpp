#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace seqscan {

/// 1-based index into the merged read sequence.
using Index = std::int64_t;
/// Genomic coordinate in base pairs (1-based).
using Position = std::int64_t;

/// Mapped read start positions for one sample on one chromosome.
struct ReadSet {
    std::string chromosome;
    std::vector<Position> positions;  // sorted non-decreasing, duplicates allowed

    bool is_sorted() const;
};

/**
 * Case and control reads merged into one position-ordered stream.
 *
 * Each merged read carries a label (1 = case, 0 = control). Reads at the same
 * coordinate are ordered control first. All scan statistics are functions of
 * the labels only; positions serve as the lookup table back to the genome.
 */
class CombinedProcess {
public:
    CombinedProcess() = default;

    /// Build from already merged data. Throws InputError if sizes differ,
    /// positions are not sorted or labels are not 0/1.
    CombinedProcess(std::string chromosome, std::vector<Position> positions,
                    std::vector<std::uint8_t> labels);

    const std::string& chromosome() const { return chromosome_; }
    Index size() const { return static_cast<Index>(labels_.size()); }
    Index case_count() const { return prefix_.empty() ? 0 : prefix_.back(); }
    Index control_count() const { return size() - case_count(); }
    Index unique_positions() const { return unique_positions_; }

    std::span<const Position> positions() const { return positions_; }
    std::span<const std::uint8_t> labels() const { return labels_; }

    /// Position of read t (1-based).
    Position position(Index t) const { return positions_[static_cast<std::size_t>(t - 1)]; }
    /// Label of read t (1-based).
    int label(Index t) const { return labels_[static_cast<std::size_t>(t - 1)]; }

    /// S_t: number of case reads among the first t reads, t in [0, m].
    Index successes(Index t) const { return prefix_[static_cast<std::size_t>(t)]; }
    /// Case reads in [i, j], 1-based inclusive.
    Index successes_in(Index i, Index j) const { return successes(j) - successes(i - 1); }

    /// Same labels, positions replaced (used for equivariance checks).
    CombinedProcess with_positions(std::vector<Position> positions) const;

private:
    std::string chromosome_;
    std::vector<Position> positions_;
    std::vector<std::uint8_t> labels_;
    std::vector<Index> prefix_{0};
    Index unique_positions_ = 0;
};

/// Merge two sorted read sets from the same chromosome. Ties put control first.
CombinedProcess merge_reads(const ReadSet& case_reads, const ReadSet& control_reads);

/// One segment of a segmentation expressed on both scales.
struct GenomicSegment {
    Position start_bp = 0;
    Position end_bp = 0;
    Index start_idx = 0;
    Index end_idx = 0;
    Index n_case = 0;
    Index n_control = 0;
    double p_hat = 0.0;
    double rel_cn = 0.0;  // +inf when p_hat == 1
};

/// Relative copy number p/(1-p); +inf at p == 1.
double relative_copy_number(double p);

/**
 * Check that `taus` is strictly increasing with every entry in [2, m].
 * Each entry is the first index of a new segment.
 */
void validate_change_points(std::span<const Index> taus, Index m);

/// Segment bounds [start, end] implied by interior change points.
struct IndexSegment {
    Index start;
    Index end;
};
std::vector<IndexSegment> index_segments(std::span<const Index> taus, Index m);

/// Map index change points to genomic segments.
std::vector<GenomicSegment> to_genomic(std::span<const Index> taus, const CombinedProcess& process);

} // namespace seqscan
