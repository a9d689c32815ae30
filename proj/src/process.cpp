#include "seqscan/process.hpp"

#include "seqscan/errors.hpp"

#include <algorithm>
#include <limits>

namespace seqscan {

bool ReadSet::is_sorted() const {
    return std::is_sorted(positions.begin(), positions.end());
}

CombinedProcess::CombinedProcess(std::string chromosome, std::vector<Position> positions,
                                 std::vector<std::uint8_t> labels)
    : chromosome_(std::move(chromosome)), positions_(std::move(positions)), labels_(std::move(labels)) {
    if (positions_.size() != labels_.size())
        throw InputError("combined process: " + std::to_string(positions_.size()) + " positions but " +
                         std::to_string(labels_.size()) + " labels");
    if (!std::is_sorted(positions_.begin(), positions_.end()))
        throw InputError("combined process: positions are not sorted");
    prefix_.reserve(labels_.size() + 1);
    for (auto z : labels_) {
        if (z > 1)
            throw InputError("combined process: labels must be 0 or 1");
        prefix_.push_back(prefix_.back() + z);
    }
    for (std::size_t k = 0; k < positions_.size(); ++k)
        if (k == 0 || positions_[k] != positions_[k - 1])
            ++unique_positions_;
}

CombinedProcess CombinedProcess::with_positions(std::vector<Position> positions) const {
    return CombinedProcess(chromosome_, std::move(positions), labels_);
}

CombinedProcess merge_reads(const ReadSet& case_reads, const ReadSet& control_reads) {
    if (case_reads.chromosome != control_reads.chromosome)
        throw InputError("merge_reads: chromosome mismatch ('" + case_reads.chromosome + "' vs '" +
                         control_reads.chromosome + "')");
    if (!case_reads.is_sorted() || !control_reads.is_sorted())
        throw InputError("merge_reads: read positions must be sorted");

    const auto& u = case_reads.positions;
    const auto& v = control_reads.positions;
    std::vector<Position> w;
    std::vector<std::uint8_t> z;
    w.reserve(u.size() + v.size());
    z.reserve(u.size() + v.size());

    std::size_t a = 0, b = 0;
    while (a < u.size() || b < v.size()) {
        // control wins ties
        if (b < v.size() && (a == u.size() || v[b] <= u[a])) {
            w.push_back(v[b++]);
            z.push_back(0);
        } else {
            w.push_back(u[a++]);
            z.push_back(1);
        }
    }
    return CombinedProcess(case_reads.chromosome, std::move(w), std::move(z));
}

double relative_copy_number(double p) {
    if (p >= 1.0)
        return std::numeric_limits<double>::infinity();
    return p / (1.0 - p);
}

void validate_change_points(std::span<const Index> taus, Index m) {
    Index prev = 1;
    for (Index tau : taus) {
        if (tau <= prev || tau > m)
            throw InvariantViolation("change points must be strictly increasing within (1, m]; got " +
                                     std::to_string(tau) + " after " + std::to_string(prev) +
                                     " with m=" + std::to_string(m));
        prev = tau;
    }
}

std::vector<IndexSegment> index_segments(std::span<const Index> taus, Index m) {
    validate_change_points(taus, m);
    std::vector<IndexSegment> out;
    out.reserve(taus.size() + 1);
    Index start = 1;
    for (Index tau : taus) {
        out.push_back({start, tau - 1});
        start = tau;
    }
    out.push_back({start, m});
    return out;
}

std::vector<GenomicSegment> to_genomic(std::span<const Index> taus, const CombinedProcess& process) {
    const Index m = process.size();
    if (m == 0) {
        if (!taus.empty())
            throw InvariantViolation("to_genomic: change points on an empty process");
        return {};
    }
    std::vector<GenomicSegment> out;
    for (auto [start, end] : index_segments(taus, m)) {
        GenomicSegment seg;
        seg.start_idx = start;
        seg.end_idx = end;
        seg.start_bp = process.position(start);
        seg.end_bp = process.position(end);
        seg.n_case = process.successes_in(start, end);
        seg.n_control = (end - start + 1) - seg.n_case;
        seg.p_hat = static_cast<double>(seg.n_case) / static_cast<double>(end - start + 1);
        seg.rel_cn = relative_copy_number(seg.p_hat);
        out.push_back(seg);
    }
    return out;
}

} // namespace seqscan
