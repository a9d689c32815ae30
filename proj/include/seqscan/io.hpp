#pragma once

#include "seqscan/evaluation.hpp"
#include "seqscan/model_selection.hpp"
#include "seqscan/posterior.hpp"
#include "seqscan/process.hpp"
#include "seqscan/simulator.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace seqscan::io {

// All files are tab separated with a single header line starting with '#'.
// Coordinates are 1-based inclusive.

/// Reads of one sample keyed by chromosome, in order of first appearance.
struct ReadTable {
    std::vector<std::string> order;
    std::map<std::string, ReadSet> by_chrom;

    ReadSet& ensure(const std::string& chrom);
    void add(const std::string& chrom, Position pos);
    void sort_all();
};

/// Columns: chrom, position.
ReadTable read_reads_tsv(const std::filesystem::path& path);

/// Columns: chrom, position, label (case|control).
std::pair<ReadTable, ReadTable> read_labeled_reads_tsv(const std::filesystem::path& path);

/// Shortest round-trip decimal form; "inf" for +infinity.
std::string format_double(double v);

/// Write through a temporary file in the same directory, then rename.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

std::string reads_tsv(const std::vector<ReadSet>& reads);
std::string truth_tsv(const std::vector<SpikeInTruth>& truth);
std::vector<SpikeInTruth> read_truth_tsv(const std::filesystem::path& path);

struct ChromSegments {
    std::string chrom;
    std::vector<GenomicSegment> segments;
};
std::string segments_tsv(const std::vector<ChromSegments>& rows);

struct ChromCurve {
    std::string chrom;
    MbicCurve curve;
};
std::string mbic_tsv(const std::vector<ChromCurve>& rows);

struct ChromBand {
    std::string chrom;
    PosteriorBand band;
};
std::string band_tsv(const std::vector<ChromBand>& rows);

struct ReportRow {
    int replicate;
    MatchReport report;
};
std::string report_tsv(const std::vector<ReportRow>& rows);

} // namespace seqscan::io
