#pragma once

#include "seqscan/evaluation.hpp"
#include "seqscan/interval_stats.hpp"
#include "seqscan/model_selection.hpp"
#include "seqscan/posterior.hpp"
#include "seqscan/segmenter.hpp"
#include "seqscan/simulator.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace seqscan {

struct RunConfig {
    StatKind stat = StatKind::Glr;
    int grid_step = 10;
    int max_k = 50;
    double alpha = 1.0;
    double beta = 1.0;
    double ci_level = 0.95;
    double epsilon = 1e-4;
    std::uint64_t seed = 1;
    int threads = 1;
    bool band = true;

    void validate() const;
};

/// Thread budget: SEQSCAN_THREADS overrides the configured value.
int effective_threads(int configured);

/// Everything computed for one chromosome.
struct ChromosomeResult {
    std::string chrom;
    CombinedProcess process;
    ChangePointSequence sequence;
    Selection selection;
    std::vector<GenomicSegment> segments;
    std::optional<PosteriorBand> band;
};

/// merge -> cbs_segment -> select_k -> to_genomic -> ci_band on one chromosome.
ChromosomeResult segment_chromosome(CombinedProcess process, const RunConfig& config, int band_threads = 1);

/// Run `segment_chromosome` over paired read sets. Chromosomes with fewer than
/// 10 merged reads are skipped with a warning on stderr. Results keep input order
/// and do not depend on the thread count.
std::vector<ChromosomeResult> segment_all(const std::vector<ReadSet>& case_reads,
                                          const std::vector<ReadSet>& control_reads, const RunConfig& config);

struct SimulationConfig {
    int chromosomes = 1;
    Position chrom_length = 20'000'000;
    double case_reads = 1e5;
    double control_reads = 1e5;
    double normal_reads = 1e5;  // reads of the sample the baseline is smoothed from
    Position bin_width = 1000;
    double bandwidth = 10.0;
    Position period = 3'000'000;
    double amplitude = 0.3;
    int n_segments = 50;
    LengthLaw length_law{100'000, 250'000};
    std::vector<double> multipliers{1.5, 0.5};
    std::uint64_t seed = 1;
    /// Optional real normal sample to smooth instead of the synthetic one.
    std::optional<std::vector<ReadSet>> normal_sample;
};

struct SimulatedChromosome {
    ReadSet case_reads;
    ReadSet control_reads;
    SpikeInTruth truth;
};

std::vector<SimulatedChromosome> simulate(const SimulationConfig& config, int threads = 1);

/// Which change points the evaluation scores.
enum class Caller { Segmenter, Truth, None };
Caller parse_caller(std::string_view name);

struct EvaluationConfig {
    SimulationConfig simulation;
    RunConfig run;
    int replicates = 10;
    std::int64_t tolerance_reads = 100;
    std::optional<std::int64_t> tolerance_bp;  // match on genomic distance instead
    Caller caller = Caller::Segmenter;
};

struct ReplicateResult {
    int replicate;
    MatchReport report;
};

std::vector<ReplicateResult> evaluate(const EvaluationConfig& config);

namespace cli {

// File-producing entry points behind the command line subcommands.
struct SegmentFiles {
    std::filesystem::path case_path;
    std::filesystem::path control_path;
    std::filesystem::path labeled_path;  // single-file mode when set
    std::filesystem::path out_dir;
};

void run_segment(const SegmentFiles& files, const RunConfig& config);
void run_mbic_curve(const SegmentFiles& files, const RunConfig& config);
void run_simulate(const SimulationConfig& config, const std::filesystem::path& out_dir, int threads);
void run_evaluate(const EvaluationConfig& config, const std::filesystem::path& out_dir);

} // namespace cli

} // namespace seqscan
