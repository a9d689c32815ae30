#include "seqscan/pipeline.hpp"

#include "seqscan/errors.hpp"
#include "seqscan/io.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <mutex>
#include <thread>

namespace seqscan {

void RunConfig::validate() const {
    if (grid_step < 2)
        throw InputError("--grid-step must be >= 2");
    if (max_k < 1)
        throw InputError("--max-k must be >= 1");
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw InputError("--alpha and --beta must be positive");
    if (!(ci_level > 0.0 && ci_level < 1.0))
        throw InputError("--ci-level must lie in (0, 1)");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw InputError("--epsilon must lie in (0, 1)");
    if (threads < 1)
        throw InputError("--threads must be >= 1");
}

int effective_threads(int configured) {
    if (const char* env = std::getenv("SEQSCAN_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v >= 1)
                return v;
        } catch (const std::exception&) {
        }
        std::cerr << "warning: ignoring invalid SEQSCAN_THREADS='" << env << "'\n";
    }
    return std::max(1, configured);
}

namespace {

// Work queue over [0, n); each index runs start to finish on one worker.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, threads)), n);
    if (workers <= 1) {
        for (std::size_t k = 0; k < n; ++k)
            fn(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < n; k = next++) {
                try {
                    fn(k);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        });
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

constexpr Index kMinReads = 10;

} // namespace

ChromosomeResult segment_chromosome(CombinedProcess process, const RunConfig& config, int band_threads) {
    ChromosomeResult r;
    r.chrom = process.chromosome();
    SegmentOptions opts;
    opts.kind = config.stat;
    opts.grid_factor = config.grid_step;
    opts.max_k = config.max_k;
    r.sequence = cbs_segment(process, opts);
    r.selection = select_k(process, r.sequence);
    r.segments = to_genomic(r.selection.taus, process);
    if (config.band) {
        BandOptions bo;
        bo.alpha = config.alpha;
        bo.beta = config.beta;
        bo.level = config.ci_level;
        bo.epsilon = config.epsilon;
        bo.threads = band_threads;
        r.band = ci_band(process, r.selection.taus, bo);
    }
    r.process = std::move(process);
    return r;
}

std::vector<ChromosomeResult> segment_all(const std::vector<ReadSet>& case_reads,
                                          const std::vector<ReadSet>& control_reads, const RunConfig& config) {
    config.validate();
    std::vector<std::string> order;
    auto find = [](const std::vector<ReadSet>& sets, const std::string& chrom) -> const ReadSet* {
        for (const auto& s : sets)
            if (s.chromosome == chrom)
                return &s;
        return nullptr;
    };
    for (const auto& s : case_reads)
        if (std::find(order.begin(), order.end(), s.chromosome) == order.end())
            order.push_back(s.chromosome);
    for (const auto& s : control_reads)
        if (std::find(order.begin(), order.end(), s.chromosome) == order.end())
            order.push_back(s.chromosome);

    std::vector<CombinedProcess> processes;
    for (const auto& chrom : order) {
        const ReadSet empty{chrom, {}};
        const ReadSet* c = find(case_reads, chrom);
        const ReadSet* v = find(control_reads, chrom);
        auto proc = merge_reads(c ? *c : empty, v ? *v : empty);
        if (proc.size() < kMinReads) {
            std::cerr << "warning: skipping chromosome '" << chrom << "' with " << proc.size() << " reads (< "
                      << kMinReads << ")\n";
            continue;
        }
        processes.push_back(std::move(proc));
    }

    const int threads = effective_threads(config.threads);
    const int band_threads = processes.size() == 1 ? threads : 1;
    std::vector<ChromosomeResult> results(processes.size());
    parallel_for(processes.size(), threads, [&](std::size_t k) {
        results[k] = segment_chromosome(std::move(processes[k]), config, band_threads);
    });
    return results;
}

std::vector<SimulatedChromosome> simulate(const SimulationConfig& config, int threads) {
    if (config.chromosomes < 1)
        throw InputError("simulate: need at least one chromosome");
    if (config.normal_sample && config.normal_sample->size() < static_cast<std::size_t>(config.chromosomes))
        throw InputError("simulate: baseline sample has fewer chromosomes than requested");

    std::vector<SimulatedChromosome> out(static_cast<std::size_t>(config.chromosomes));
    parallel_for(out.size(), threads, [&](std::size_t c) {
        const std::uint64_t base = derive_seed(config.seed, c);
        ReadSet normal;
        std::string chrom = "chr" + std::to_string(c + 1);
        if (config.normal_sample) {
            normal = (*config.normal_sample)[c];
            chrom = normal.chromosome;
        } else {
            const auto truth_rate =
                sinusoid_intensity(config.chrom_length, config.bin_width, config.period, config.amplitude);
            normal = sample_nhpp(truth_rate, config.normal_reads, derive_seed(base, 0), chrom);
        }
        const auto baseline = estimate_baseline(normal, config.bin_width, config.bandwidth);
        auto spiked = spike_in(baseline, config.n_segments, config.length_law, config.multipliers, derive_seed(base, 1));
        spiked.truth.chromosome = chrom;
        auto& sim = out[c];
        sim.case_reads = sample_nhpp(spiked.case_intensity, config.case_reads, derive_seed(base, 2), chrom);
        sim.control_reads = sample_nhpp(baseline, config.control_reads, derive_seed(base, 3), chrom);
        sim.truth = std::move(spiked.truth);
    });
    return out;
}

Caller parse_caller(std::string_view name) {
    if (name == "segmenter")
        return Caller::Segmenter;
    if (name == "truth")
        return Caller::Truth;
    if (name == "none")
        return Caller::None;
    throw InputError("unknown caller '" + std::string(name) + "' (expected segmenter, truth or none)");
}

namespace {

void accumulate(MatchReport& total, const MatchReport& part) {
    total.pairs.insert(total.pairs.end(), part.pairs.begin(), part.pairs.end());
    total.n_called += part.n_called;
    total.n_true += part.n_true;
    total.unmatched_called += part.unmatched_called;
    total.unmatched_true += part.unmatched_true;
    total.total_distance += part.total_distance;
}

void finish(MatchReport& r) {
    const auto matched = r.pairs.size();
    r.recall = r.n_true == 0 ? 1.0 : static_cast<double>(matched) / static_cast<double>(r.n_true);
    if (r.n_called == 0)
        r.precision = r.n_true == 0 ? 1.0 : 0.0;
    else
        r.precision = static_cast<double>(matched) / static_cast<double>(r.n_called);
}

} // namespace

std::vector<ReplicateResult> evaluate(const EvaluationConfig& config) {
    if (config.replicates < 1)
        throw InputError("evaluate: need at least one replicate");
    RunConfig run = config.run;
    run.band = false;
    run.validate();
    const int threads = effective_threads(run.threads);

    std::vector<ReplicateResult> out(static_cast<std::size_t>(config.replicates));
    parallel_for(out.size(), threads, [&](std::size_t rep) {
        SimulationConfig sc = config.simulation;
        sc.seed = derive_seed(config.simulation.seed, 1000 + rep);
        const auto sims = simulate(sc, 1);
        MatchReport total;
        for (const auto& sim : sims) {
            auto proc = merge_reads(sim.case_reads, sim.control_reads);
            const auto bps = sim.truth.breakpoints();
            const auto truth_idx = breakpoints_to_indices(bps, proc);

            std::vector<Index> called;
            if (config.caller == Caller::Truth) {
                called = truth_idx;
            } else if (config.caller == Caller::Segmenter && proc.size() >= kMinReads) {
                RunConfig per = run;
                called = segment_chromosome(proc, per).selection.taus;
            }

            if (config.tolerance_bp) {
                std::vector<std::int64_t> called_bp;
                for (Index tau : called)
                    called_bp.push_back(tau <= proc.size() ? proc.position(tau) : proc.positions().back() + 1);
                accumulate(total, match_changepoints(called_bp, bps, *config.tolerance_bp));
            } else {
                accumulate(total, match_changepoints(called, truth_idx, config.tolerance_reads));
            }
        }
        finish(total);
        out[rep] = {static_cast<int>(rep), std::move(total)};
    });
    return out;
}

namespace cli {

namespace {

std::pair<std::vector<ReadSet>, std::vector<ReadSet>> load_inputs(const SegmentFiles& files) {
    io::ReadTable case_t, control_t;
    if (!files.labeled_path.empty()) {
        std::tie(case_t, control_t) = io::read_labeled_reads_tsv(files.labeled_path);
    } else {
        if (files.case_path.empty() || files.control_path.empty())
            throw InputError("need --case and --control, or --input with a label column");
        case_t = io::read_reads_tsv(files.case_path);
        control_t = io::read_reads_tsv(files.control_path);
    }
    std::vector<ReadSet> c, v;
    for (const auto& chrom : case_t.order)
        c.push_back(case_t.by_chrom.at(chrom));
    for (const auto& chrom : control_t.order)
        v.push_back(control_t.by_chrom.at(chrom));
    return {std::move(c), std::move(v)};
}

void write_curves(const std::vector<ChromosomeResult>& results, const std::filesystem::path& out_dir) {
    std::vector<io::ChromCurve> curves;
    for (const auto& r : results)
        curves.push_back({r.chrom, r.selection.curve});
    io::write_atomic(out_dir / "mbic.tsv", io::mbic_tsv(curves));
}

} // namespace

void run_segment(const SegmentFiles& files, const RunConfig& config) {
    const auto [case_reads, control_reads] = load_inputs(files);
    const auto results = segment_all(case_reads, control_reads, config);

    std::vector<io::ChromSegments> segs;
    std::vector<io::ChromBand> bands;
    for (const auto& r : results) {
        segs.push_back({r.chrom, r.segments});
        if (r.band)
            bands.push_back({r.chrom, *r.band});
        std::cerr << r.chrom << ": " << r.process.size() << " reads, K_hat = " << r.selection.k_hat << "\n";
    }
    io::write_atomic(files.out_dir / "segments.tsv", io::segments_tsv(segs));
    write_curves(results, files.out_dir);
    if (config.band)
        io::write_atomic(files.out_dir / "band.tsv", io::band_tsv(bands));
}

void run_mbic_curve(const SegmentFiles& files, const RunConfig& config) {
    RunConfig cfg = config;
    cfg.band = false;
    const auto [case_reads, control_reads] = load_inputs(files);
    write_curves(segment_all(case_reads, control_reads, cfg), files.out_dir);
}

void run_simulate(const SimulationConfig& config, const std::filesystem::path& out_dir, int threads) {
    const auto sims = simulate(config, effective_threads(threads));
    std::vector<ReadSet> case_reads, control_reads;
    std::vector<SpikeInTruth> truth;
    for (const auto& s : sims) {
        case_reads.push_back(s.case_reads);
        control_reads.push_back(s.control_reads);
        truth.push_back(s.truth);
    }
    io::write_atomic(out_dir / "case.tsv", io::reads_tsv(case_reads));
    io::write_atomic(out_dir / "control.tsv", io::reads_tsv(control_reads));
    io::write_atomic(out_dir / "truth.tsv", io::truth_tsv(truth));
}

void run_evaluate(const EvaluationConfig& config, const std::filesystem::path& out_dir) {
    const auto results = evaluate(config);
    std::vector<io::ReportRow> rows;
    double recall = 0.0, precision = 0.0;
    for (const auto& r : results) {
        rows.push_back({r.replicate, r.report});
        recall += r.report.recall;
        precision += r.report.precision;
    }
    io::write_atomic(out_dir / "report.tsv", io::report_tsv(rows));
    const auto n = static_cast<double>(results.size());
    std::cerr << "mean recall " << recall / n << ", mean precision " << precision / n << " over " << results.size()
              << " replicates\n";
}

} // namespace cli

} // namespace seqscan
