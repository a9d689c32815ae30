// seqscan command line front end.
#include "seqscan/errors.hpp"
#include "seqscan/io.hpp"
#include "seqscan/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

namespace {

using namespace seqscan;

struct RunFlags {
    std::string stat = "glr";
    int max_k = 0;  // 0 selects the subcommand default
    RunConfig config;
};

void add_run_flags(CLI::App* app, RunFlags& f, bool with_band) {
    app->add_option("--stat", f.stat, "Scan statistic: glr or score")
        ->check(CLI::IsMember({"glr", "score"}))
        ->capture_default_str();
    app->add_option("--grid-step", f.config.grid_step, "Grid refinement factor G (>= 2)")->capture_default_str();
    app->add_option("--max-k", f.max_k, "Maximum number of change points (default 50; evaluate: max(50, 4 x segments))");
    app->add_option("--seed", f.config.seed, "Seed")->capture_default_str();
    app->add_option("--threads", f.config.threads, "Worker threads (SEQSCAN_THREADS overrides)")->capture_default_str();
    if (!with_band)
        return;
    app->add_option("--alpha", f.config.alpha, "Beta prior alpha")->capture_default_str();
    app->add_option("--beta", f.config.beta, "Beta prior beta")->capture_default_str();
    app->add_option("--ci-level", f.config.ci_level, "Credible level of the band")->capture_default_str();
    app->add_option("--epsilon", f.config.epsilon, "Posterior weight truncation")->capture_default_str();
}

RunConfig finish_run(const RunFlags& f, int default_max_k) {
    RunConfig c = f.config;
    c.stat = parse_stat_kind(f.stat);
    c.max_k = f.max_k > 0 ? f.max_k : default_max_k;
    c.validate();
    return c;
}

void add_sim_flags(CLI::App* app, SimulationConfig& s, std::string& baseline_path) {
    app->add_option("--chromosomes", s.chromosomes, "Number of synthetic chromosomes")->capture_default_str();
    app->add_option("--chrom-length", s.chrom_length, "Synthetic chromosome length (bp)")->capture_default_str();
    app->add_option("--case-reads", s.case_reads, "Expected case reads per chromosome")->capture_default_str();
    app->add_option("--control-reads", s.control_reads, "Expected control reads per chromosome")
        ->capture_default_str();
    app->add_option("--normal-reads", s.normal_reads, "Reads in the synthetic normal sample")->capture_default_str();
    app->add_option("--baseline", baseline_path, "Reads TSV of a normal sample to smooth instead")
        ->check(CLI::ExistingFile);
    app->add_option("--bin-width", s.bin_width, "Bin width (bp)")->capture_default_str();
    app->add_option("--bandwidth", s.bandwidth, "Smoothing kernel sd (bins)")->capture_default_str();
    app->add_option("--period", s.period, "Sinusoid period (bp)")->capture_default_str();
    app->add_option("--amplitude", s.amplitude, "Sinusoid relative amplitude")->capture_default_str();
    app->add_option("--segments", s.n_segments, "Spiked segments per chromosome")->capture_default_str();
    app->add_option("--min-length", s.length_law.min_bp, "Shortest spiked segment (bp)")->capture_default_str();
    app->add_option("--max-length", s.length_law.max_bp, "Longest spiked segment (bp)")->capture_default_str();
    app->add_option("--multipliers", s.multipliers, "Copy number multipliers")->delimiter(',')->capture_default_str();
}

void load_baseline(SimulationConfig& s, const std::string& path) {
    if (path.empty())
        return;
    const auto table = io::read_reads_tsv(path);
    std::vector<ReadSet> sets;
    for (const auto& chrom : table.order)
        sets.push_back(table.by_chrom.at(chrom));
    s.chromosomes = static_cast<int>(sets.size());
    s.normal_sample = std::move(sets);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Case/control change point segmentation of sequencing read streams"};
    app.require_subcommand(1);

    cli::SegmentFiles files;
    files.out_dir = ".";
    RunFlags seg_flags;
    bool no_band = false;
    auto* segment = app.add_subcommand("segment", "Segment, select K by mBIC and compute credible bands");
    segment->add_option("--case", files.case_path, "Case reads TSV (chrom, position)")->check(CLI::ExistingFile);
    segment->add_option("--control", files.control_path, "Control reads TSV")->check(CLI::ExistingFile);
    segment->add_option("--input", files.labeled_path, "Labeled reads TSV (chrom, position, case|control)")
        ->check(CLI::ExistingFile);
    segment->add_option("--out-dir", files.out_dir, "Output directory")->capture_default_str();
    segment->add_flag("--no-band", no_band, "Skip the credible band");
    add_run_flags(segment, seg_flags, true);

    cli::SegmentFiles curve_files;
    curve_files.out_dir = ".";
    RunFlags curve_flags;
    auto* curve = app.add_subcommand("mbic-curve", "Write the mBIC curve over K");
    curve->add_option("--case", curve_files.case_path, "Case reads TSV")->check(CLI::ExistingFile);
    curve->add_option("--control", curve_files.control_path, "Control reads TSV")->check(CLI::ExistingFile);
    curve->add_option("--input", curve_files.labeled_path, "Labeled reads TSV")->check(CLI::ExistingFile);
    curve->add_option("--out-dir", curve_files.out_dir, "Output directory")->capture_default_str();
    add_run_flags(curve, curve_flags, false);

    SimulationConfig sim;
    std::string sim_baseline;
    std::string sim_out = ".";
    int sim_threads = 1;
    auto* simulate = app.add_subcommand("simulate", "Spike-in simulation of case and control reads");
    add_sim_flags(simulate, sim, sim_baseline);
    simulate->add_option("--seed", sim.seed, "Seed")->capture_default_str();
    simulate->add_option("--threads", sim_threads, "Worker threads")->capture_default_str();
    simulate->add_option("--out-dir", sim_out, "Output directory")->capture_default_str();

    EvaluationConfig eval;
    std::string eval_baseline;
    std::string eval_out = ".";
    std::string caller = "segmenter";
    std::int64_t tolerance_bp = 0;
    RunFlags eval_flags;
    auto* evaluate = app.add_subcommand("evaluate", "Simulate replicates, segment and score against truth");
    add_sim_flags(evaluate, eval.simulation, eval_baseline);
    add_run_flags(evaluate, eval_flags, false);
    evaluate->add_option("--replicates", eval.replicates, "Number of replicates")->capture_default_str();
    evaluate->add_option("--tolerance-reads", eval.tolerance_reads, "Match tolerance in reads")
        ->capture_default_str();
    auto* tol_bp = evaluate->add_option("--tolerance-bp", tolerance_bp, "Match tolerance in bp instead of reads");
    evaluate->add_option("--caller", caller, "segmenter, or the truth/none reference stubs")
        ->check(CLI::IsMember({"segmenter", "truth", "none"}))
        ->capture_default_str();
    evaluate->add_option("--out-dir", eval_out, "Output directory")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (segment->parsed()) {
            auto config = finish_run(seg_flags, 50);
            config.band = !no_band;
            cli::run_segment(files, config);
        } else if (curve->parsed()) {
            auto config = finish_run(curve_flags, 50);
            config.band = false;
            cli::run_mbic_curve(curve_files, config);
        } else if (simulate->parsed()) {
            load_baseline(sim, sim_baseline);
            cli::run_simulate(sim, sim_out, sim_threads);
        } else if (evaluate->parsed()) {
            load_baseline(eval.simulation, eval_baseline);
            eval.run = finish_run(eval_flags, std::max(50, 4 * eval.simulation.n_segments));
            eval.simulation.seed = eval.run.seed;
            eval.caller = parse_caller(caller);
            if (tol_bp->count() > 0)
                eval.tolerance_bp = tolerance_bp;
            cli::run_evaluate(eval, eval_out);
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
