#include "seqscan/errors.hpp"
#include "seqscan/io.hpp"
#include "seqscan/pipeline.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace seqscan;

namespace {

StatKind stat_arg(const std::string& name) { return parse_stat_kind(name); }

py::dict segment_dict(const GenomicSegment& s) {
    py::dict d;
    d["start_bp"] = s.start_bp;
    d["end_bp"] = s.end_bp;
    d["start_idx"] = s.start_idx;
    d["end_idx"] = s.end_idx;
    d["n_case"] = s.n_case;
    d["n_control"] = s.n_control;
    d["p_hat"] = s.p_hat;
    d["rel_cn"] = s.rel_cn;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Case/control change point segmentation of sequencing read streams";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p)
                std::rethrow_exception(p);
        } catch (const InputError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const InvariantViolation& e) {
            PyErr_SetString(PyExc_RuntimeError, e.what());
        }
    });

    py::class_<CombinedProcess>(m, "CombinedProcess")
        .def(py::init<std::string, std::vector<Position>, std::vector<std::uint8_t>>(), py::arg("chromosome"),
             py::arg("positions"), py::arg("labels"))
        .def_property_readonly("chromosome", &CombinedProcess::chromosome)
        .def_property_readonly("size", &CombinedProcess::size)
        .def_property_readonly("case_count", &CombinedProcess::case_count)
        .def_property_readonly("control_count", &CombinedProcess::control_count)
        .def_property_readonly("unique_positions", &CombinedProcess::unique_positions)
        .def_property_readonly("positions",
                               [](const CombinedProcess& p) {
                                   return std::vector<Position>(p.positions().begin(), p.positions().end());
                               })
        .def_property_readonly("labels",
                               [](const CombinedProcess& p) {
                                   return std::vector<int>(p.labels().begin(), p.labels().end());
                               })
        .def("successes", &CombinedProcess::successes, py::arg("t"))
        .def("__len__", &CombinedProcess::size);

    m.def(
        "merge_reads",
        [](std::vector<Position> case_pos, std::vector<Position> control_pos, const std::string& chrom) {
            return merge_reads({chrom, std::move(case_pos)}, {chrom, std::move(control_pos)});
        },
        py::arg("case"), py::arg("control"), py::arg("chromosome") = "chr1",
        "Merge sorted case and control read positions (ties put control first).");

    py::class_<IntervalStat>(m, "IntervalStat")
        .def_readonly("i", &IntervalStat::i)
        .def_readonly("j", &IntervalStat::j)
        .def_readonly("s_ij", &IntervalStat::s_ij)
        .def_readonly("sigma_ij", &IntervalStat::sigma_ij)
        .def_readonly("t_ij", &IntervalStat::t_ij)
        .def_readonly("lambda_ij", &IntervalStat::lambda_ij)
        .def_readonly("p_hat", &IntervalStat::p_hat)
        .def_readonly("p_hat_in", &IntervalStat::p_hat_in)
        .def_readonly("p_hat_out", &IntervalStat::p_hat_out);

    m.def("score", &score, py::arg("process"), py::arg("i"), py::arg("j"));
    m.def("glr", &glr, py::arg("process"), py::arg("i"), py::arg("j"));

    auto scan_tuple = [](const ScanResult& r) {
        return py::make_tuple(r.best.i, r.best.j, r.objective);
    };
    m.def(
        "exhaustive_scan",
        [scan_tuple](const CombinedProcess& p, const std::string& stat, Index lo, Index hi) {
            return scan_tuple(exhaustive_scan(p, stat_arg(stat), lo, hi));
        },
        py::arg("process"), py::arg("stat") = "glr", py::arg("lo") = 1, py::arg("hi"),
        "Best interval (i, j, objective) over every sub-interval of [lo, hi].");
    m.def(
        "iterative_grid_scan",
        [scan_tuple](const CombinedProcess& p, const std::string& stat, Index lo, Index hi, int grid) {
            return scan_tuple(iterative_grid_scan(p, stat_arg(stat), lo, hi, grid));
        },
        py::arg("process"), py::arg("stat") = "glr", py::arg("lo") = 1, py::arg("hi"), py::arg("grid_factor") = 10);

    m.def(
        "cbs_segment",
        [](const CombinedProcess& p, const std::string& stat, int grid, int max_k) {
            SegmentOptions o;
            o.kind = stat_arg(stat);
            o.grid_factor = grid;
            o.max_k = max_k;
            std::vector<std::vector<Index>> steps;
            for (const auto& s : cbs_segment(p, o).steps)
                steps.push_back(s.added);
            return steps;
        },
        py::arg("process"), py::arg("stat") = "glr", py::arg("grid_factor") = 10, py::arg("max_k") = 50,
        "Change points added by each segmentation step, in insertion order.");

    m.def(
        "mbic", [](const CombinedProcess& p, std::vector<Index> taus) { return mbic(p, taus); }, py::arg("process"),
        py::arg("taus"));
    m.def(
        "log_glr_full", [](const CombinedProcess& p, std::vector<Index> taus) { return log_glr_full(p, taus); },
        py::arg("process"), py::arg("taus"));

    m.def(
        "select_k",
        [](const CombinedProcess& p, const std::string& stat, int grid, int max_k) {
            SegmentOptions o;
            o.kind = stat_arg(stat);
            o.grid_factor = grid;
            o.max_k = max_k;
            const auto sel = select_k(p, cbs_segment(p, o));
            py::dict d;
            d["k_hat"] = sel.k_hat;
            d["taus"] = sel.taus;
            d["mbic"] = sel.curve.values;
            return d;
        },
        py::arg("process"), py::arg("stat") = "glr", py::arg("grid_factor") = 10, py::arg("max_k") = 50,
        "Segment, then choose K by maximising mBIC over insertion prefixes.");

    m.def(
        "cp_likelihoods",
        [](const CombinedProcess& p, double alpha, double beta, Index lo, Index hi) {
            return cp_likelihoods(p, alpha, beta, lo, hi).log_l;
        },
        py::arg("process"), py::arg("alpha") = 1.0, py::arg("beta") = 1.0, py::arg("lo") = 1, py::arg("hi"),
        "log L_i for every candidate i in [lo, hi].");
    m.def(
        "posterior_weights",
        [](const CombinedProcess& p, double alpha, double beta, Index lo, Index hi, double eps) {
            const auto w = posterior_weights(cp_likelihoods(p, alpha, beta, lo, hi), eps);
            return py::make_tuple(w.support, w.weights);
        },
        py::arg("process"), py::arg("alpha") = 1.0, py::arg("beta") = 1.0, py::arg("lo") = 1, py::arg("hi"),
        py::arg("epsilon") = 1e-4);

    m.def(
        "ci_band",
        [](const CombinedProcess& p, std::vector<Index> taus, double level, double alpha, double beta, double eps,
           int threads) {
            BandOptions o;
            o.level = level;
            o.alpha = alpha;
            o.beta = beta;
            o.epsilon = eps;
            o.threads = threads;
            const auto b = ci_band(p, taus, o);
            py::dict d;
            d["position"] = b.grid;
            d["lower"] = b.lower;
            d["point"] = b.point_est;
            d["upper"] = b.upper;
            return d;
        },
        py::arg("process"), py::arg("taus"), py::arg("level") = 0.95, py::arg("alpha") = 1.0, py::arg("beta") = 1.0,
        py::arg("epsilon") = 1e-4, py::arg("threads") = 1,
        "Point-wise credible band for p(t) at every distinct read position.");

    m.def(
        "to_genomic",
        [](const CombinedProcess& p, std::vector<Index> taus) {
            py::list out;
            for (const auto& s : to_genomic(taus, p))
                out.append(segment_dict(s));
            return out;
        },
        py::arg("process"), py::arg("taus"));

    m.def(
        "match_changepoints",
        [](std::vector<std::int64_t> called, std::vector<std::int64_t> truth, std::int64_t tol) {
            const auto r = match_changepoints(called, truth, tol);
            py::list pairs;
            for (const auto& pr : r.pairs)
                pairs.append(py::make_tuple(pr.called, pr.truth, pr.distance));
            py::dict d;
            d["pairs"] = pairs;
            d["recall"] = r.recall;
            d["precision"] = r.precision;
            return d;
        },
        py::arg("called"), py::arg("truth"), py::arg("tolerance") = 100);

    m.def(
        "simulate",
        [](std::uint64_t seed, Position chrom_length, double case_reads, double control_reads, int n_segments,
           Position min_bp, Position max_bp) {
            SimulationConfig s;
            s.seed = seed;
            s.chrom_length = chrom_length;
            s.case_reads = case_reads;
            s.control_reads = control_reads;
            s.normal_reads = control_reads;
            s.n_segments = n_segments;
            s.length_law = {min_bp, max_bp};
            const auto sim = simulate(s).front();
            py::list truth;
            for (const auto& seg : sim.truth.segments)
                truth.append(py::make_tuple(seg.start_bp, seg.end_bp, seg.multiplier));
            py::dict d;
            d["case"] = sim.case_reads.positions;
            d["control"] = sim.control_reads.positions;
            d["truth"] = truth;
            return d;
        },
        py::arg("seed") = 1, py::arg("chrom_length") = 20'000'000, py::arg("case_reads") = 1e5,
        py::arg("control_reads") = 1e5, py::arg("n_segments") = 50, py::arg("min_bp") = 100'000,
        py::arg("max_bp") = 250'000, "Spike-in simulation of one chromosome.");

    m.def(
        "segment",
        [](std::vector<Position> case_pos, std::vector<Position> control_pos, const std::string& stat, int grid,
           int max_k, bool band, const std::string& chrom) {
            RunConfig c;
            c.stat = stat_arg(stat);
            c.grid_step = grid;
            c.max_k = max_k;
            c.band = band;
            const auto res = segment_chromosome(merge_reads({chrom, std::move(case_pos)}, {chrom, std::move(control_pos)}), c);
            py::list segs;
            for (const auto& s : res.segments)
                segs.append(segment_dict(s));
            py::dict d;
            d["k_hat"] = res.selection.k_hat;
            d["taus"] = res.selection.taus;
            d["mbic"] = res.selection.curve.values;
            d["segments"] = segs;
            return d;
        },
        py::arg("case"), py::arg("control"), py::arg("stat") = "glr", py::arg("grid_factor") = 10,
        py::arg("max_k") = 50, py::arg("band") = false, py::arg("chromosome") = "chr1",
        "Full pipeline on one chromosome: merge, segment, select K, map to the genome.");
}
