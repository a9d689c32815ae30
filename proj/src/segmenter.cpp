#include "seqscan/segmenter.hpp"

#include "seqscan/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <queue>

namespace seqscan {

double window_objective(const CombinedProcess& process, StatKind kind, Index lo, Index hi, Index i, Index j) {
    return objective(kind, counts_in_window(process, lo, hi, i, j));
}

namespace {

struct Scored {
    double obj;
    Index i;
    Index j;
};

// a ranks before b
bool better(const Scored& a, const Scored& b) {
    if (a.obj != b.obj)
        return a.obj > b.obj;
    if (a.i != b.i)
        return a.i < b.i;
    return a.j < b.j;
}

// Shared bookkeeping for both scans: incumbent plus a short ranked list.
class Tracker {
public:
    Tracker(const CombinedProcess& process, StatKind kind, Index lo, Index hi, const ScanOptions& options)
        : process_(process), kind_(kind), lo_(lo), hi_(hi), options_(options),
          n_total_(static_cast<double>(hi - lo + 1)),
          k_total_(static_cast<double>(process.successes_in(lo, hi))) {}

    bool eligible(Index i, Index j) const {
        if (i > j || (i == lo_ && j == hi_))
            return false;
        if (options_.max_cut > 0) {
            if (i > lo_ && i > options_.max_cut)
                return false;
            if (j < hi_ && j + 1 > options_.max_cut)
                return false;
        }
        return true;
    }

    IntervalCounts counts(Index i, Index j) const {
        return {n_total_, k_total_, static_cast<double>(j - i + 1),
                static_cast<double>(process_.successes_in(i, j))};
    }

    void offer(Index i, Index j) {
        if (!eligible(i, j))
            return;
        ++evaluated_;
        Scored s{objective(kind_, counts(i, j)), i, j};
        if (!found_ || better(s, best_)) {
            best_ = s;
            found_ = true;
        }
        const auto keep = static_cast<std::size_t>(std::max(options_.keep_candidates, 1));
        if (top_.size() < keep || better(s, top_.back())) {
            auto pos = std::lower_bound(top_.begin(), top_.end(), s, better);
            top_.insert(pos, s);
            if (top_.size() > keep)
                top_.pop_back();
        }
    }

    bool found() const { return found_; }
    double best_objective() const { return found_ ? best_.obj : -std::numeric_limits<double>::infinity(); }

    ScanResult result() const {
        ScanResult r;
        r.found = found_;
        r.evaluated = evaluated_;
        if (!found_)
            return r;
        r.objective = best_.obj;
        r.best = evaluate_in_window(process_, lo_, hi_, best_.i, best_.j);
        for (const auto& s : top_)
            r.candidates.push_back(evaluate_in_window(process_, lo_, hi_, s.i, s.j));
        return r;
    }

    double n_total() const { return n_total_; }
    double k_total() const { return k_total_; }

private:
    const CombinedProcess& process_;
    StatKind kind_;
    Index lo_, hi_;
    ScanOptions options_;
    double n_total_, k_total_;
    bool found_ = false;
    Scored best_{};
    std::vector<Scored> top_;
    std::uint64_t evaluated_ = 0;
};

void check_window(const CombinedProcess& process, Index lo, Index hi) {
    if (lo < 1 || hi > process.size())
        throw InvariantViolation("scan window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                 "] outside [1, " + std::to_string(process.size()) + "]");
}

// With p in {0, 1} every interval scores 0; the answer is the first eligible one.
bool scan_degenerate(Tracker& tracker, Index lo, Index hi) {
    if (tracker.k_total() > 0 && tracker.k_total() < tracker.n_total())
        return false;
    for (Index i = lo; i <= hi && !tracker.found(); ++i)
        for (Index j = i; j <= hi && !tracker.found(); ++j)
            tracker.offer(i, j);
    return true;
}

} // namespace

ScanResult exhaustive_scan(const CombinedProcess& process, StatKind kind, Index lo, Index hi,
                           const ScanOptions& options) {
    check_window(process, lo, hi);
    if (hi - lo + 1 < 2)
        return {};
    Tracker tracker(process, kind, lo, hi, options);
    for (Index i = lo; i <= hi; ++i)
        for (Index j = i; j <= hi; ++j)
            tracker.offer(i, j);
    return tracker.result();
}

namespace {

struct Range {
    Index lo;
    Index hi;
    Index size() const { return hi - lo + 1; }
};

struct Block {
    Range starts;
    Range ends;
    double bound;
};

struct BlockOrder {
    bool operator()(const Block& a, const Block& b) const {
        if (a.bound != b.bound)
            return a.bound < b.bound;
        if (a.starts.lo != b.starts.lo)
            return a.starts.lo > b.starts.lo;
        return a.ends.lo > b.ends.lo;
    }
};

struct Vertex {
    double n;
    double k;
};

// Small convex polygon; at most 4 + one vertex per clipping half-plane.
struct Polygon {
    std::array<Vertex, 10> v;
    std::size_t size = 0;
};

// Clip a convex polygon by a*n + b*k <= c.
Polygon clip(const Polygon& poly, double a, double b, double c) {
    Polygon out;
    for (std::size_t idx = 0; idx < poly.size; ++idx) {
        const Vertex& p = poly.v[idx];
        const Vertex& q = poly.v[(idx + 1) % poly.size];
        const double fp = a * p.n + b * p.k - c;
        const double fq = a * q.n + b * q.k - c;
        if (fp <= 0)
            out.v[out.size++] = p;
        if ((fp < 0 && fq > 0) || (fp > 0 && fq < 0)) {
            const double t = fp / (fp - fq);
            out.v[out.size++] = {p.n + t * (q.n - p.n), p.k + t * (q.k - p.k)};
        }
    }
    return out;
}

class BlockBound {
public:
    BlockBound(const CombinedProcess& process, StatKind kind, Index lo, Index hi)
        : process_(process), kind_(kind),
          n_total_(static_cast<double>(hi - lo + 1)),
          k_total_(static_cast<double>(process.successes_in(lo, hi))) {}

    // Upper bound of the objective over all intervals [i, j] with i in starts,
    // j in ends, i <= j, and size below the window size.
    double operator()(const Range& starts, const Range& ends) const {
        const double n_min = static_cast<double>(std::max<Index>(1, ends.lo - starts.hi + 1));
        const double n_outer = static_cast<double>(ends.hi - starts.lo + 1);
        const double n_max = std::min(n_outer, n_total_ - 1.0);
        if (n_min > n_max)
            return -std::numeric_limits<double>::infinity();
        const double k_max = static_cast<double>(process_.successes_in(starts.lo, ends.hi));
        const double k_min = ends.lo >= starts.hi
                                 ? static_cast<double>(process_.successes_in(starts.hi, ends.lo))
                                 : 0.0;
        Polygon poly;
        poly.v[0] = {n_min, k_min};
        poly.v[1] = {n_max, k_min};
        poly.v[2] = {n_max, k_max};
        poly.v[3] = {n_min, k_max};
        poly.size = 4;
        poly = clip(poly, -1.0, 1.0, 0.0);                           // k <= n
        poly = clip(poly, 1.0, -1.0, n_total_ - k_total_);           // n - k <= failures
        // shrinking from the largest interval drops at most one success per read
        poly = clip(poly, 1.0, -1.0, n_outer - k_max);
        // growing from the common core adds at most one success per read
        if (ends.lo >= starts.hi)
            poly = clip(poly, -1.0, 1.0, k_min - n_min);
        if (poly.size == 0)
            return -std::numeric_limits<double>::infinity();

        // Both objectives have convex sublevel sets over (n, k): the GLR is
        // jointly convex and |t| is quasi-convex because the null standard
        // deviation is concave in n. The maximum sits at a vertex.
        double best = 0.0;
        for (std::size_t idx = 0; idx < poly.size; ++idx)
            best = std::max(best, objective(kind_, {n_total_, k_total_, poly.v[idx].n, poly.v[idx].k}));
        // absorb rounding in the vertex evaluation
        return best * (1.0 + 1e-12) + 1e-12;
    }

private:
    const CombinedProcess& process_;
    StatKind kind_;
    double n_total_, k_total_;
};

std::vector<Range> split(Range r, int parts) {
    std::vector<Range> out;
    const Index chunk = (r.size() + parts - 1) / parts;
    for (Index a = r.lo; a <= r.hi; a += chunk)
        out.push_back({a, std::min(r.hi, a + chunk - 1)});
    return out;
}

} // namespace

ScanResult iterative_grid_scan(const CombinedProcess& process, StatKind kind, Index lo, Index hi,
                               int grid_factor, const ScanOptions& options) {
    if (grid_factor < 2)
        throw InvariantViolation("iterative_grid_scan: grid factor must be >= 2");
    check_window(process, lo, hi);
    if (hi - lo + 1 < 2)
        return {};

    Tracker tracker(process, kind, lo, hi, options);
    if (scan_degenerate(tracker, lo, hi))
        return tracker.result();

    const BlockBound bound(process, kind, lo, hi);
    const auto area_cutoff = static_cast<Index>(grid_factor) * grid_factor;
    std::priority_queue<Block, std::vector<Block>, BlockOrder> queue;

    auto prune_level = [&] {
        const double b = tracker.best_objective();
        return b - 1e-9 * std::max(1.0, std::abs(b));
    };

    auto expand = [&](const Range& starts, const Range& ends) {
        const auto start_cells = split(starts, grid_factor);
        const auto end_cells = split(ends, grid_factor);
        // grid-corner intervals first so the incumbent tightens before bounding
        for (const auto& s : start_cells)
            for (const auto& e : end_cells)
                if (s.lo <= e.hi)
                    tracker.offer(s.lo, e.hi);
        for (const auto& s : start_cells)
            for (const auto& e : end_cells) {
                if (s.lo > e.hi)
                    continue;
                const double b = bound(s, e);
                if (b >= prune_level())
                    queue.push({s, e, b});
            }
    };

    expand({lo, hi}, {lo, hi});
    while (!queue.empty()) {
        const Block blk = queue.top();
        queue.pop();
        if (blk.bound < prune_level())
            break;
        if (blk.starts.size() * blk.ends.size() <= area_cutoff) {
            for (Index i = blk.starts.lo; i <= blk.starts.hi; ++i)
                for (Index j = std::max(i, blk.ends.lo); j <= blk.ends.hi; ++j)
                    tracker.offer(i, j);
            continue;
        }
        expand(blk.starts, blk.ends);
    }
    return tracker.result();
}

std::vector<Index> ChangePointSequence::insertion_order() const {
    std::vector<Index> out;
    for (const auto& step : steps)
        out.insert(out.end(), step.added.begin(), step.added.end());
    return out;
}

std::size_t ChangePointSequence::total_change_points() const {
    std::size_t n = 0;
    for (const auto& step : steps)
        n += step.added.size();
    return n;
}

ChangePointSequence cbs_segment(const CombinedProcess& process, const SegmentOptions& options) {
    if (options.max_k < 1)
        throw InvariantViolation("cbs_segment: max_k must be >= 1");
    if (!options.exhaustive && options.grid_factor < 2)
        throw InvariantViolation("cbs_segment: grid factor must be >= 2");

    const Index m = process.size();
    ChangePointSequence seq;
    seq.m = m;
    if (m < 3)
        return seq;

    ScanOptions scan_opts;
    scan_opts.max_cut = m - 1;
    scan_opts.keep_candidates = 1;

    auto scan = [&](Index lo, Index hi) {
        if (options.exhaustive)
            return exhaustive_scan(process, options.kind, lo, hi, scan_opts);
        return iterative_grid_scan(process, options.kind, lo, hi, options.grid_factor, scan_opts);
    };

    struct Region {
        Index hi;
        ScanResult scan;
    };
    std::map<Index, Region> regions;  // keyed by region start

    auto scan_all = [&](const std::vector<std::pair<Index, Index>>& todo) {
        std::vector<ScanResult> results(todo.size());
        if (options.threads > 1 && todo.size() > 1) {
            std::vector<std::future<ScanResult>> futs;
            for (const auto& [lo, hi] : todo)
                futs.push_back(std::async(std::launch::async, scan, lo, hi));
            for (std::size_t k = 0; k < futs.size(); ++k)
                results[k] = futs[k].get();
        } else {
            for (std::size_t k = 0; k < todo.size(); ++k)
                results[k] = scan(todo[k].first, todo[k].second);
        }
        for (std::size_t k = 0; k < todo.size(); ++k)
            regions[todo[k].first] = Region{todo[k].second, std::move(results[k])};
    };

    scan_all({{1, m}});
    std::size_t total = 0;
    while (total < static_cast<std::size_t>(options.max_k)) {
        auto pick = regions.end();
        for (auto it = regions.begin(); it != regions.end(); ++it) {
            if (!it->second.scan.found || it->second.scan.objective <= 0.0)
                continue;
            if (pick == regions.end() || it->second.scan.objective > pick->second.scan.objective)
                pick = it;
        }
        if (pick == regions.end())
            break;

        const Index lo = pick->first;
        const Index hi = pick->second.hi;
        const ScanResult res = pick->second.scan;
        ChangePointStep step;
        step.region_lo = lo;
        step.region_hi = hi;
        step.objective = res.objective;
        step.interval = res.best;
        if (res.best.i > lo)
            step.added.push_back(res.best.i);
        if (res.best.j < hi)
            step.added.push_back(res.best.j + 1);
        if (total + step.added.size() > static_cast<std::size_t>(options.max_k))
            step.added.resize(options.max_k - total);

        std::vector<std::pair<Index, Index>> pieces;
        Index start = lo;
        for (Index cp : step.added) {
            pieces.emplace_back(start, cp - 1);
            start = cp;
        }
        pieces.emplace_back(start, hi);
        regions.erase(pick);

        std::vector<std::pair<Index, Index>> todo;
        for (const auto& [a, b] : pieces) {
            if (b - a + 1 >= 2)
                todo.emplace_back(a, b);
            else
                regions[a] = Region{b, ScanResult{}};
        }
        scan_all(todo);

        total += step.added.size();
        seq.steps.push_back(std::move(step));
    }
    return seq;
}

} // namespace seqscan
