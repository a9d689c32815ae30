#include "support.hpp"

#include "seqscan/interval_stats.hpp"
#include "seqscan/segmenter.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>

using namespace seqscan;

namespace {

struct Best {
    Index i = 0, j = 0;
    double value = -1.0;
};

// Independent brute force over all sub-intervals except the full window.
Best brute_force(const CombinedProcess& p, StatKind kind, Index lo, Index hi) {
    Best b;
    for (Index i = lo; i <= hi; ++i)
        for (Index j = i; j <= hi; ++j) {
            if (i == lo && j == hi)
                continue;
            const double v = window_objective(p, kind, lo, hi, i, j);
            if (v > b.value)
                b = {i, j, v};
        }
    return b;
}

} // namespace

TEST_SUITE("segmenter") {

TEST_CASE("exhaustive scan finds the planted block") {
    const auto p = testing::from_labels({0, 0, 1, 1, 0, 0});
    const auto r = exhaustive_scan(p, StatKind::Glr, 1, 6);
    REQUIRE(r.found);
    CHECK(r.best.i == 3);
    CHECK(r.best.j == 4);
    const auto b = brute_force(p, StatKind::Glr, 1, 6);
    CHECK(b.i == 3);
    CHECK(b.j == 4);
}

TEST_CASE("all-zero labels tie-break to [1, 1]") {
    const auto p = testing::from_labels(std::vector<int>(8, 0));
    for (auto kind : {StatKind::Glr, StatKind::Score}) {
        const auto r = exhaustive_scan(p, kind, 1, 8);
        CHECK(r.objective == 0.0);
        CHECK(r.best.i == 1);
        CHECK(r.best.j == 1);
        const auto g = iterative_grid_scan(p, kind, 1, 8, 2);
        CHECK(g.best.i == 1);
        CHECK(g.best.j == 1);
    }
}

TEST_CASE("alternating labels have a weak maximum") {
    std::vector<int> z(20);
    for (std::size_t k = 0; k < z.size(); ++k)
        z[k] = k % 2 == 0 ? 1 : 0;
    const auto alt = exhaustive_scan(testing::from_labels(z), StatKind::Glr, 1, 20);
    const auto planted = exhaustive_scan(testing::from_labels({0, 0, 1, 1, 0, 0}), StatKind::Glr, 1, 6);
    CHECK(alt.objective < planted.objective);
    CHECK(alt.objective < 1.0);
}

TEST_CASE("exhaustive scan matches brute force inside sub-windows") {
    std::mt19937_64 rng(8);
    for (int rep = 0; rep < 30; ++rep) {
        const auto p = testing::from_labels(testing::bernoulli(40, 0.4, rng));
        const Index lo = 1 + static_cast<Index>(rng() % 10);
        const Index hi = 30 + static_cast<Index>(rng() % 11);
        for (auto kind : {StatKind::Glr, StatKind::Score}) {
            const auto r = exhaustive_scan(p, kind, lo, hi);
            const auto b = brute_force(p, kind, lo, hi);
            REQUIRE(r.best.i == b.i);
            REQUIRE(r.best.j == b.j);
            REQUIRE(r.objective == doctest::Approx(b.value).epsilon(1e-12));
        }
    }
}

TEST_CASE("grid scan on small inputs equals exhaustive scan") {
    std::mt19937_64 rng(31);
    for (int g : {2, 3, 10}) {
        for (int rep = 0; rep < 20; ++rep) {
            const auto m = static_cast<std::size_t>(3 + rng() % (3 * g - 2));
            const auto p = testing::from_labels(testing::bernoulli(m, 0.5, rng));
            for (auto kind : {StatKind::Glr, StatKind::Score}) {
                const auto e = exhaustive_scan(p, kind, 1, p.size());
                const auto s = iterative_grid_scan(p, kind, 1, p.size(), g);
                REQUIRE(s.best.i == e.best.i);
                REQUIRE(s.best.j == e.best.j);
            }
        }
    }
}

TEST_CASE("grid scan localises a planted block like exhaustive scan") {
    std::mt19937_64 rng(4);
    const auto p = testing::from_labels(testing::blocks(200, 0.3, 0.9, {{81, 120}}, rng));
    for (auto kind : {StatKind::Glr, StatKind::Score}) {
        const auto e = exhaustive_scan(p, kind, 1, 200);
        const auto s = iterative_grid_scan(p, kind, 1, 200, 10);
        CHECK(std::llabs(s.best.i - e.best.i) <= 2);
        CHECK(std::llabs(s.best.j - e.best.j) <= 2);
    }
}

TEST_CASE("grid scan objective reaches the exhaustive optimum at m = 2000") {
    std::mt19937_64 rng(100);
    int good = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t a = 100 + rng() % 1500;
        const auto z = testing::blocks(2000, 0.5, 0.6, {{a, a + 50 + rng() % 300}}, rng);
        const auto p = testing::from_labels(z);
        const auto kind = rep % 2 == 0 ? StatKind::Glr : StatKind::Score;
        const auto e = exhaustive_scan(p, kind, 1, 2000);
        const auto s = iterative_grid_scan(p, kind, 1, 2000, 10);
        if (s.objective >= 0.95 * e.objective)
            ++good;
    }
    CHECK(good == 100);
}

TEST_CASE("grid scan in a sub-window honours the window") {
    std::mt19937_64 rng(12);
    const auto p = testing::from_labels(testing::bernoulli(300, 0.5, rng));
    for (auto kind : {StatKind::Glr, StatKind::Score}) {
        const auto e = exhaustive_scan(p, kind, 57, 211);
        const auto s = iterative_grid_scan(p, kind, 57, 211, 2);
        CHECK(s.best.i == e.best.i);
        CHECK(s.best.j == e.best.j);
        CHECK(s.best.i >= 57);
        CHECK(s.best.j <= 211);
    }
}

TEST_CASE("central block inserts two change points") {
    std::mt19937_64 rng(6);
    const auto p = testing::from_labels(testing::blocks(1000, 0.3, 0.8, {{401, 600}}, rng));
    SegmentOptions opts;
    const auto seq = cbs_segment(p, opts);
    REQUIRE(!seq.steps.empty());
    REQUIRE(seq.steps[0].added.size() == 2);
    CHECK(std::llabs(seq.steps[0].added[0] - 401) <= 5);
    CHECK(std::llabs(seq.steps[0].added[1] - 601) <= 5);
}

TEST_CASE("prefix block inserts one change point") {
    std::mt19937_64 rng(7);
    const auto p = testing::from_labels(testing::blocks(1000, 0.3, 0.8, {{1, 300}}, rng));
    const auto seq = cbs_segment(p, SegmentOptions{});
    REQUIRE(!seq.steps.empty());
    REQUIRE(seq.steps[0].added.size() == 1);
    CHECK(std::llabs(seq.steps[0].added[0] - 301) <= 5);
}

TEST_CASE("two blocks are recovered in the first two steps") {
    std::mt19937_64 rng(13);
    const auto p = testing::from_labels(testing::blocks(5000, 0.2, 0.8, {{1001, 1500}, {3001, 3600}}, rng));
    for (auto kind : {StatKind::Glr, StatKind::Score}) {
        SegmentOptions opts;
        opts.kind = kind;
        const auto seq = cbs_segment(p, opts);
        REQUIRE(seq.steps.size() >= 2);
        std::vector<Index> got;
        for (int s = 0; s < 2; ++s)
            got.insert(got.end(), seq.steps[s].added.begin(), seq.steps[s].added.end());
        std::sort(got.begin(), got.end());
        REQUIRE(got.size() == 4);
        const std::vector<Index> truth{1001, 1501, 3001, 3601};
        for (int k = 0; k < 4; ++k)
            CHECK(std::llabs(got[k] - truth[k]) <= 2);
    }
}

TEST_CASE("segmentation invariants") {
    std::mt19937_64 rng(21);
    const auto p = testing::from_labels(testing::bernoulli(800, 0.5, rng));
    SegmentOptions opts;
    opts.max_k = 15;
    const auto seq = cbs_segment(p, opts);
    CHECK(seq.total_change_points() <= 15);
    std::vector<Index> sorted;
    for (const auto& step : seq.steps) {
        for (Index c : step.added) {
            CHECK(c > 1);
            CHECK(c < p.size());  // the last read can not open a segment
            sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), c), c);
        }
        CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    }
    CHECK(seq.insertion_order().size() == seq.total_change_points());
}

TEST_CASE("max_k truncates the last step") {
    std::mt19937_64 rng(2);
    const auto p = testing::from_labels(testing::blocks(1000, 0.2, 0.8, {{301, 500}}, rng));
    SegmentOptions opts;
    opts.max_k = 1;
    const auto seq = cbs_segment(p, opts);
    CHECK(seq.total_change_points() == 1);
}

TEST_CASE("segmentation is invariant under monotone position maps") {
    std::mt19937_64 rng(19);
    const auto p = testing::from_labels(testing::blocks(1500, 0.4, 0.7, {{200, 450}, {900, 1000}}, rng));
    std::vector<Position> w;
    for (Index t = 1; t <= p.size(); ++t)
        w.push_back(t * t * t + 7);
    const auto q = p.with_positions(w);
    const auto a = cbs_segment(p, SegmentOptions{});
    const auto b = cbs_segment(q, SegmentOptions{});
    CHECK(a.insertion_order() == b.insertion_order());
}

TEST_CASE("threaded region scans give the same sequence") {
    std::mt19937_64 rng(23);
    const auto p = testing::from_labels(testing::blocks(3000, 0.4, 0.7, {{200, 450}, {900, 1400}, {2000, 2100}}, rng));
    SegmentOptions one, four;
    four.threads = 4;
    CHECK(cbs_segment(p, one).insertion_order() == cbs_segment(p, four).insertion_order());
}

TEST_CASE("tiny inputs") {
    CHECK(cbs_segment(testing::from_labels({1, 0}), SegmentOptions{}).steps.empty());
    CHECK_FALSE(exhaustive_scan(testing::from_labels({1, 0, 1}), StatKind::Glr, 2, 2).found);
}

}
