#include "support.hpp"

#include "seqscan/errors.hpp"
#include "seqscan/process.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace seqscan;

namespace {

std::vector<int> labels_of(const CombinedProcess& p) {
    return {p.labels().begin(), p.labels().end()};
}

std::vector<Position> positions_of(const CombinedProcess& p) {
    return {p.positions().begin(), p.positions().end()};
}

// Oracle: tag each read with its label, sort by (position, label).
std::pair<std::vector<Position>, std::vector<int>> brute_merge(const ReadSet& c, const ReadSet& v) {
    std::vector<std::pair<Position, int>> all;
    for (auto x : c.positions)
        all.emplace_back(x, 1);
    for (auto x : v.positions)
        all.emplace_back(x, 0);
    std::sort(all.begin(), all.end());
    std::pair<std::vector<Position>, std::vector<int>> out;
    for (auto [x, z] : all) {
        out.first.push_back(x);
        out.second.push_back(z);
    }
    return out;
}

} // namespace

TEST_SUITE("process") {

TEST_CASE("merge of disjoint streams") {
    const auto p = merge_reads({"c", {5, 9}}, {"c", {7}});
    CHECK(positions_of(p) == std::vector<Position>{5, 7, 9});
    CHECK(labels_of(p) == std::vector<int>{1, 0, 1});
    CHECK(p.case_count() == 2);
    CHECK(p.control_count() == 1);
    CHECK(p.unique_positions() == 3);
}

TEST_CASE("empty case stream") {
    const auto p = merge_reads({"c", {}}, {"c", {3, 4}});
    CHECK(positions_of(p) == std::vector<Position>{3, 4});
    CHECK(labels_of(p) == std::vector<int>{0, 0});
}

TEST_CASE("tie puts control first") {
    const auto p = merge_reads({"c", {7}}, {"c", {7}});
    CHECK(positions_of(p) == std::vector<Position>{7, 7});
    CHECK(labels_of(p) == std::vector<int>{0, 1});
    CHECK(p.unique_positions() == 1);
}

TEST_CASE("merge agrees with a multiset sort on random inputs") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<Position> pos(1, 40);
    for (int rep = 0; rep < 200; ++rep) {
        ReadSet c{"c", {}}, v{"c", {}};
        const int nc = static_cast<int>(rng() % 15), nv = static_cast<int>(rng() % 15);
        for (int k = 0; k < nc; ++k)
            c.positions.push_back(pos(rng));
        for (int k = 0; k < nv; ++k)
            v.positions.push_back(pos(rng));
        std::sort(c.positions.begin(), c.positions.end());
        std::sort(v.positions.begin(), v.positions.end());
        const auto p = merge_reads(c, v);
        const auto [w, z] = brute_merge(c, v);
        REQUIRE(positions_of(p) == w);
        REQUIRE(labels_of(p) == z);
        Index sum = 0;
        for (Index t = 1; t <= p.size(); ++t) {
            sum += p.label(t);
            REQUIRE(p.successes(t) == sum);
        }
        CHECK(p.case_count() == nc);
    }
}

TEST_CASE("monotone transform leaves labels unchanged") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<Position> pos(1, 500);
    ReadSet c{"c", {}}, v{"c", {}};
    for (int k = 0; k < 100; ++k) {
        c.positions.push_back(pos(rng));
        v.positions.push_back(pos(rng));
    }
    std::sort(c.positions.begin(), c.positions.end());
    std::sort(v.positions.begin(), v.positions.end());
    auto phi = [](ReadSet r) {
        for (auto& x : r.positions)
            x = x * x * x + 7;
        return r;
    };
    CHECK(labels_of(merge_reads(c, v)) == labels_of(merge_reads(phi(c), phi(v))));
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(merge_reads({"a", {1}}, {"b", {2}}), InputError);
    CHECK_THROWS_AS(merge_reads({"a", {3, 1}}, {"a", {2}}), InputError);
    CHECK_THROWS_AS(CombinedProcess("a", {1, 2}, {0}), InputError);
    CHECK_THROWS_AS(CombinedProcess("a", {1, 2}, {0, 2}), InputError);
    CHECK_THROWS_AS(validate_change_points(std::vector<Index>{2, 2}, 5), InvariantViolation);
    CHECK_THROWS_AS(validate_change_points(std::vector<Index>{1}, 5), InvariantViolation);
    CHECK_THROWS_AS(validate_change_points(std::vector<Index>{6}, 5), InvariantViolation);
    CHECK_NOTHROW(validate_change_points(std::vector<Index>{2, 5}, 5));
}

TEST_CASE("to_genomic with no change points") {
    const auto p = testing::from_labels({1, 0, 1, 0});
    const auto segs = to_genomic(std::vector<Index>{}, p);
    REQUIRE(segs.size() == 1);
    CHECK(segs[0].p_hat == doctest::Approx(0.5));
    CHECK(segs[0].rel_cn == doctest::Approx(1.0));
}

TEST_CASE("to_genomic with one change point") {
    const CombinedProcess p("c", {10, 20, 30, 40}, {1, 1, 0, 0});
    const auto segs = to_genomic(std::vector<Index>{3}, p);
    REQUIRE(segs.size() == 2);
    CHECK(segs[0].start_bp == 10);
    CHECK(segs[0].end_bp == 20);
    CHECK(segs[0].start_idx == 1);
    CHECK(segs[0].end_idx == 2);
    CHECK(segs[0].p_hat == 1.0);
    CHECK(std::isinf(segs[0].rel_cn));
    CHECK(segs[1].start_bp == 30);
    CHECK(segs[1].end_bp == 40);
    CHECK(segs[1].p_hat == 0.0);
    CHECK(segs[1].rel_cn == 0.0);
}

TEST_CASE("segment counts add back up to the sample totals") {
    std::mt19937_64 rng(3);
    const auto z = testing::bernoulli(300, 0.4, rng);
    const auto p = testing::from_labels(z);
    const std::vector<Index> taus{17, 90, 91, 250};
    const auto segs = to_genomic(taus, p);
    Index nc = 0, nv = 0;
    for (std::size_t k = 0; k < segs.size(); ++k) {
        CHECK(segs[k].n_case + segs[k].n_control == segs[k].end_idx - segs[k].start_idx + 1);
        CHECK(segs[k].rel_cn >= 0.0);
        if (k > 0)
            CHECK(segs[k].start_idx == segs[k - 1].end_idx + 1);
        nc += segs[k].n_case;
        nv += segs[k].n_control;
    }
    CHECK(nc == p.case_count());
    CHECK(nv == p.control_count());
    CHECK(segs.back().end_idx == p.size());
}

TEST_CASE("relative copy number") {
    CHECK(relative_copy_number(0.5) == 1.0);
    CHECK(relative_copy_number(0.75) == doctest::Approx(3.0));
    CHECK(std::isinf(relative_copy_number(1.0)));
}

}
