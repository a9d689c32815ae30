#include "support.hpp"

#include "seqscan/errors.hpp"
#include "seqscan/interval_stats.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace seqscan;

namespace {

// Bernoulli log-likelihood summed read by read at probability p (0 log 0 = 0).
double loglik(const std::vector<int>& z, std::size_t a, std::size_t b, double p) {
    double s = 0.0;
    for (std::size_t t = a; t <= b; ++t) {
        if (z[t - 1] == 1 && p > 0.0)
            s += std::log(p);
        else if (z[t - 1] == 0 && p < 1.0)
            s += std::log1p(-p);
    }
    return s;
}

double fraction(const std::vector<int>& z, std::size_t a, std::size_t b) {
    if (b < a)
        return 0.0;
    double k = 0;
    for (std::size_t t = a; t <= b; ++t)
        k += z[t - 1];
    return k / static_cast<double>(b - a + 1);
}

// Inside/outside model vs single probability, built from per-read likelihoods.
double oracle_glr(const std::vector<int>& z, std::size_t i, std::size_t j) {
    const std::size_t m = z.size();
    const double p_in = fraction(z, i, j);
    double k_out = 0;
    for (std::size_t t = 1; t <= m; ++t)
        if (t < i || t > j)
            k_out += z[t - 1];
    const double p_out = k_out / static_cast<double>(m - (j - i + 1));
    const double p0 = fraction(z, 1, m);
    double alt = loglik(z, i, j, p_in);
    for (std::size_t t = 1; t <= m; ++t)
        if (t < i || t > j)
            alt += loglik(z, t, t, p_out);
    return alt - loglik(z, 1, m, p0);
}

} // namespace

TEST_SUITE("interval-stats") {

TEST_CASE("balanced interval has zero score") {
    const auto p = testing::from_labels({1, 0, 1, 0});
    const auto s = score(p, 1, 2);
    CHECK(s.s_ij == 0.0);
    CHECK(s.t_ij == 0.0);
}

TEST_CASE("score on a pure block") {
    const auto p = testing::from_labels({1, 1, 0, 0});
    const auto s = score(p, 1, 2);
    CHECK(s.s_ij == 1.0);
    CHECK(s.sigma_ij * s.sigma_ij == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(s.t_ij == 2.0);
}

TEST_CASE("score of the whole sequence is zero") {
    std::mt19937_64 rng(1);
    for (int rep = 0; rep < 20; ++rep) {
        const auto p = testing::from_labels(testing::bernoulli(30, 0.3, rng));
        CHECK(score(p, 1, p.size()).s_ij == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("glr examples") {
    CHECK(glr(testing::from_labels({1, 0, 1, 0}), 1, 2).lambda_ij == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(std::abs(glr(testing::from_labels({1, 1, 0, 0}), 1, 2).lambda_ij - 4 * std::log(2.0)) < 1e-10);
    CHECK(std::abs(glr(testing::from_labels({1, 1, 1, 0, 0, 0}), 1, 3).lambda_ij - 6 * std::log(2.0)) < 1e-10);
    CHECK_THROWS_AS(glr(testing::from_labels({1, 0}), 1, 2), InvariantViolation);
}

TEST_CASE("glr matches per-read likelihood oracle on every interval") {
    std::mt19937_64 rng(2024);
    for (int rep = 0; rep < 40; ++rep) {
        const std::size_t m = 2 + rng() % 49;
        const double prob = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
        const auto z = testing::bernoulli(m, prob, rng);
        const auto p = testing::from_labels(z);
        for (std::size_t i = 1; i <= m; ++i)
            for (std::size_t j = i; j <= m; ++j) {
                if (i == 1 && j == m)
                    continue;
                const auto g = glr(p, static_cast<Index>(i), static_cast<Index>(j));
                REQUIRE(std::abs(g.lambda_ij - oracle_glr(z, i, j)) < 1e-10);
                REQUIRE(g.lambda_ij >= 0.0);
                const bool same = std::abs(g.p_hat_in - g.p_hat) < 1e-15;
                if (same)
                    REQUIRE(g.lambda_ij < 1e-12);
                else
                    REQUIRE(g.lambda_ij > 0.0);
            }
    }
}

TEST_CASE("score matches the direct formula and is antisymmetric") {
    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t m = 3 + rng() % 40;
        const auto z = testing::bernoulli(m, 0.4, rng);
        const auto p = testing::from_labels(z);
        const double p0 = fraction(z, 1, m);
        for (std::size_t i = 1; i <= m; ++i)
            for (std::size_t j = i; j <= m; ++j) {
                const double n = static_cast<double>(j - i + 1);
                const double s_direct = fraction(z, i, j) * n - n * p0;
                const double var = n * (1.0 - n / static_cast<double>(m)) * p0 * (1.0 - p0);
                const auto s = score(p, static_cast<Index>(i), static_cast<Index>(j));
                REQUIRE(s.s_ij == doctest::Approx(s_direct).epsilon(1e-12));
                REQUIRE(s.sigma_ij == doctest::Approx(std::sqrt(var)).epsilon(1e-12));
                if (i > 1 && j == m) {
                    // complement in circular sense is [1, i-1]
                    const auto c = score(p, 1, static_cast<Index>(i - 1));
                    REQUIRE(s.s_ij == doctest::Approx(-c.s_ij).epsilon(1e-12));
                }
            }
    }
}

TEST_CASE("zero null variance gives t = 0") {
    const auto p = testing::from_labels({0, 0, 0, 0});
    CHECK(score(p, 2, 3).t_ij == 0.0);
}

TEST_CASE("statistics ignore positions") {
    std::mt19937_64 rng(9);
    const auto p = testing::from_labels(testing::bernoulli(40, 0.5, rng));
    std::vector<Position> w;
    for (Index t = 1; t <= p.size(); ++t)
        w.push_back(t * t * t + 7);
    const auto q = p.with_positions(w);
    for (Index i = 1; i <= 40; i += 3)
        for (Index j = i; j < 40; j += 5) {
            CHECK(glr(p, i, j).lambda_ij == glr(q, i, j).lambda_ij);
            CHECK(score(p, i, j).t_ij == score(q, i, j).t_ij);
        }
}

TEST_CASE("statistic kind names") {
    CHECK(parse_stat_kind("glr") == StatKind::Glr);
    CHECK(parse_stat_kind("score") == StatKind::Score);
    CHECK_THROWS_AS(parse_stat_kind("foo"), InputError);
}

}
