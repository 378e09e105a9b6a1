#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "oracles.hpp"
#include "slk/generators.hpp"
#include "slk/metrics.hpp"

using namespace slk;

TEST_CASE("nmi") {
    SUBCASE("identical partitions") {
        CHECK(nmi({0, 1, 2, 0, 1, 2}, {0, 1, 2, 0, 1, 2}) == doctest::Approx(1.0));
    }
    SUBCASE("relabeling invariance") {
        const std::vector<int> truth = {0, 0, 1, 1, 2, 2};
        const std::vector<int> pred = {2, 2, 0, 0, 1, 1};
        CHECK(nmi(pred, truth) == doctest::Approx(1.0));
        CHECK(nmi(truth, pred) == doctest::Approx(1.0));
    }
    SUBCASE("independent partitions: hand-computed zero") {
        // contingency table is all ones: MI = 0
        CHECK(nmi({0, 0, 1, 1}, {0, 1, 0, 1}) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("hand-computed intermediate case") {
        // pred {0,0,1,1}, truth {0,0,0,1}: contingency [[2,0],[1,1]]
        // MI = (2/4)log(2*... ) computed directly here as the oracle
        const std::vector<int> pred = {0, 0, 1, 1};
        const std::vector<int> truth = {0, 0, 0, 1};
        const double n = 4.0;
        const double mi = (2.0 / n) * std::log(n * 2.0 / (2.0 * 3.0)) +
                          (1.0 / n) * std::log(n * 1.0 / (2.0 * 3.0)) +
                          (1.0 / n) * std::log(n * 1.0 / (2.0 * 1.0));
        const double hp = -2.0 * (0.5 * std::log(0.5));
        const double ht = -(0.75 * std::log(0.75) + 0.25 * std::log(0.25));
        CHECK(nmi(pred, truth) == doctest::Approx(mi / std::sqrt(hp * ht)).epsilon(1e-12));
    }
    SUBCASE("degenerate conventions") {
        CHECK(nmi({0, 0, 0}, {5, 5, 5}) == 1.0);     // both single-cluster
        CHECK(nmi({0, 0, 0}, {0, 1, 2}) == 0.0);     // one has zero entropy
        CHECK(nmi({0, 1, 2}, {0, 0, 0}) == 0.0);
    }
    SUBCASE("length mismatch") {
        CHECK_THROWS_AS(nmi({0, 1}, {0}), ShapeError);
    }
    SUBCASE("always within [0, 1]") {
        std::mt19937_64 rng(41);
        std::uniform_int_distribution<int> lab(0, 4);
        for (int t = 0; t < 50; ++t) {
            std::vector<int> a(30), b(30);
            for (std::size_t i = 0; i < 30; ++i) {
                a[i] = lab(rng);
                b[i] = lab(rng);
            }
            const double v = nmi(a, b);
            CHECK(v >= -1e-12);
            CHECK(v <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("accuracy") {
    SUBCASE("permutation-relabeled truth recovers 1.0") {
        const std::vector<int> truth = {0, 1, 2, 0, 1, 2, 0, 1, 2};
        std::vector<int> pred(truth.size());
        const int perm[] = {2, 0, 1};
        for (std::size_t i = 0; i < truth.size(); ++i) pred[i] = perm[truth[i]];
        CHECK(accuracy(pred, truth, 3) == doctest::Approx(1.0));
    }
    SUBCASE("one flipped point out of 100") {
        std::vector<int> truth(100), pred(100);
        for (std::size_t i = 0; i < 100; ++i) truth[i] = pred[i] = static_cast<int>(i % 4);
        pred[0] = 1;
        CHECK(accuracy(pred, truth, 4) == doctest::Approx(0.99));
    }
    SUBCASE("hungarian equals factorial brute force, 200 random instances") {
        std::mt19937_64 rng(42);
        for (int t = 0; t < 200; ++t) {
            const std::size_t l = 2 + (t % 5);  // L in [2, 6]
            std::uniform_int_distribution<int> lab(0, static_cast<int>(l) - 1);
            const std::size_t n = 20 + (t % 30);
            std::vector<int> pred(n), truth(n);
            for (std::size_t i = 0; i < n; ++i) {
                pred[i] = lab(rng);
                truth[i] = lab(rng);
            }
            CHECK(accuracy(pred, truth, l) ==
                  doctest::Approx(oracles::brute_force_accuracy(pred, truth, l))
                      .epsilon(1e-12));
        }
    }
    SUBCASE("out-of-range label errors") {
        CHECK_THROWS_AS(accuracy({0, 3}, {0, 1}, 2), DomainError);
    }
}

TEST_CASE("kmeanspp_seeds") {
    SUBCASE("L = N selects every point") {
        const Dataset ds = gen_blobs(6, 2, 2, 5.0, 1);
        auto seeds = kmeanspp_seeds(ds, 6, 0);
        std::sort(seeds.begin(), seeds.end());
        for (std::size_t i = 0; i < 6; ++i) CHECK(seeds[i] == i);
    }
    SUBCASE("first seed is uniform (chi-square over 10k draws)") {
        const Dataset ds = gen_blobs(10, 2, 2, 5.0, 2);
        std::vector<int> counts(10, 0);
        for (std::uint64_t s = 0; s < 10000; ++s)
            ++counts[kmeanspp_seeds(ds, 1, s)[0]];
        double chi2 = 0.0;
        const double expected = 1000.0;
        for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
        // 9 dof: chi2 > 21.67 would reject at p = 0.01
        CHECK(chi2 < 21.67);
    }
    SUBCASE("three far blobs get one seed each in >= 95 of 100 runs") {
        const Dataset ds = gen_blobs(90, 3, 2, 100.0, 3);
        int hits = 0;
        for (std::uint64_t s = 0; s < 100; ++s) {
            const auto seeds = kmeanspp_seeds(ds, 3, s);
            std::map<int, int> blob_count;
            for (auto idx : seeds) ++blob_count[(*ds.labels)[idx]];
            if (blob_count.size() == 3) ++hits;
        }
        CHECK(hits >= 95);
    }
    SUBCASE("deterministic per seed, distinct indices") {
        const Dataset ds = gen_blobs(50, 3, 2, 5.0, 4);
        const auto a = kmeanspp_seeds(ds, 5, 9);
        const auto b = kmeanspp_seeds(ds, 5, 9);
        CHECK(a == b);
        auto sorted = a;
        std::sort(sorted.begin(), sorted.end());
        CHECK(std::unique(sorted.begin(), sorted.end()) == sorted.end());
    }
    SUBCASE("N < L errors") {
        const Dataset ds = gen_blobs(3, 2, 2, 5.0, 5);
        CHECK_THROWS_AS(kmeanspp_seeds(ds, 4, 0), BoundsError);
    }
}
