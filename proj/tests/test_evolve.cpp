#include "magres/evolve.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

using namespace magres;

namespace {

std::vector<GeneBounds> box(int n, double lo = -5.0, double hi = 5.0) { return std::vector<GeneBounds>(static_cast<std::size_t>(n), {lo, hi}); }

Fitness sphere(std::span<const double> g) {
    double s = 0;
    for (double v : g) s += v * v;
    return {s, 2 * s};
}

}  // namespace

TEST(Variation, ReflectionStaysInBounds) {
    const GeneBounds b{-1.0, 2.0};
    EXPECT_DOUBLE_EQ(reflect_into(0.5, b), 0.5);
    EXPECT_DOUBLE_EQ(reflect_into(2.5, b), 1.5);
    EXPECT_DOUBLE_EQ(reflect_into(-1.5, b), -0.5);
    EXPECT_DOUBLE_EQ(reflect_into(8.5, b), 1.5);  // three widths and 0.5 past lo
    EXPECT_DOUBLE_EQ(reflect_into(3.0, GeneBounds{1.0, 1.0}), 1.0);
}

TEST(Variation, FuzzGenesRemainInBounds) {
    const std::vector<GeneBounds> bounds{{-1, 1}, {0.001, 2}, {0.001, 1}, {0, 1e6}, {-3, 3}};
    Rng rng(123);
    std::vector<double> a = sample_uniform(bounds, rng);
    std::vector<double> b = sample_uniform(bounds, rng);
    for (int k = 0; k < 100000; ++k) {
        mutate(a, bounds, 0.5, rng);
        recombine(b, a, 0.5, rng);
        mutate(b, bounds, 1.0, rng);
        for (std::size_t i = 0; i < bounds.size(); ++i) {
            ASSERT_GE(a[i], bounds[i].lo);
            ASSERT_LE(a[i], bounds[i].hi);
            ASSERT_GE(b[i], bounds[i].lo);
            ASSERT_LE(b[i], bounds[i].hi);
        }
    }
}

TEST(Variation, MutationScaleIsTenthOfRange) {
    const std::vector<GeneBounds> bounds(1, GeneBounds{-1000.0, 1000.0});
    Rng rng(5);
    double sq = 0;
    const int n = 20000;
    for (int k = 0; k < n; ++k) {
        std::vector<double> g{0.0};
        mutate(g, bounds, 1.0, rng);
        sq += g[0] * g[0];
    }
    EXPECT_NEAR(std::sqrt(sq / n), 200.0, 5.0);
}

TEST(Mga, CopyWinnerWithoutMutation) {
    MgaParams p;
    p.population = 10;
    p.tournaments = 1;
    p.mutation_rate = 0.0;
    p.recombination_rate = 1.0;
    const auto bounds = box(4);
    const MgaResult r = mga_run(bounds, sphere, p, 3);
    // exactly one individual changed and it is a copy of some other member
    int copies = 0;
    for (std::size_t i = 0; i < r.population.size(); ++i)
        for (std::size_t j = 0; j < r.population.size(); ++j)
            if (i != j && r.population[i] == r.population[j]) ++copies;
    EXPECT_EQ(copies, 2);
    EXPECT_EQ(r.evaluations, 11);
}

TEST(Mga, SphereFunctionPilot) {
    // pilot runs over 30 seeds put the median final/initial ratio well under
    // 1% and the worst near 2.5%
    std::vector<double> ratios;
    for (std::uint64_t seed = 1; seed <= 9; ++seed) {
        const MgaResult r = mga_run(box(4), sphere, MgaParams{}, seed);
        ratios.push_back(r.best.val_nmse / r.history.front().best_val_nmse);
        EXPECT_EQ(r.best.test_nmse, 2 * r.best.val_nmse);
        EXPECT_EQ(r.evaluations, 2100);
        EXPECT_EQ(r.history.size(), 2001u);
        EXPECT_EQ(r.population.size(), 100u);
    }
    std::sort(ratios.begin(), ratios.end());
    EXPECT_LT(ratios[4], 0.01);
    EXPECT_LT(ratios.back(), 0.05);
}

TEST(Mga, BestIsNonIncreasingAndWinnersSurvive) {
    MgaParams p;
    p.population = 20;
    p.tournaments = 300;
    const MgaResult r = mga_run(box(3), sphere, p, 8);
    for (std::size_t i = 1; i < r.history.size(); ++i) {
        EXPECT_LE(r.history[i].best_val_nmse, r.history[i - 1].best_val_nmse);
        EXPECT_EQ(r.history[i].tournament, static_cast<int>(i));
    }
    // the best individual ever found is still in the population
    double pop_best = std::numeric_limits<double>::infinity();
    for (const Fitness& f : r.fitness) pop_best = std::min(pop_best, f.val_nmse);
    EXPECT_EQ(pop_best, r.best.val_nmse);
}

TEST(Mga, DeterministicHistory) {
    MgaParams p;
    p.population = 15;
    p.tournaments = 100;
    const MgaResult a = mga_run(box(3), sphere, p, 77);
    const MgaResult b = mga_run(box(3), sphere, p, 77);
    ASSERT_EQ(a.history.size(), b.history.size());
    for (std::size_t i = 0; i < a.history.size(); ++i) {
        EXPECT_EQ(a.history[i].best_val_nmse, b.history[i].best_val_nmse);
        EXPECT_EQ(a.history[i].genome_id, b.history[i].genome_id);
    }
    EXPECT_EQ(a.best_genes, b.best_genes);
}

TEST(Mga, FailingEvaluationsScoreInfinity) {
    MgaParams p;
    p.population = 10;
    p.tournaments = 50;
    auto flaky = [](std::span<const double> g) -> Fitness {
        if (g[0] > 0) throw InstabilityError("unstable", 1.0);
        if (g[1] > 4) return {std::nan(""), 0.0};
        return sphere(g);
    };
    const MgaResult r = mga_run(box(2), flaky, p, 4);
    EXPECT_TRUE(std::isfinite(r.best.val_nmse));
    EXPECT_LE(r.best_genes[0], 0.0);
    for (const Fitness& f : r.fitness) EXPECT_FALSE(std::isnan(f.val_nmse));
}

TEST(Mga, RejectsBadParameters) {
    MgaParams p;
    p.population = 1;
    EXPECT_THROW(mga_run(box(2), sphere, p, 1), ConfigError);
    p.population = 10;
    p.tournaments = -1;
    EXPECT_THROW(mga_run(box(2), sphere, p, 1), ConfigError);
    std::vector<GeneBounds> bad{{1.0, 0.0}};
    EXPECT_THROW(mga_run(bad, sphere, MgaParams{}, 1), ConfigError);
}

TEST(RandomSearch, SingleSampleBatch) {
    const auto r = random_search(box(3), sphere, 1, 1, 5);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].running_best.size(), 1u);
    Rng rng = make_rng(5, 0);
    EXPECT_EQ(r[0].genes, sample_uniform(box(3), rng));
}

TEST(RandomSearch, RunningBestIsMonotone) {
    const auto r = random_search(box(4), sphere, 500, 3, 9);
    for (const BatchBest& b : r) {
        for (std::size_t i = 1; i < b.running_best.size(); ++i) EXPECT_LE(b.running_best[i], b.running_best[i - 1]);
        EXPECT_LE(b.fitness.val_nmse, b.running_best[99]);
        EXPECT_EQ(b.fitness.val_nmse, b.running_best.back());
    }
}

TEST(RandomSearch, BatchesUseIndependentStreams) {
    const auto three = random_search(box(4), sphere, 50, 3, 9);
    const auto five = random_search(box(4), sphere, 50, 5, 9);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(three[k].genes, five[k].genes);
    EXPECT_NE(five[0].genes, five[1].genes);
    EXPECT_THROW(random_search(box(1), sphere, 0, 1, 1), ConfigError);
}
