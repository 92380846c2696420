#pragma once

// Microbial genetic algorithm and the random-search baseline over bounded
// real-valued genotypes.

#include "magres/errors.hpp"
#include "magres/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <vector>

namespace magres {

struct GeneBounds {
    double lo = 0.0;
    double hi = 1.0;
    double range() const { return hi - lo; }
};

struct Fitness {
    double val_nmse = std::numeric_limits<double>::infinity();
    double test_nmse = std::numeric_limits<double>::infinity();
};

/// Returns validation (selection) and test (reporting) NMSE for a genotype.
using EvalFn = std::function<Fitness(std::span<const double>)>;

/// Calls `eval`, mapping any exception or NaN to +inf.
inline Fitness safe_evaluate(const EvalFn& eval, std::span<const double> genes) {
    Fitness f;
    try {
        f = eval(genes);
    } catch (const std::exception&) {
        return Fitness{};
    }
    if (std::isnan(f.val_nmse)) f.val_nmse = std::numeric_limits<double>::infinity();
    if (std::isnan(f.test_nmse)) f.test_nmse = std::numeric_limits<double>::infinity();
    return f;
}

/// Folds x back into [lo, hi] by mirror reflection at the bounds.
inline double reflect_into(double x, const GeneBounds& b) {
    const double width = b.range();
    if (width <= 0) return b.lo;
    if (x >= b.lo && x <= b.hi) return x;
    double t = std::fmod(x - b.lo, 2.0 * width);
    if (t < 0) t += 2.0 * width;
    return t <= width ? b.lo + t : b.hi - (t - width);
}

inline std::vector<double> sample_uniform(std::span<const GeneBounds> bounds, Rng& rng) {
    std::vector<double> g(bounds.size());
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        std::uniform_real_distribution<double> d(bounds[i].lo, bounds[i].hi);
        g[i] = d(rng);
    }
    return g;
}

/// Each loser gene takes the winner's value with probability `rate`.
inline void recombine(std::vector<double>& loser, std::span<const double> winner, double rate, Rng& rng) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (std::size_t i = 0; i < loser.size(); ++i)
        if (coin(rng) < rate) loser[i] = winner[i];
}

/// Each gene is perturbed with probability `rate` by N(0, (0.1 range)^2) and
/// reflected back into its bounds.
inline void mutate(std::vector<double>& genes, std::span<const GeneBounds> bounds, double rate, Rng& rng) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t i = 0; i < genes.size(); ++i) {
        if (coin(rng) < rate) genes[i] = reflect_into(genes[i] + 0.1 * bounds[i].range() * normal(rng), bounds[i]);
    }
}

struct MgaParams {
    int population = 100;
    int tournaments = 2000;
    double mutation_rate = 0.05;
    double recombination_rate = 0.5;
    double deme_fraction = 0.1;
};

struct MgaHistoryRow {
    int tournament = 0;  // 0 is the initial population
    double best_val_nmse = 0.0;
    double best_test_nmse = 0.0;
    std::uint64_t genome_id = 0;
};

struct MgaResult {
    std::vector<double> best_genes;
    Fitness best;
    std::uint64_t best_id = 0;
    std::vector<MgaHistoryRow> history;
    long evaluations = 0;
    /// Final population and fitness, for inspection.
    std::vector<std::vector<double>> population;
    std::vector<Fitness> fitness;
};

/// Steady-state microbial GA. Each tournament pairs a random individual with
/// one within `deme` places of it on a ring; the loser is overwritten by
/// recombination with and mutation of the winner and re-evaluated. Fitness is
/// memoised, so a tournament costs one evaluation.
inline MgaResult mga_run(std::span<const GeneBounds> bounds, const EvalFn& eval, const MgaParams& params,
                         std::uint64_t seed) {
    if (params.population < 2) throw ConfigError("MGA population must be at least 2");
    if (params.tournaments < 0) throw ConfigError("tournament count must be non-negative");
    for (const auto& b : bounds)
        if (!(b.hi >= b.lo)) throw ConfigError("gene bounds must satisfy lo <= hi");

    Rng rng(seed);
    const int pop = params.population;
    const int deme = std::clamp(static_cast<int>(std::lround(params.deme_fraction * pop)), 1, pop - 1);

    MgaResult r;
    r.population.reserve(static_cast<std::size_t>(pop));
    std::vector<std::uint64_t> ids(static_cast<std::size_t>(pop));
    std::uint64_t next_id = 0;
    for (int i = 0; i < pop; ++i) r.population.push_back(sample_uniform(bounds, rng));
    for (int i = 0; i < pop; ++i) {
        r.fitness.push_back(safe_evaluate(eval, r.population[static_cast<std::size_t>(i)]));
        ids[static_cast<std::size_t>(i)] = next_id++;
        ++r.evaluations;
    }

    auto record_best = [&](int tournament, int candidate) {
        const auto c = static_cast<std::size_t>(candidate);
        if (r.best_genes.empty() || r.fitness[c].val_nmse < r.best.val_nmse) {
            r.best_genes = r.population[c];
            r.best = r.fitness[c];
            r.best_id = ids[c];
        }
        if (tournament >= 0) r.history.push_back({tournament, r.best.val_nmse, r.best.test_nmse, r.best_id});
    };
    for (int i = 0; i < pop; ++i) record_best(-1, i);
    r.history.push_back({0, r.best.val_nmse, r.best.test_nmse, r.best_id});

    std::uniform_int_distribution<int> pick(0, pop - 1);
    std::uniform_int_distribution<int> offset(1, deme);
    std::bernoulli_distribution sign(0.5);
    for (int t = 1; t <= params.tournaments; ++t) {
        const int a = pick(rng);
        const int step = offset(rng);
        const int b = ((a + (sign(rng) ? step : -step)) % pop + pop) % pop;
        const auto ua = static_cast<std::size_t>(a);
        const auto ub = static_cast<std::size_t>(b);
        // ties go to the first contestant
        const bool a_wins = !(r.fitness[ub].val_nmse < r.fitness[ua].val_nmse);
        const std::size_t win = a_wins ? ua : ub;
        const std::size_t lose = a_wins ? ub : ua;

        recombine(r.population[lose], r.population[win], params.recombination_rate, rng);
        mutate(r.population[lose], bounds, params.mutation_rate, rng);
        r.fitness[lose] = safe_evaluate(eval, r.population[lose]);
        ids[lose] = next_id++;
        ++r.evaluations;
        record_best(t, static_cast<int>(lose));
    }
    return r;
}

struct BatchBest {
    int batch = 0;
    std::vector<double> genes;
    Fitness fitness;
    /// Best validation NMSE after each sample, for monotonicity checks.
    std::vector<double> running_best;
};

/// Uniform sampling within bounds; each batch draws from its own seed stream
/// and reports the sample with the lowest validation NMSE.
inline std::vector<BatchBest> random_search(std::span<const GeneBounds> bounds, const EvalFn& eval, int batch,
                                            int batches, std::uint64_t seed) {
    if (batch < 1 || batches < 1) throw ConfigError("random search needs positive batch size and count");
    std::vector<BatchBest> out;
    for (int k = 0; k < batches; ++k) {
        Rng rng = make_rng(seed, static_cast<std::uint64_t>(k));
        BatchBest best;
        best.batch = k;
        for (int i = 0; i < batch; ++i) {
            std::vector<double> g = sample_uniform(bounds, rng);
            const Fitness f = safe_evaluate(eval, g);
            if (best.genes.empty() || f.val_nmse < best.fitness.val_nmse) {
                best.genes = std::move(g);
                best.fitness = f;
            }
            best.running_best.push_back(best.fitness.val_nmse);
        }
        out.push_back(std::move(best));
    }
    return out;
}

}  // namespace magres
