#pragma once

// Genotype encodings for films and ESNs, and the task evaluation that turns a
// genotype into validation / test NMSE.

#include "magres/esn.hpp"
#include "magres/evolve.hpp"
#include "magres/film_reservoir.hpp"
#include "magres/readout.hpp"
#include "magres/rng.hpp"
#include "magres/tasks.hpp"

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace magres {

/// Maps an input sequence to reservoir states (including any output filter).
using DriveFn = std::function<StateMatrix(std::span<const double>)>;

struct ScoreOptions {
    std::vector<double> lambda_grid = default_lambda_grid();
    RidgeOptions ridge{.intercept = true};
};

struct Score {
    Fitness fitness;
    double lambda = 0.0;
};

/// Drives each split separately, drops the washout, picks lambda on the
/// validation split and reports validation and test NMSE.
inline Score score_reservoir(const DriveFn& drive, const TaskData& task, const ScoreOptions& options = {}) {
    auto design = [&](const Split& s) {
        StateMatrix st = drive(task.input_of(s));
        if (st.rows() != static_cast<Eigen::Index>(s.length)) throw ConfigError("reservoir returned the wrong row count");
        if (!st.values.allFinite()) throw NumericalError("non-finite reservoir state", 0);
        return Eigen::MatrixXd(st.values.bottomRows(st.rows() - task.washout));
    };
    auto targets = [&](const Split& s) {
        const auto t = task.target_of(s).subspan(static_cast<std::size_t>(task.washout));
        return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(t.data(), static_cast<Eigen::Index>(t.size())));
    };
    const Eigen::MatrixXd x_train = design(task.train);
    const Eigen::MatrixXd x_val = design(task.validation);
    const Eigen::MatrixXd x_test = design(task.test);
    const Eigen::VectorXd y_test = targets(task.test);

    const RidgeSelection sel = select_ridge(x_train, targets(task.train), x_val, targets(task.validation),
                                            options.lambda_grid, options.ridge);
    Score s;
    s.fitness.val_nmse = sel.val_nmse;
    s.fitness.test_nmse = nmse(sel.readout.predict_scalar(x_test), y_test);
    s.lambda = sel.readout.ridge_lambda;
    return s;
}

/// Fixed physical setting a film genotype is decoded into.
struct FilmSetting {
    MaterialParams material = kCobalt;
    int grid_side = 7;
    double thickness = 0.1 * constants::nanometre;
    double temperature = 0.0;
    FilmSimOptions sim;
};

/// Film genotype: [w_in(u) per cell, w_in(bias) per cell, b, damping, leak].
class FilmGenomeCodec {
public:
    explicit FilmGenomeCodec(FilmSetting setting) : setting_(std::move(setting)) {
        if (setting_.grid_side < 1) throw ConfigError("grid side must be at least 1");
    }

    const FilmSetting& setting() const { return setting_; }
    int cells() const { return setting_.grid_side * setting_.grid_side; }
    std::size_t size() const { return static_cast<std::size_t>(2 * cells() + 3); }

    std::vector<GeneBounds> bounds() const {
        std::vector<GeneBounds> b(static_cast<std::size_t>(2 * cells()), GeneBounds{-1.0, 1.0});
        b.push_back({1e-3, 2.0});  // field scaling
        b.push_back({1e-3, 1.0});  // damping
        b.push_back({1e-3, 1.0});  // leak
        return b;
    }

    ReservoirGenome decode(std::span<const double> genes) const {
        if (genes.size() != size()) throw ConfigError("film genotype has the wrong length");
        const int n = cells();
        ReservoirGenome g;
        g.w_in.resize(n, 2);
        for (int i = 0; i < n; ++i) {
            g.w_in(i, 0) = genes[static_cast<std::size_t>(i)];
            g.w_in(i, 1) = genes[static_cast<std::size_t>(n + i)];
        }
        g.b = genes[static_cast<std::size_t>(2 * n)];
        g.alpha_damping = genes[static_cast<std::size_t>(2 * n + 1)];
        g.leak_a = genes[static_cast<std::size_t>(2 * n + 2)];
        g.material = setting_.material;
        g.grid_side = setting_.grid_side;
        g.thickness = setting_.thickness;
        g.temperature = setting_.temperature;
        return g;
    }

    std::vector<double> encode(const ReservoirGenome& g) const {
        const int n = cells();
        if (g.w_in.rows() != n) throw ConfigError("genome does not match the codec grid");
        std::vector<double> genes(size());
        for (int i = 0; i < n; ++i) {
            genes[static_cast<std::size_t>(i)] = g.w_in(i, 0);
            genes[static_cast<std::size_t>(n + i)] = g.w_in(i, 1);
        }
        genes[static_cast<std::size_t>(2 * n)] = g.b;
        genes[static_cast<std::size_t>(2 * n + 1)] = g.alpha_damping;
        genes[static_cast<std::size_t>(2 * n + 2)] = g.leak_a;
        return genes;
    }

private:
    FilmSetting setting_;
};

/// Drive function for a film: relaxed start, thermal noise from `noise_seed`,
/// leaky filter applied.
inline DriveFn film_drive_fn(std::shared_ptr<const FilmReservoir> film, std::uint64_t noise_seed) {
    return [film = std::move(film), noise_seed](std::span<const double> input) {
        return leaky_filter(film->drive(input, noise_seed), film->genome().leak_a);
    };
}

/// Scores one film genome. Each split gets its own thermal-noise stream.
inline Score evaluate_film(const ReservoirGenome& genome, const FilmSimOptions& sim, const TaskData& task,
                           std::uint64_t noise_seed, const ScoreOptions& options = {}) {
    const FilmReservoir film(genome, sim);
    std::uint64_t split = 0;
    auto drive = [&](std::span<const double> input) {
        return leaky_filter(film.drive(input, derive_seed(noise_seed, split++)), genome.leak_a);
    };
    return score_reservoir(drive, task, options);
}

inline EvalFn film_eval_fn(const FilmGenomeCodec& codec, const TaskData& task, std::uint64_t noise_seed,
                           ScoreOptions options = {}) {
    return [&codec, &task, noise_seed, options](std::span<const double> genes) {
        return evaluate_film(codec.decode(genes), codec.setting().sim, task, noise_seed, options).fitness;
    };
}

struct EsnSetting {
    Topology topology = Topology::random;
    /// Node count for random networks; lattice networks use side = sqrt(nodes).
    int nodes = 100;
    /// Evolve every nonzero weight instead of only the scalings and a regeneration seed.
    bool evolve_weights = false;
    /// Seed fixing the weight pattern when weights are evolved.
    std::uint64_t weight_seed = 1;
};

inline constexpr double kSeedGeneSpan = 1e6;

/// ESN genotype: [b, c, leak, regeneration seed] or, with evolved weights,
/// [b, c, leak, nonzero input weights..., nonzero internal weights...].
class EsnGenomeCodec {
public:
    explicit EsnGenomeCodec(EsnSetting setting) : setting_(setting) {
        if (setting_.topology == Topology::lattice) {
            side_ = static_cast<int>(std::lround(std::sqrt(static_cast<double>(setting_.nodes))));
            if (side_ * side_ != setting_.nodes) throw ConfigError("lattice ESN node count must be a square");
        }
        if (setting_.evolve_weights) {
            base_ = generate(setting_.weight_seed);
            for (int c = 0; c < 2; ++c)
                for (int i = 0; i < base_.n_nodes; ++i)
                    if (base_.w_in(i, c) != 0.0) input_slots_.push_back({i, c});
        }
    }

    const EsnSetting& setting() const { return setting_; }

    std::size_t size() const {
        return setting_.evolve_weights ? 3 + input_slots_.size() + static_cast<std::size_t>(base_.w.nonZeros()) : 4;
    }

    std::vector<GeneBounds> bounds() const {
        std::vector<GeneBounds> b{{0.01, 2.0}, {0.01, 2.0}, {0.01, 1.0}};
        if (!setting_.evolve_weights) {
            b.push_back({0.0, kSeedGeneSpan});
            return b;
        }
        b.resize(size(), GeneBounds{-3.0, 3.0});
        return b;
    }

    EsnConfig decode(std::span<const double> genes) const {
        if (genes.size() != size()) throw ConfigError("ESN genotype has the wrong length");
        EsnConfig cfg;
        if (!setting_.evolve_weights) {
            cfg = generate(static_cast<std::uint64_t>(std::floor(genes[3])));
        } else {
            cfg = base_;
            std::size_t k = 3;
            for (const auto& [i, c] : input_slots_) cfg.w_in(i, c) = genes[k++];
            for (Eigen::Index o = 0; o < cfg.w.outerSize(); ++o)
                for (Eigen::SparseMatrix<double>::InnerIterator it(cfg.w, o); it; ++it) it.valueRef() = genes[k++];
        }
        cfg.b = genes[0];
        cfg.c = genes[1];
        cfg.leak_a = genes[2];
        return cfg;
    }

private:
    EsnConfig generate(std::uint64_t seed) const {
        const std::uint64_t s = derive_seed(seed, 0xE5);
        return setting_.topology == Topology::random ? make_random_esn(setting_.nodes, s) : make_lattice_esn(side_, s);
    }

    struct Slot {
        int row;
        int col;
    };

    EsnSetting setting_;
    int side_ = 0;
    EsnConfig base_;
    std::vector<Slot> input_slots_;
};

inline DriveFn esn_drive_fn(EsnConfig cfg) {
    return [cfg = std::move(cfg)](std::span<const double> input) { return drive_esn(cfg, input); };
}

inline Score evaluate_esn(const EsnConfig& cfg, const TaskData& task, const ScoreOptions& options = {}) {
    return score_reservoir([&](std::span<const double> input) { return drive_esn(cfg, input); }, task, options);
}

inline EvalFn esn_eval_fn(const EsnGenomeCodec& codec, const TaskData& task, ScoreOptions options = {}) {
    return [&codec, &task, options](std::span<const double> genes) {
        return evaluate_esn(codec.decode(genes), task, options).fitness;
    };
}

}  // namespace magres
