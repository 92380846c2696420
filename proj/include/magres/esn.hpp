#pragma once

// Digital baseline reservoirs: sparse random echo state networks and
// Moore-neighbourhood lattice networks sharing the leaky tanh update
//
//     x(t) = (1 - a) x(t-1) + a tanh(b W_in [u(t); 1] + c W x(t-1)).

#include "magres/errors.hpp"
#include "magres/rng.hpp"
#include "magres/state_matrix.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace magres {

enum class Topology { random, lattice };

inline std::string_view to_string(Topology t) { return t == Topology::random ? "random" : "lattice"; }

struct EsnConfig {
    int n_nodes = 0;
    Eigen::MatrixX2d w_in;            // [input, bias] weights per node
    Eigen::SparseMatrix<double> w;    // internal weights, row = receiving node
    double b = 1.0;
    double c = 1.0;
    double leak_a = 1.0;
    Topology topology = Topology::random;

    void validate() const {
        if (n_nodes < 1) throw ConfigError("ESN needs at least one node");
        if (w_in.rows() != n_nodes || w.rows() != n_nodes || w.cols() != n_nodes)
            throw ConfigError("ESN weight dimensions do not match the node count");
        if (!(leak_a >= 0 && leak_a <= 1)) throw ConfigError("ESN leak rate must lie in [0, 1]");
    }
};

inline constexpr double kEsnSparsity = 0.1;

namespace detail {

inline Eigen::MatrixX2d sparse_input_weights(int n, Rng& rng) {
    std::bernoulli_distribution keep(kEsnSparsity);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixX2d w_in = Eigen::MatrixX2d::Zero(n, 2);
    for (int c = 0; c < 2; ++c)
        for (int i = 0; i < n; ++i)
            if (keep(rng)) w_in(i, c) = normal(rng);
    return w_in;
}

}  // namespace detail

/// Random ESN: input and internal weights nonzero with probability 0.1, ~N(0, 1).
inline EsnConfig make_random_esn(int n, std::uint64_t seed) {
    if (n < 1) throw ConfigError("ESN needs at least one node");
    Rng rng(seed);
    EsnConfig cfg;
    cfg.n_nodes = n;
    cfg.topology = Topology::random;
    cfg.w_in = detail::sparse_input_weights(n, rng);

    std::bernoulli_distribution keep(kEsnSparsity);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Eigen::Triplet<double>> entries;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (keep(rng)) entries.emplace_back(i, j, normal(rng));
    cfg.w.resize(n, n);
    cfg.w.setFromTriplets(entries.begin(), entries.end());
    return cfg;
}

/// Square lattice of side x side nodes, each connected to its Moore
/// neighbourhood and to itself with N(0, 1) weights; open boundaries.
inline EsnConfig make_lattice_esn(int side, std::uint64_t seed) {
    if (side < 2) throw ConfigError("lattice side must be at least 2");
    Rng rng(seed);
    const int n = side * side;
    EsnConfig cfg;
    cfg.n_nodes = n;
    cfg.topology = Topology::lattice;
    cfg.w_in = detail::sparse_input_weights(n, rng);

    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Eigen::Triplet<double>> entries;
    for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const int nx = x + dx, ny = y + dy;
                    if (nx < 0 || ny < 0 || nx >= side || ny >= side) continue;
                    entries.emplace_back(y * side + x, ny * side + nx, normal(rng));
                }
    cfg.w.resize(n, n);
    cfg.w.setFromTriplets(entries.begin(), entries.end());
    return cfg;
}

inline Eigen::VectorXd esn_update(const EsnConfig& cfg, const Eigen::VectorXd& x_prev, double u) {
    const Eigen::VectorXd drive = cfg.b * (cfg.w_in.col(0) * u + cfg.w_in.col(1)) + cfg.c * (cfg.w * x_prev);
    return (1.0 - cfg.leak_a) * x_prev + cfg.leak_a * drive.array().tanh().matrix();
}

/// Runs the update over `input` from `x0` (zero when empty), one row per step.
inline StateMatrix drive_esn(const EsnConfig& cfg, std::span<const double> input, Eigen::VectorXd x0 = {}) {
    cfg.validate();
    Eigen::VectorXd x = x0.size() == 0 ? Eigen::VectorXd::Zero(cfg.n_nodes) : std::move(x0);
    if (x.size() != cfg.n_nodes) throw ConfigError("initial ESN state has the wrong size");
    StateMatrix out;
    out.values.resize(static_cast<Eigen::Index>(input.size()), cfg.n_nodes);
    for (std::size_t t = 0; t < input.size(); ++t) {
        x = esn_update(cfg, x, input[t]);
        out.values.row(static_cast<Eigen::Index>(t)) = x.transpose();
    }
    return out;
}

/// Nonzero internal weights in each row (incoming connections per node).
inline std::vector<int> incoming_counts(const EsnConfig& cfg) {
    std::vector<int> counts(static_cast<std::size_t>(cfg.n_nodes), 0);
    for (int k = 0; k < cfg.w.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(cfg.w, k); it; ++it)
            if (it.value() != 0.0) ++counts[static_cast<std::size_t>(it.row())];
    return counts;
}

}  // namespace magres
