#pragma once

// Task-independent reservoir measures (kernel rank, linear memory capacity)
// and the two-sided Wilcoxon rank-sum test.

#include "magres/errors.hpp"
#include "magres/evaluation.hpp"
#include "magres/readout.hpp"
#include "magres/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <span>
#include <vector>

namespace magres {

struct KernelRank {
    int rank = 0;
    int dim = 0;
    double normalised = 0.0;
    /// Every final state was zero; rank reported as 0.
    bool degenerate = false;
};

inline constexpr double kKernelRankTolerance = 1e-6;

/// Drives `n_streams` independent U[-1, 1] streams of `stream_len` steps and
/// counts singular values of the [dim x n_streams] final-state matrix above
/// tau * sigma_max.
inline KernelRank kernel_rank(const DriveFn& drive, int n_streams, int stream_len, std::uint64_t seed,
                              double tau = kKernelRankTolerance, int washout = 50) {
    if (n_streams < 1) throw ConfigError("kernel rank needs at least one stream");
    if (stream_len <= washout) throw ConfigError("kernel rank streams must be longer than the washout");
    Eigen::MatrixXd m;
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int s = 0; s < n_streams; ++s) {
        Rng rng = make_rng(seed, static_cast<std::uint64_t>(s));
        std::vector<double> u(static_cast<std::size_t>(stream_len));
        for (double& v : u) v = dist(rng);
        const StateMatrix st = drive(u);
        if (s == 0) m.resize(st.cols(), n_streams);
        if (st.cols() != m.rows()) throw ConfigError("reservoir changed state dimension between streams");
        m.col(s) = st.values.row(st.rows() - 1).transpose();
    }

    KernelRank kr;
    kr.dim = static_cast<int>(m.rows());
    if (!m.allFinite()) throw NumericalError("non-finite reservoir state in kernel rank", 0);
    const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXd>(m).singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) {
        kr.degenerate = true;
        return kr;
    }
    kr.rank = static_cast<int>((sv.array() > tau * sv(0)).count());
    kr.normalised = static_cast<double>(kr.rank) / kr.dim;
    return kr;
}

struct MemoryCapacity {
    double total = 0.0;
    std::vector<double> per_delay;  // r^2 for delay k = 1..max_delay
};

struct MemoryCapacityOptions {
    int washout = 50;
    /// Fraction of the post-washout sequence used for training; the rest is held out.
    double train_fraction = 0.5;
    double ridge_lambda = 1e-6;
};

inline double squared_correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const Eigen::ArrayXd da = a.array() - a.mean();
    const Eigen::ArrayXd db = b.array() - b.mean();
    const double saa = (da * da).sum();
    const double sbb = (db * db).sum();
    if (!(saa > 0) || !(sbb > 0)) return 0.0;
    const double sab = (da * db).sum();
    return sab * sab / (saa * sbb);
}

/// Sum over delays k = 1..max_delay of the held-out squared correlation
/// between u(t - k) and its ridge reconstruction from the state at t.
inline MemoryCapacity memory_capacity(const DriveFn& drive, int max_delay, int seq_len, std::uint64_t seed,
                                      const MemoryCapacityOptions& options = {}) {
    if (max_delay < 1) throw ConfigError("max delay must be positive");
    const int start = std::max(options.washout, max_delay);
    const int usable = seq_len - start;
    const int n_train = static_cast<int>(std::lround(options.train_fraction * usable));
    const int n_test = usable - n_train;
    if (n_train < 2 || n_test < 2) throw ConfigError("sequence too short for memory capacity");

    Rng rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> u(static_cast<std::size_t>(seq_len));
    for (double& v : u) v = dist(rng);
    const StateMatrix st = drive(u);
    if (st.rows() != seq_len) throw ConfigError("reservoir returned the wrong row count");
    if (!st.values.allFinite()) throw NumericalError("non-finite reservoir state in memory capacity", 0);

    const Eigen::MatrixXd x_train = st.values.middleRows(start, n_train);
    const Eigen::MatrixXd x_test = st.values.middleRows(start + n_train, n_test);
    const Eigen::Map<const Eigen::VectorXd> uu(u.data(), seq_len);

    MemoryCapacity mc;
    for (int k = 1; k <= max_delay; ++k) {
        const Eigen::VectorXd y_train = uu.segment(start - k, n_train);
        const Eigen::VectorXd y_test = uu.segment(start + n_train - k, n_test);
        const Readout r = train_ridge(x_train, y_train, options.ridge_lambda, RidgeOptions{.intercept = true});
        const double r2 = squared_correlation(r.predict_scalar(x_test), y_test);
        mc.per_delay.push_back(r2);
        mc.total += r2;
    }
    return mc;
}

struct RankSum {
    double w = 0.0;  // rank sum of the first sample
    double z = 0.0;
    double p = 1.0;
};

/// Two-sided Wilcoxon rank-sum test: normal approximation with tie and
/// continuity corrections. Both samples need at least five values.
inline RankSum wilcoxon_ranksum(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 5 || b.size() < 5) throw ConfigError("rank-sum test needs at least five values per sample");
    struct Obs {
        double v;
        bool first;
    };
    std::vector<Obs> all;
    for (double v : a) all.push_back({v, true});
    for (double v : b) all.push_back({v, false});
    for (const auto& o : all)
        if (std::isnan(o.v)) throw ConfigError("rank-sum test sample contains NaN");
    std::sort(all.begin(), all.end(), [](const Obs& x, const Obs& y) { return x.v < y.v; });

    const double n1 = static_cast<double>(a.size());
    const double n2 = static_cast<double>(b.size());
    const double n = n1 + n2;
    RankSum r;
    double tie_term = 0.0;
    for (std::size_t i = 0; i < all.size();) {
        std::size_t j = i;
        while (j < all.size() && all[j].v == all[i].v) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        for (std::size_t k = i; k < j; ++k)
            if (all[k].first) r.w += avg_rank;
        i = j;
    }
    const double mean = n1 * (n + 1) / 2.0;
    const double var = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1)));
    if (!(var > 0)) return r;
    const double diff = std::max(0.0, std::abs(r.w - mean) - 0.5);
    r.z = std::copysign(diff / std::sqrt(var), r.w - mean);
    r.p = std::min(1.0, std::erfc(std::abs(r.z) / std::sqrt(2.0)));
    return r;
}

}  // namespace magres
