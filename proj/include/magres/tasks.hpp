#pragma once

// Benchmark tasks: NARMA-n generation and Santa Fe laser ingestion, each with
// a fixed train / validation / test split and a per-split washout.

#include "magres/errors.hpp"
#include "magres/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace magres {

struct Split {
    std::size_t begin = 0;
    std::size_t length = 0;
    std::size_t end() const { return begin + length; }
};

struct TaskData {
    std::string name;
    std::vector<double> input;
    std::vector<double> target;
    Split train, validation, test;
    int washout = 50;
    /// Seed that actually produced the data (NARMA regenerates divergent draws).
    std::uint64_t seed = 0;
    int regenerations = 0;

    std::span<const double> input_of(const Split& s) const { return std::span(input).subspan(s.begin, s.length); }
    std::span<const double> target_of(const Split& s) const { return std::span(target).subspan(s.begin, s.length); }
};

/// Contiguous 60 / 20 / 20 split of n samples (3000 / 1000 / 1000 for 5000).
inline void assign_splits(TaskData& task, std::size_t n_train, std::size_t n_val, std::size_t n_test) {
    task.train = {0, n_train};
    task.validation = {n_train, n_val};
    task.test = {n_train + n_val, n_test};
    for (const Split* s : {&task.train, &task.validation, &task.test})
        if (s->length <= static_cast<std::size_t>(task.washout))
            throw ConfigError("every split must be longer than the washout");
}

struct NarmaOptions {
    /// Use the input lag delta = 10 for every order instead of delta = order - 1.
    bool literal_delta = false;
    double divergence_bound = 10.0;
    int max_regenerations = 1000;
};

inline int narma_delta(int order, const NarmaOptions& options) { return options.literal_delta ? 10 : order - 1; }

/// y(t+1) = 0.3 y(t) + 0.05 y(t) sum_{i=0..delta} y(t-i) + 1.5 u(t-delta) u(t) + 0.1,
/// with zero history. Returns y(0..u.size()), one longer than u.
inline std::vector<double> narma_series(std::span<const double> u, int delta) {
    constexpr double alpha = 0.3, beta = 0.05, gamma = 0.1;
    std::vector<double> y(u.size() + 1, 0.0);
    const auto d = static_cast<std::size_t>(delta);
    for (std::size_t t = 0; t < u.size(); ++t) {
        double window = 0.0;
        for (std::size_t i = 0; i <= d && i <= t; ++i) window += y[t - i];
        const double u_lag = t >= d ? u[t - d] : 0.0;
        y[t + 1] = alpha * y[t] + beta * y[t] * window + 1.5 * u_lag * u[t] + gamma;
    }
    return y;
}

/// NARMA-`order` task of `length` steps: input u ~ U[0, 0.5], target y(t+1).
inline TaskData narma_generate(int order, std::size_t length, std::uint64_t seed, NarmaOptions options = {}) {
    if (order < 1) throw ConfigError("NARMA order must be positive");
    TaskData task;
    if (length <= static_cast<std::size_t>(order + task.washout))
        throw ConfigError("NARMA length must exceed order + washout");
    const int delta = narma_delta(order, options);
    task.name = "narma" + std::to_string(order);

    for (int attempt = 0; attempt <= options.max_regenerations; ++attempt) {
        const std::uint64_t s = seed + static_cast<std::uint64_t>(attempt);
        Rng rng(s);
        std::uniform_real_distribution<double> dist(0.0, 0.5);
        std::vector<double> u(length);
        for (double& v : u) v = dist(rng);
        std::vector<double> y = narma_series(u, delta);
        const bool diverged = std::any_of(y.begin(), y.end(),
                                          [&](double v) { return !std::isfinite(v) || std::abs(v) > options.divergence_bound; });
        if (diverged) continue;
        task.input = std::move(u);
        task.target.assign(y.begin() + 1, y.end());
        task.seed = s;
        task.regenerations = attempt;
        const std::size_t n_train = length * 3 / 5;
        const std::size_t n_val = length / 5;
        assign_splits(task, n_train, n_val, length - n_train - n_val);
        return task;
    }
    throw ConfigError("NARMA-" + std::to_string(order) + " diverged for every regenerated seed (delta = " +
                      std::to_string(delta) + "); the literal delta = 10 option gives a bounded series");
}

inline constexpr std::size_t kLaserPairs = 2000;

/// Reads a Santa Fe style file (one integer sample per line). The first 2001
/// samples give 2000 (value(t), value(t+1)) pairs split 1200 / 400 / 400;
/// values are scaled to [0, 1] by the training-input range.
inline TaskData load_laser(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IngestionError("cannot open laser data file " + path.string());
    std::vector<double> values;
    std::string line;
    long line_no = 0;
    while (values.size() < kLaserPairs + 1 && std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        const char* b = line.data() + first;
        const char* e = line.data() + last + 1;
        long long v = 0;
        auto [ptr, ec] = std::from_chars(b, e, v);
        if (ec != std::errc() || ptr != e) throw IngestionError("malformed laser sample '" + line + "'", line_no);
        values.push_back(static_cast<double>(v));
    }
    if (values.size() < kLaserPairs + 1)
        throw IngestionError("laser file holds " + std::to_string(values.size()) + " samples, need " +
                                 std::to_string(kLaserPairs + 1),
                             line_no);

    TaskData task;
    task.name = "laser";
    task.input.assign(values.begin(), values.begin() + kLaserPairs);
    task.target.assign(values.begin() + 1, values.begin() + kLaserPairs + 1);
    assign_splits(task, 1200, 400, 400);

    const auto [lo_it, hi_it] = std::minmax_element(task.input.begin(), task.input.begin() + 1200);
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (!(hi > lo)) throw IngestionError("laser training data has zero range; cannot normalise");
    for (double& v : task.input) v = (v - lo) / (hi - lo);
    for (double& v : task.target) v = (v - lo) / (hi - lo);
    return task;
}

/// Offline stand-in for the laser data: intensity x^2 of a Lorenz system
/// sampled every 0.08 time units and quantised to 0..255.
inline std::vector<int> synthetic_laser_series(std::size_t n, std::uint64_t seed = 1) {
    Rng rng(seed);
    std::uniform_real_distribution<double> jitter(-1.0, 1.0);
    double x = 1.0 + jitter(rng), y = 1.0 + jitter(rng), z = 20.0 + jitter(rng);
    constexpr double sigma = 10.0, rho = 28.0, beta = 8.0 / 3.0;
    constexpr double h = 0.01;
    constexpr int per_sample = 8;
    auto deriv = [&](double a, double b, double c, double& da, double& db, double& dc) {
        da = sigma * (b - a);
        db = a * (rho - c) - b;
        dc = a * b - beta * c;
    };
    auto rk4 = [&]() {
        double k1x, k1y, k1z, k2x, k2y, k2z, k3x, k3y, k3z, k4x, k4y, k4z;
        deriv(x, y, z, k1x, k1y, k1z);
        deriv(x + 0.5 * h * k1x, y + 0.5 * h * k1y, z + 0.5 * h * k1z, k2x, k2y, k2z);
        deriv(x + 0.5 * h * k2x, y + 0.5 * h * k2y, z + 0.5 * h * k2z, k3x, k3y, k3z);
        deriv(x + h * k3x, y + h * k3y, z + h * k3z, k4x, k4y, k4z);
        x += h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
        y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
        z += h / 6.0 * (k1z + 2 * k2z + 2 * k3z + k4z);
    };
    for (int i = 0; i < 2000; ++i) rk4();  // leave the transient
    std::vector<int> out(n);
    for (auto& v : out) {
        for (int k = 0; k < per_sample; ++k) rk4();
        v = std::clamp(static_cast<int>(std::lround(x * x * 255.0 / 400.0)), 0, 255);
    }
    return out;
}

inline void write_laser_file(const std::filesystem::path& path, std::span<const int> values) {
    std::ofstream out(path);
    if (!out) throw IngestionError("cannot write laser data file " + path.string());
    for (int v : values) out << v << '\n';
}

}  // namespace magres
