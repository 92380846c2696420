#pragma once

// Independent reference implementations used by the unit and acceptance
// tests. Each one is written the slow, obvious way and shares no code with
// the library routine it checks.

#include "magres/state_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace oracle {

/// Ridge weights from the normal equations (X^T X + lambda I) w = X^T y,
/// formed explicitly and solved by Gaussian elimination with partial pivoting
/// in long double.
inline std::vector<double> ridge_normal_equations(const std::vector<std::vector<double>>& x,
                                                  const std::vector<double>& y, double lambda) {
    const std::size_t n = x.size();
    const std::size_t d = x.front().size();
    std::vector<std::vector<long double>> a(d, std::vector<long double>(d + 1, 0.0L));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            long double s = 0.0L;
            for (std::size_t r = 0; r < n; ++r) s += static_cast<long double>(x[r][i]) * x[r][j];
            a[i][j] = s + (i == j ? lambda : 0.0L);
        }
        long double s = 0.0L;
        for (std::size_t r = 0; r < n; ++r) s += static_cast<long double>(x[r][i]) * y[r];
        a[i][d] = s;
    }
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < d; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        if (a[col][col] == 0.0L) throw std::runtime_error("singular normal equations");
        for (std::size_t r = col + 1; r < d; ++r) {
            const long double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c <= d; ++c) a[r][c] -= f * a[col][c];
        }
    }
    std::vector<double> w(d);
    for (std::size_t i = d; i-- > 0;) {
        long double s = a[i][d];
        for (std::size_t j = i + 1; j < d; ++j) s -= a[i][j] * w[j];
        w[i] = static_cast<double>(s / a[i][i]);
    }
    return w;
}

/// NARMA recurrence written directly from its definition: y(n+1) depends on
/// y(n), the sum of y(n - i) for i = 0..delta (terms before the start are
/// zero) and u(n - delta) u(n).
inline std::vector<double> narma_bruteforce(const std::vector<double>& u, int delta) {
    std::vector<double> y(u.size() + 1, 0.0);
    auto y_at = [&](long k) { return k < 0 ? 0.0 : y[static_cast<std::size_t>(k)]; };
    auto u_at = [&](long k) { return k < 0 ? 0.0 : u[static_cast<std::size_t>(k)]; };
    for (long n = 0; n < static_cast<long>(u.size()); ++n) {
        double sum = 0.0;
        for (long i = 0; i <= delta; ++i) sum += y_at(n - i);
        y[static_cast<std::size_t>(n + 1)] = 0.3 * y_at(n) + 0.05 * y_at(n) * sum + 1.5 * u_at(n - delta) * u_at(n) + 0.1;
    }
    return y;
}

/// Exact two-sided rank-sum p-value by enumerating every assignment of the
/// pooled (average) ranks to the first sample.
inline double ranksum_exact_p(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> pooled(a);
    pooled.insert(pooled.end(), b.begin(), b.end());
    const std::size_t n = pooled.size();
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n; ++i) {
        double less = 0, equal = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (pooled[j] < pooled[i]) ++less;
            if (pooled[j] == pooled[i]) ++equal;
        }
        ranks[i] = less + (equal + 1) / 2.0;
    }
    double w_obs = 0;
    for (std::size_t i = 0; i < a.size(); ++i) w_obs += ranks[i];
    const double mean = a.size() * (n + 1) / 2.0;
    const double dev = std::fabs(w_obs - mean) - 1e-9;

    std::uint64_t total = 0, extreme = 0;
    const std::uint64_t limit = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
        if (static_cast<std::size_t>(__builtin_popcountll(mask)) != a.size()) continue;
        double w = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) w += ranks[i];
        ++total;
        if (std::fabs(w - mean) >= dev) ++extreme;
    }
    return static_cast<double>(extreme) / static_cast<double>(total);
}

/// Shift register of `stages` taps: row t holds u(t-1), ..., u(t-stages).
inline magres::StateMatrix delay_line(std::span<const double> u, int stages) {
    magres::StateMatrix s;
    s.values.setZero(static_cast<Eigen::Index>(u.size()), stages);
    for (std::size_t t = 0; t < u.size(); ++t)
        for (int k = 1; k <= stages; ++k)
            if (t >= static_cast<std::size_t>(k)) s.values(static_cast<Eigen::Index>(t), k - 1) = u[t - static_cast<std::size_t>(k)];
    return s;
}

}  // namespace oracle
