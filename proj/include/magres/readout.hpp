#pragma once

// Ridge-regression readout and the NMSE score shared by films and ESNs.

#include "magres/errors.hpp"
#include "magres/state_matrix.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace magres {

struct Readout {
    Eigen::MatrixXd w_out;   // outputs x state-dim
    Eigen::VectorXd bias;    // one per output; zero without an intercept
    double ridge_lambda = 0.0;

    /// One row of outputs per row of `states`.
    Eigen::MatrixXd predict(const Eigen::MatrixXd& states) const {
        Eigen::MatrixXd y = states * w_out.transpose();
        y.rowwise() += bias.transpose();
        return y;
    }

    Eigen::VectorXd predict_scalar(const Eigen::MatrixXd& states) const { return predict(states).col(0); }
};

struct RidgeOptions {
    /// Fit an unpenalised constant offset alongside the weights.
    bool intercept = false;
};

/// Minimises |X w - y|^2 + lambda |w|^2 for every target column, i.e.
/// W_out = Y^T X (X^T X + lambda I)^-1. Solved as the augmented least-squares
/// problem [X; sqrt(lambda) I] w = [y; 0] by column-pivoted QR.
inline Readout train_ridge(const Eigen::MatrixXd& states, const Eigen::MatrixXd& targets, double lambda,
                           RidgeOptions options = {}) {
    if (!(lambda >= 0)) throw ConfigError("ridge lambda must be non-negative");
    if (states.rows() != targets.rows()) throw ConfigError("state and target row counts differ");
    if (states.rows() == 0 || states.cols() == 0) throw ConfigError("empty design matrix");

    const Eigen::Index n = states.rows();
    const Eigen::Index d = states.cols();

    Eigen::RowVectorXd x_mean = Eigen::RowVectorXd::Zero(d);
    Eigen::RowVectorXd y_mean = Eigen::RowVectorXd::Zero(targets.cols());
    if (options.intercept) {
        x_mean = states.colwise().mean();
        y_mean = targets.colwise().mean();
    }

    Eigen::MatrixXd a(n + d, d);
    a.topRows(n) = states.rowwise() - x_mean;
    a.bottomRows(d) = std::sqrt(lambda) * Eigen::MatrixXd::Identity(d, d);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n + d, targets.cols());
    rhs.topRows(n) = targets.rowwise() - y_mean;

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (lambda == 0.0) {
        qr.setThreshold(1e-12);
        if (qr.rank() < d)
            throw SingularError("ridge system is singular at lambda = 0; use a positive regularisation");
    }

    Readout r;
    r.w_out = qr.solve(rhs).transpose();
    r.bias = (y_mean - x_mean * r.w_out.transpose()).transpose();
    r.ridge_lambda = lambda;
    if (!r.w_out.allFinite() || !r.bias.allFinite()) throw SingularError("ridge solution is not finite");
    return r;
}

inline Readout train_ridge(const Eigen::MatrixXd& states, const Eigen::VectorXd& targets, double lambda,
                           RidgeOptions options = {}) {
    return train_ridge(states, Eigen::MatrixXd(targets), lambda, options);
}

/// Trains on the post-washout rows of `states` against the matching targets.
inline Readout train_ridge(const StateMatrix& states, std::span<const double> targets, double lambda,
                           RidgeOptions options = {}) {
    if (static_cast<Eigen::Index>(targets.size()) != states.rows())
        throw ConfigError("target length does not match the state matrix");
    const Eigen::Index keep = states.rows() - states.washout;
    if (keep <= 0) throw ConfigError("washout removes every row");
    const Eigen::Map<const Eigen::VectorXd> y(targets.data() + states.washout, keep);
    return train_ridge(Eigen::MatrixXd(states.settled()), Eigen::VectorXd(y), lambda, options);
}

/// Sum of squared errors over the total sum of squares of the target.
inline double nmse(std::span<const double> pred, std::span<const double> target) {
    if (pred.size() != target.size()) throw ConfigError("nmse needs equal-length sequences");
    if (target.size() < 2) throw ConfigError("nmse needs at least two samples");
    double mean = 0.0;
    for (double t : target) mean += t;
    mean /= static_cast<double>(target.size());
    double err = 0.0;
    double var = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
        err += (pred[i] - target[i]) * (pred[i] - target[i]);
        var += (target[i] - mean) * (target[i] - mean);
    }
    if (!(var > 0)) throw ConfigError("nmse is undefined for a constant target");
    return err / var;
}

inline double nmse(const Eigen::VectorXd& pred, const Eigen::VectorXd& target) {
    return nmse(std::span<const double>(pred.data(), static_cast<std::size_t>(pred.size())),
                std::span<const double>(target.data(), static_cast<std::size_t>(target.size())));
}

inline const std::vector<double>& default_lambda_grid() {
    static const std::vector<double> grid{1e-9, 1e-7, 1e-5, 1e-3, 1e-1};
    return grid;
}

struct RidgeSelection {
    Readout readout;
    double val_nmse = std::numeric_limits<double>::infinity();
};

/// Picks lambda from `grid` by NMSE on the validation set.
inline RidgeSelection select_ridge(const Eigen::MatrixXd& train_x, const Eigen::VectorXd& train_y,
                                   const Eigen::MatrixXd& val_x, const Eigen::VectorXd& val_y,
                                   const std::vector<double>& grid = default_lambda_grid(),
                                   RidgeOptions options = {}) {
    RidgeSelection best;
    bool found = false;
    for (double lambda : grid) {
        Readout r;
        try {
            r = train_ridge(train_x, train_y, lambda, options);
        } catch (const SingularError&) {
            continue;
        }
        const double score = nmse(r.predict_scalar(val_x), val_y);
        if (std::isnan(score)) continue;
        if (!found || score < best.val_nmse) {
            best.readout = std::move(r);
            best.val_nmse = score;
            found = true;
        }
    }
    if (!found) throw SingularError("no lambda in the grid gave a solvable ridge system");
    return best;
}

}  // namespace magres
