#include "magres/readout.hpp"
#include "magres/rng.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace magres;

namespace {

Eigen::MatrixXd random_matrix(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    return Eigen::MatrixXd::NullaryExpr(rows, cols, [&]() { return n(rng); });
}

std::vector<std::vector<double>> to_rows(const Eigen::MatrixXd& m) {
    std::vector<std::vector<double>> r(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
    return r;
}

}  // namespace

TEST(Ridge, IdentityDesignInterpolates) {
    const Eigen::MatrixXd x = Eigen::MatrixXd::Identity(6, 6);
    const Eigen::VectorXd y = Eigen::VectorXd::Unit(6, 0);
    const Readout r = train_ridge(x, y, 0.0);
    EXPECT_LT((r.w_out.row(0).transpose() - y).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Ridge, OrthonormalDesignShrinks) {
    const Eigen::MatrixXd x = Eigen::MatrixXd::Identity(6, 6);
    const Eigen::VectorXd y = Eigen::VectorXd::Unit(6, 0);
    for (double lambda : {0.1, 1.0, 7.5}) {
        const Readout r = train_ridge(x, y, lambda);
        EXPECT_LT((r.w_out.row(0).transpose() - y / (1.0 + lambda)).cwiseAbs().maxCoeff(), 1e-14);
    }
}

TEST(Ridge, MatchesNormalEquationsOracle) {
    Rng rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::MatrixXd x = random_matrix(50, 5, rng);
        const Eigen::VectorXd y = random_matrix(50, 1, rng);
        const double lambda = trial % 2 ? 1e-3 : 0.0;
        const Readout r = train_ridge(x, y, lambda);
        const auto w = oracle::ridge_normal_equations(to_rows(x), std::vector<double>(y.data(), y.data() + 50), lambda);
        for (int j = 0; j < 5; ++j) EXPECT_NEAR(r.w_out(0, j), w[static_cast<std::size_t>(j)], 1e-8 * std::abs(w[static_cast<std::size_t>(j)]) + 1e-14);
    }
}

TEST(Ridge, InterceptMatchesAugmentedOracle) {
    // with an intercept the bias is unpenalised: equivalent to centring X and y
    Rng rng(5);
    const Eigen::MatrixXd x = (random_matrix(40, 3, rng).array() + 2.0).matrix();
    const Eigen::VectorXd y = (random_matrix(40, 1, rng).array() + 5.0).matrix();
    const Readout r = train_ridge(x, y, 0.0, RidgeOptions{.intercept = true});
    Eigen::MatrixXd xa(40, 4);
    xa << x, Eigen::VectorXd::Ones(40);
    const auto w = oracle::ridge_normal_equations(to_rows(xa), std::vector<double>(y.data(), y.data() + 40), 0.0);
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(r.w_out(0, j), w[static_cast<std::size_t>(j)], 1e-9);
    EXPECT_NEAR(r.bias(0), w[3], 1e-9);
}

TEST(Ridge, SingularAtZeroLambda) {
    Eigen::MatrixXd x(10, 3);
    Rng rng(1);
    x.col(0) = random_matrix(10, 1, rng);
    x.col(1) = random_matrix(10, 1, rng);
    x.col(2) = x.col(0) + x.col(1);
    const Eigen::VectorXd y = random_matrix(10, 1, rng);
    EXPECT_THROW(train_ridge(x, y, 0.0), SingularError);
    EXPECT_NO_THROW(train_ridge(x, y, 1e-6));
}

TEST(Ridge, RejectsBadArguments) {
    const Eigen::MatrixXd x = Eigen::MatrixXd::Identity(3, 3);
    EXPECT_THROW(train_ridge(x, Eigen::VectorXd(Eigen::VectorXd::Ones(3)), -1.0), ConfigError);
    EXPECT_THROW(train_ridge(x, Eigen::VectorXd(Eigen::VectorXd::Ones(4)), 1.0), ConfigError);
}

TEST(Ridge, WeightNormShrinksWithLambda) {
    Rng rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::MatrixXd x = random_matrix(30, 8, rng);
        const Eigen::VectorXd y = random_matrix(30, 1, rng);
        double prev = std::numeric_limits<double>::infinity();
        for (double lambda : {1e-8, 1e-4, 1e-2, 1.0, 100.0}) {
            const double norm = train_ridge(x, y, lambda).w_out.norm();
            EXPECT_LE(norm, prev * (1 + 1e-12));
            prev = norm;
        }
    }
}

TEST(Ridge, TrainErrorFallsAsLambdaShrinks) {
    Rng rng(10);
    const Eigen::MatrixXd x = random_matrix(40, 6, rng);
    const Eigen::VectorXd y = random_matrix(40, 1, rng);
    double prev = std::numeric_limits<double>::infinity();
    for (double lambda : {100.0, 1.0, 1e-2, 1e-4, 0.0}) {
        const Readout r = train_ridge(x, y, lambda);
        const double e = nmse(r.predict_scalar(x), y);
        EXPECT_LE(e, prev + 1e-12);
        prev = e;
    }
}

TEST(Ridge, StateMatrixOverloadDropsWashout) {
    Rng rng(3);
    StateMatrix s;
    s.values = random_matrix(60, 4, rng);
    s.washout = 10;
    std::vector<double> y(60);
    for (std::size_t i = 0; i < 60; ++i) y[i] = std::sin(static_cast<double>(i));
    const Readout a = train_ridge(s, y, 1e-3);
    const Readout b = train_ridge(Eigen::MatrixXd(s.values.bottomRows(50)),
                                  Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(y.data() + 10, 50)), 1e-3);
    EXPECT_TRUE((a.w_out.array() == b.w_out.array()).all());
    std::vector<double> short_y(59);
    EXPECT_THROW(train_ridge(s, short_y, 1e-3), ConfigError);
}

TEST(Nmse, PerfectPredictionIsZero) {
    const std::vector<double> t{1, 2, 3, 4};
    EXPECT_EQ(nmse(t, t), 0.0);
}

TEST(Nmse, MeanPredictionIsOne) {
    const std::vector<double> t{1, 2, 3, 4, 10};
    const std::vector<double> p(5, 4.0);
    EXPECT_DOUBLE_EQ(nmse(p, t), 1.0);
}

TEST(Nmse, ConstantOffsetByHand) {
    // target {0, 2}: variance sum 2; offset c = 0.5 gives 2 * 0.25 / 2
    const std::vector<double> t{0, 2};
    const std::vector<double> p{0.5, 2.5};
    EXPECT_DOUBLE_EQ(nmse(p, t), 0.25);
}

TEST(Nmse, InvariantUnderAffineRescaling) {
    const std::vector<double> t{0.3, -1.0, 2.5, 0.7, 1.1};
    const std::vector<double> p{0.2, -0.8, 2.0, 1.0, 1.3};
    std::vector<double> t2, p2;
    for (std::size_t i = 0; i < t.size(); ++i) {
        t2.push_back(3.0 * t[i] - 7.0);
        p2.push_back(3.0 * p[i] - 7.0);
    }
    EXPECT_NEAR(nmse(p2, t2), nmse(p, t), 1e-12);
}

TEST(Nmse, Errors) {
    const std::vector<double> c{1, 1, 1};
    EXPECT_THROW(nmse(c, c), ConfigError);
    const std::vector<double> one{1};
    EXPECT_THROW(nmse(one, one), ConfigError);
    const std::vector<double> two{1, 2};
    EXPECT_THROW(nmse(two, c), ConfigError);
}

TEST(RidgeSelection, PicksBestValidationLambda) {
    Rng rng(12);
    const Eigen::MatrixXd xt = random_matrix(40, 30, rng);
    const Eigen::MatrixXd xv = random_matrix(40, 30, rng);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(30);
    w(0) = 1.0;
    const Eigen::VectorXd noise_t = random_matrix(40, 1, rng), noise_v = random_matrix(40, 1, rng);
    const Eigen::VectorXd yt = xt * w + noise_t, yv = xv * w + noise_v;
    const RidgeSelection sel = select_ridge(xt, yt, xv, yv);
    for (double lambda : default_lambda_grid())
        EXPECT_LE(sel.val_nmse, nmse(train_ridge(xt, yt, lambda).predict_scalar(xv), yv) + 1e-15);
}
