#pragma once

#include <Eigen/Dense>

namespace magres {

/// Time-major reservoir observations: one row per driven input, one column
/// per observed state component. The first `washout` rows are transients.
struct StateMatrix {
    Eigen::MatrixXd values;
    int washout = 0;

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }

    /// Rows after the washout.
    auto settled() const { return values.bottomRows(values.rows() - washout); }
};

}  // namespace magres
