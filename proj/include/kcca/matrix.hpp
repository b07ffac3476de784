#pragma once

#include <Eigen/Dense>

namespace kcca {

// Dense column-major storage is used throughout; rows are samples.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

}  // namespace kcca
