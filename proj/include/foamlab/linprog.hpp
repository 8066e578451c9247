#pragma once

#include <Eigen/Dense>

namespace foamlab {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  Eigen::VectorXd x;
};

/// maximize c·x subject to A x <= b with x free. Dense two-phase simplex with
/// Bland's rule; intended for the small programs in this library (tens of rows).
LpResult maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

}  // namespace foamlab
