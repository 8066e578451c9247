#include "foamlab/linprog.hpp"

#include <vector>

#include "foamlab/error.hpp"

namespace foamlab {
namespace {

constexpr double kPivotEps = 1e-11;
constexpr int kMaxPivots = 20000;

struct Tableau {
  Eigen::MatrixXd rows;  // m x (cols + 1), last column is the right-hand side
  std::vector<int> basis;

  int cols() const { return static_cast<int>(rows.cols()) - 1; }
  int m() const { return static_cast<int>(rows.rows()); }

  void pivot(int r, int c) {
    rows.row(r) /= rows(r, c);
    for (int i = 0; i < m(); ++i) {
      if (i != r && rows(i, c) != 0.0) rows.row(i) -= rows(i, c) * rows.row(r);
    }
    basis[r] = c;
  }
};

enum class Outcome { Optimal, Unbounded };

Outcome run_simplex(Tableau& t, const Eigen::VectorXd& cost, int allowed_cols) {
  for (int iter = 0; iter < kMaxPivots; ++iter) {
    int enter = -1;
    for (int j = 0; j < allowed_cols && enter < 0; ++j) {
      double reduced = cost(j);
      for (int i = 0; i < t.m(); ++i) reduced -= cost(t.basis[i]) * t.rows(i, j);
      if (reduced > kPivotEps) enter = j;
    }
    if (enter < 0) return Outcome::Optimal;

    int leave = -1;
    double best = 0.0;
    for (int i = 0; i < t.m(); ++i) {
      const double a = t.rows(i, enter);
      if (a <= kPivotEps) continue;
      const double ratio = t.rows(i, t.cols()) / a;
      if (leave < 0 || ratio < best - 1e-14 ||
          (ratio <= best + 1e-14 && t.basis[i] < t.basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave < 0) return Outcome::Unbounded;
    t.pivot(leave, enter);
  }
  throw Error(ErrorCode::LPFailure, "polytope-geometry", "simplex exceeded pivot budget");
}

}  // namespace

LpResult maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  int artificials = 0;
  for (int i = 0; i < m; ++i) artificials += b(i) < 0.0 ? 1 : 0;

  const int structural = 2 * n + m;
  const int total = structural + artificials;
  Tableau t;
  t.rows = Eigen::MatrixXd::Zero(m, total + 1);
  t.basis.assign(m, -1);
  int next_art = structural;
  for (int i = 0; i < m; ++i) {
    const double sign = b(i) < 0.0 ? -1.0 : 1.0;
    t.rows.block(i, 0, 1, n) = sign * A.row(i);
    t.rows.block(i, n, 1, n) = -sign * A.row(i);
    t.rows(i, 2 * n + i) = sign;
    t.rows(i, total) = sign * b(i);
    if (b(i) < 0.0) {
      t.rows(i, next_art) = 1.0;
      t.basis[i] = next_art++;
    } else {
      t.basis[i] = 2 * n + i;
    }
  }

  LpResult result;
  if (artificials > 0) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(total);
    phase1.tail(artificials).setConstant(-1.0);
    run_simplex(t, phase1, total);
    double infeasibility = 0.0;
    for (int i = 0; i < m; ++i) {
      if (t.basis[i] >= structural) infeasibility += t.rows(i, total);
    }
    if (infeasibility > 1e-9 * (1.0 + b.cwiseAbs().maxCoeff())) {
      result.status = LpStatus::Infeasible;
      return result;
    }
    for (int i = 0; i < m; ++i) {
      if (t.basis[i] < structural) continue;
      for (int j = 0; j < structural; ++j) {
        if (std::abs(t.rows(i, j)) > 1e-9) {
          t.pivot(i, j);
          break;
        }
      }
    }
  }

  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(total);
  phase2.head(n) = c;
  phase2.segment(n, n) = -c;
  if (run_simplex(t, phase2, structural) == Outcome::Unbounded) {
    result.status = LpStatus::Unbounded;
    return result;
  }

  Eigen::VectorXd z = Eigen::VectorXd::Zero(total);
  for (int i = 0; i < m; ++i) z(t.basis[i]) = t.rows(i, total);
  result.status = LpStatus::Optimal;
  result.x = z.head(n) - z.segment(n, n);
  result.value = c.dot(result.x);
  return result;
}

}  // namespace foamlab
