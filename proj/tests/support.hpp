#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "foamlab/lattice.hpp"
#include "foamlab/polytope.hpp"

namespace foamlab::testing {

inline const double kPi = std::acos(-1.0);

// Random orthogonal matrix with determinant +1.
inline Mat random_rotation(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = g(rng);
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

// Product of a few elementary integer column operations.
inline Mat random_unimodular(int n, std::mt19937_64& rng, int steps = 6) {
  std::uniform_int_distribution<int> idx(0, n - 1);
  std::uniform_int_distribution<int> coef(-2, 2);
  Mat u = Mat::Identity(n, n);
  for (int s = 0; s < steps; ++s) {
    const int i = idx(rng);
    const int j = idx(rng);
    if (i == j) continue;
    u.col(i) += coef(rng) * u.col(j);
  }
  return u;
}

// Diagonally dominant basis: diagonal in [1, 1.5], off-diagonal in [-0.3, 0.3].
// Short vectors then have small integer coordinates.
inline Mat random_basis(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> off(-0.3, 0.3);
  std::uniform_real_distribution<double> diag(1.0, 1.5);
  Mat b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = i == j ? diag(rng) : off(rng);
  return b;
}

// Axis-aligned box [lo, hi]^n as half-spaces.
inline Polytope box(int n, double lo, double hi) {
  std::vector<HalfSpace> hs;
  for (int k = 0; k < n; ++k) {
    Vec e = Vec::Zero(n);
    e(k) = 1.0;
    hs.push_back(HalfSpace::make(e, hi));
    hs.push_back(HalfSpace::make(-e, -lo));
  }
  return halfspace_intersection(hs, Execution::Serial);
}

// Every integer vector with entries in [-k, k].
inline std::vector<IntVec> integer_box(int n, int k) {
  std::vector<IntVec> out;
  IntVec c = IntVec::Constant(n, -k);
  while (true) {
    out.push_back(c);
    int i = 0;
    while (i < n && c(i) == k) c(i++) = -k;
    if (i == n) break;
    ++c(i);
  }
  return out;
}

// Lattice points nearest to p, found by scanning an integer box of coefficients.
inline std::vector<Vec> brute_nearest(const Lattice& l, const Vec& p, int k, double tie) {
  double best = INFINITY;
  std::vector<Vec> pts;
  for (const IntVec& c : integer_box(l.dim(), k)) {
    const Vec x = l.point(c);
    const double d = (x - p).norm();
    if (d < best - tie) {
      best = d;
      pts.assign(1, x);
    } else if (std::abs(d - best) <= tie) {
      pts.push_back(x);
    }
  }
  return pts;
}

}  // namespace foamlab::testing
