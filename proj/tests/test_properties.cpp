// Randomized invariants. Each case draws its inputs from a fixed seed.

#include <cmath>
#include <random>

#include "doctest.h"
#include "foamlab/functionals.hpp"
#include "foamlab/optimizer.hpp"
#include "foamlab/voronoi.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace foamlab;
using namespace foamlab::testing;

TEST_SUITE("properties") {

TEST_CASE("volume and perimeter scale as powers of the dilation") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> lam(0.3, 4.0);
  for (int trial = 0; trial < 24; ++trial) {
    const int n = 2 + trial % 3;
    const Polytope p = voronoi_cell(make_lattice(random_basis(n, rng)));
    const double l = lam(rng);
    const Polytope q = transform(p, l, Vec::Constant(n, 0.25));
    CHECK(volume(q) == doctest::Approx(std::pow(l, n) * volume(p)).epsilon(1e-10));
    CHECK(classical_perimeter(q) == doctest::Approx(std::pow(l, n - 1) * classical_perimeter(p)).epsilon(1e-10));
  }
}

TEST_CASE("fractional perimeter scales as lambda^(N-s)") {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> lam(0.5, 3.0);
  std::uniform_real_distribution<double> sd(0.15, 0.85);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2 + trial % 2;
    const Polytope p = voronoi_cell(make_lattice(random_basis(n, rng)));
    const double l = lam(rng);
    const double s = sd(rng);
    const Estimate a = fractional_perimeter(p, s, MonteCarloConfig{100000, 1000u + trial, 40});
    const Estimate b = fractional_perimeter(transform(p, l, Vec::Zero(n)), s, MonteCarloConfig{100000, 2000u + trial, 40});
    const double f = std::pow(l, n - s);
    const double sigma = std::hypot(f * a.std_error, b.std_error);
    CHECK(std::abs(f * a.value - b.value) <= 3 * sigma);
  }
}

TEST_CASE("fractional perimeter matches quadrature on the unit square") {
  const Polytope sq = box(2, 0, 1);
  for (double s : {0.25, 0.5, 0.75}) {
    const Estimate e = fractional_perimeter(sq, s, MonteCarloConfig{400000, 17, 40});
    const double ref = square_fractional_perimeter(s);
    CHECK(std::abs(e.value - ref) <= 0.01 * ref);
  }
}

TEST_CASE("Riesz energy scales as lambda^(N+alpha)") {
  std::mt19937_64 rng(303);
  const Polytope p = voronoi_cell(make_lattice(random_basis(3, rng)));
  const double l = 1.7;
  const double alpha = 1.3;
  const Estimate a = riesz_energy(p, alpha, MonteCarloConfig{100000, 5, 40});
  const Estimate b = riesz_energy(transform(p, l, Vec::Zero(3)), alpha, MonteCarloConfig{100000, 6, 40});
  const double f = std::pow(l, 3 + alpha);
  CHECK(std::abs(f * a.value - b.value) <= 3 * std::hypot(f * a.std_error, b.std_error));
}

TEST_CASE("Voronoi cells are centrally symmetric") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 24; ++trial) {
    const int n = 2 + trial % 3;
    const Polytope p = voronoi_cell(make_lattice(random_basis(n, rng)));
    for (const Vec& v : p.vertices) {
      double best = INFINITY;
      for (const Vec& w : p.vertices) best = std::min(best, (v + w).norm());
      CHECK(best < 1e-9);
    }
  }
}

TEST_CASE("Euler characteristic of three-dimensional cells") {
  std::mt19937_64 rng(505);
  for (int trial = 0; trial < 30; ++trial) {
    const Polytope p = voronoi_cell(make_lattice(random_basis(3, rng)));
    const long v = static_cast<long>(p.vertices.size());
    const long f = static_cast<long>(p.facets.size());
    CHECK(v - edge_count(p) + f == 2);
  }
}

TEST_CASE("objective is invariant under rotations and unimodular changes of basis") {
  std::mt19937_64 rng(606);
  for (int trial = 0; trial < 16; ++trial) {
    const int n = 2 + trial % 2;
    const Mat b = random_basis(n, rng);
    const double base = objective(make_lattice(b));
    const Mat q = random_rotation(n, rng);
    const Mat u = random_unimodular(n, rng, 8);
    CHECK(objective(make_lattice(q * b)) == doctest::Approx(base).epsilon(1e-9));
    CHECK(objective(make_lattice(b * u)) == doctest::Approx(base).epsilon(1e-9));
    CHECK(objective(make_lattice(3.3 * b)) == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("Monte Carlo estimates are reproducible from the seed") {
  std::mt19937_64 rng(707);
  for (int trial = 0; trial < 4; ++trial) {
    const Polytope p = voronoi_cell(make_lattice(random_basis(3, rng)));
    const MonteCarloConfig cfg{20000, 31u + trial, 20};
    CHECK(fractional_perimeter(p, 0.6, cfg).value == fractional_perimeter(p, 0.6, cfg).value);
    CHECK(riesz_energy(p, 0.8, cfg).value == riesz_energy(p, 0.8, cfg).value);
    CHECK(fractional_perimeter(p, 0.6, cfg).value ==
          doctest::Approx(fractional_perimeter(p, 0.6, cfg, Execution::Serial).value).epsilon(1e-13));
  }
}

}
