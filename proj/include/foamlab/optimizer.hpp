#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "foamlab/lattice.hpp"
#include "foamlab/parallel.hpp"

namespace foamlab {

/// Penalty returned inside the search for lattices rejected as degenerate.
inline constexpr double kDegeneratePenalty = 1e9;

/// Lattice scaled so that its inradius equals rho0.
Lattice normalize_to_inradius(const Lattice& lattice, double rho0);

/// Perimeter of the Voronoi cell at inradius 1 (= its isoperimetric ratio).
/// Throws DegenerateLattice when cond(Gram) > condition_cap.
double objective(const Lattice& lattice, double condition_cap = 1e6);

struct OptimizerConfig {
  int dim = 3;
  int restarts = 10;
  std::uint64_t seed = 42;
  int max_iters = 4000;         // Nelder-Mead iterations per restart
  double simplex_tol = 1e-11;   // spread of simplex values at convergence
  /// Starts for the first restarts: a catalog name ("z", "bcc", ...),
  /// optionally "name~eps" for a start perturbed by relative size eps, or
  /// "random". Restarts past the end of the list draw random Gram matrices.
  std::vector<std::string> initial;
  double condition_cap = 1e6;
  double equivalence_tol = 1e-3;
};

struct TracePoint {
  int iteration = 0;
  double ratio = 0.0;  // best so far
};

struct RestartResult {
  int index = 0;
  std::string start;
  bool failed = false;
  std::string failure;
  double best_ratio = 0.0;
  Mat best_basis;
  int evaluations = 0;
  std::vector<TracePoint> trace;
};

struct EquivalenceVerdict {
  std::string lattice;
  bool equivalent = false;
};

struct OptimizationReport {
  int dim = 0;
  std::uint64_t seed = 0;
  Mat best_basis;  // normalized to inradius 1
  Mat best_gram;
  double best_ratio = 0.0;
  int best_restart = -1;
  std::vector<RestartResult> restarts;
  std::vector<EquivalenceVerdict> equivalences;
  /// dim 3 only: best ratio below 12√2 - 1e-3.
  bool fcc_conjecture_counterexample = false;
  double wall_seconds = 0.0;
  std::string note;
};

/// Nelder-Mead over the Cholesky factor of the Gram matrix with independent
/// restarts. Deterministic given the config.
OptimizationReport optimize(const OptimizerConfig& cfg, Execution exec = Execution::Parallel);

struct PerturbReport {
  double base = 0.0;
  double min = 0.0;
  double mean = 0.0;
  int trials = 0;
  int evaluated = 0;
  double eps = 0.0;
  bool improved = false;  // some trial beat base - 1e-9
};

/// Objective on random perturbations B -> B (I + eps E), E with unit Frobenius norm.
PerturbReport perturb_test(const Lattice& lattice, double eps, int trials, std::uint64_t seed);

std::string to_json_string(const OptimizationReport& report, const OptimizerConfig& cfg);
/// restart,iteration,ratio
std::string trace_csv(const OptimizationReport& report);

}  // namespace foamlab
