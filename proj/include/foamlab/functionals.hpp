#pragma once

#include <cstdint>
#include <optional>

#include "foamlab/parallel.hpp"
#include "foamlab/polytope.hpp"

namespace foamlab {

/// Sampling plan for the nonlocal functionals. `samples` are split into
/// `batches` equal batches; batch b draws from make_stream(seed, b), and the
/// standard error comes from the spread of batch means.
struct MonteCarloConfig {
  std::int64_t samples = 200'000;
  std::uint64_t seed = 1;
  int batches = 40;

  void validate() const;  // samples >= 1e4, batches >= 2, batches | samples
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t samples_used = 0;
};

/// Perimeter of a polytope: sum of facet (N-1)-volumes.
double classical_perimeter(const Polytope& p);

/// Per_s(P) = ∫_P ∫_{R^N \ P} |x - y|^{-(N+s)} dy dx, 0 < s < 1.
///
/// For convex P the kernel integrates in closed form along both rays of the
/// line through x: with L(x, θ) the chord length,
///     Per_s(P) = 1 / (s (1 - s)) ∫_{S^{N-1}} ∫_P L(x, θ)^{-s} dx dθ,
/// which is sampled with x ~ U(P), θ ~ U(S^{N-1}). The integrand is bounded
/// away from vertices, so the variance is finite for every s in (0, 1).
Estimate fractional_perimeter(const Polytope& p, double s, const MonteCarloConfig& cfg,
                              Execution exec = Execution::Parallel);

/// ∫_P ∫_P |x - y|^{α - N} dx dy, 0 < α < N, sampled as
/// ∫_P ∫_{S^{N-1}} ρ(x, θ)^α / α dθ dx with ρ the exit distance along θ.
Estimate riesz_energy(const Polytope& p, double alpha, const MonteCarloConfig& cfg,
                      Execution exec = Execution::Parallel);

enum class RatioNormalization { ByInradius };

struct RatioSpec {
  std::optional<double> exponent;  // default: N - 1 (scale invariant)
  RatioNormalization normalization = RatioNormalization::ByInradius;
};

/// Perimeter / (Chebyshev inradius)^exponent.
double iso_ratio(const Polytope& p, const RatioSpec& spec = {});

/// Lower bound on the Kelvin cell perimeter as a fraction of the truncated octahedron.
inline constexpr double kKelvinPerimeterFactor = 0.998;

struct KelvinBoundReport {
  double truncated_octahedron_ratio = 0.0;
  double rhombic_dodecahedron_ratio = 0.0;
  double kelvin_lower_bound = 0.0;  // factor * truncated_octahedron_ratio
  bool kelvin_excluded = false;     // lower bound > rhombic dodecahedron ratio
};

/// Ratios of the BCC and FCC Voronoi cells and the Kelvin-cell lower bound.
KelvinBoundReport kelvin_bound_check();

/// Area of the unit sphere S^{N-1}.
double unit_sphere_area(int n);

}  // namespace foamlab
