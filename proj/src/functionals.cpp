#include "foamlab/functionals.hpp"

#include <omp.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "foamlab/error.hpp"
#include "foamlab/lattice.hpp"
#include "foamlab/voronoi.hpp"

namespace foamlab {
namespace {

const char* kModule = "functionals";

struct Sampler {
  const Polytope& p;
  Vec lo, hi;

  explicit Sampler(const Polytope& poly) : p(poly), lo(poly.vertices.front()), hi(poly.vertices.front()) {
    for (const Vec& v : poly.vertices) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
  }

  Vec point(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vec x(p.dim);
    while (true) {
      for (int i = 0; i < p.dim; ++i) x(i) = lo(i) + (hi(i) - lo(i)) * u(rng);
      if (contains(p, x, 0.0)) return x;
    }
  }

  Vec direction(std::mt19937_64& rng) const {
    std::normal_distribution<double> g(0.0, 1.0);
    Vec d(p.dim);
    do {
      for (int i = 0; i < p.dim; ++i) d(i) = g(rng);
    } while (d.norm() < 1e-12);
    return d / d.norm();
  }

  // Distance from an interior x to the boundary along direction d.
  double exit_distance(const Vec& x, const Vec& d) const {
    double t = std::numeric_limits<double>::infinity();
    for (const Facet& f : p.facets) {
      const double rate = f.plane.normal.dot(d);
      if (rate > 1e-15) t = std::min(t, (f.plane.offset - f.plane.normal.dot(x)) / rate);
    }
    return std::max(t, 0.0);
  }
};

template <typename Integrand>
Estimate batch_means(const Polytope& p, const MonteCarloConfig& cfg, Execution exec, Integrand integrand) {
  cfg.validate();
  const Sampler sampler(p);
  const int batches = cfg.batches;
  const std::int64_t per_batch = cfg.samples / batches;
  std::vector<double> means(static_cast<std::size_t>(batches), 0.0);

  auto run_batch = [&](int b) {
    std::mt19937_64 rng = make_stream(cfg.seed, static_cast<std::uint64_t>(b));
    double sum = 0.0;
    for (std::int64_t i = 0; i < per_batch; ++i) {
      const Vec x = sampler.point(rng);
      const Vec d = sampler.direction(rng);
      sum += integrand(sampler, x, d);
    }
    means[static_cast<std::size_t>(b)] = sum / static_cast<double>(per_batch);
  };

  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static) num_threads(worker_count())
    for (int b = 0; b < batches; ++b) run_batch(b);
  } else {
    for (int b = 0; b < batches; ++b) run_batch(b);
  }

  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= batches;
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= (batches - 1);
  return Estimate{mean, std::sqrt(var / batches), per_batch * batches};
}

}  // namespace

void MonteCarloConfig::validate() const {
  if (samples < 10'000) {
    throw Error(ErrorCode::InvalidArgument, kModule, "MonteCarloConfig.samples must be >= 1e4");
  }
  if (batches < 2 || samples % batches != 0) {
    throw Error(ErrorCode::InvalidArgument, kModule,
                "MonteCarloConfig.batches must be >= 2 and divide samples");
  }
}

double unit_sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
}

double classical_perimeter(const Polytope& p) { return surface_area(p); }

Estimate fractional_perimeter(const Polytope& p, double s, const MonteCarloConfig& cfg, Execution exec) {
  if (!(s > 0.0 && s < 1.0)) {
    throw Error(ErrorCode::SNotInRange, kModule, "s must lie in (0, 1), got " + std::to_string(s));
  }
  const double weight = volume(p) * unit_sphere_area(p.dim) / (s * (1.0 - s));
  return batch_means(p, cfg, exec, [&](const Sampler& sm, const Vec& x, const Vec& d) {
    const double chord = sm.exit_distance(x, d) + sm.exit_distance(x, -d);
    return weight * std::pow(chord, -s);
  });
}

Estimate riesz_energy(const Polytope& p, double alpha, const MonteCarloConfig& cfg, Execution exec) {
  if (!(alpha > 0.0 && alpha < p.dim)) {
    throw Error(ErrorCode::AlphaNotInRange, kModule,
                "alpha must lie in (0, N), got " + std::to_string(alpha));
  }
  const double weight = volume(p) * unit_sphere_area(p.dim) / alpha;
  return batch_means(p, cfg, exec, [&](const Sampler& sm, const Vec& x, const Vec& d) {
    return weight * std::pow(sm.exit_distance(x, d), alpha);
  });
}

double iso_ratio(const Polytope& p, const RatioSpec& spec) {
  const double exponent = spec.exponent.value_or(static_cast<double>(p.dim - 1));
  if (!(exponent > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, kModule, "ratio exponent must be positive");
  }
  const double r = chebyshev_inradius(p).radius;
  if (!(r > 1e-12)) throw Error(ErrorCode::ZeroInradius, kModule, "polytope has no interior ball");
  return classical_perimeter(p) / std::pow(r, exponent);
}

KelvinBoundReport kelvin_bound_check() {
  KelvinBoundReport rep;
  rep.truncated_octahedron_ratio = iso_ratio(voronoi_cell(catalog(CatalogName::Bcc, 3)));
  rep.rhombic_dodecahedron_ratio = iso_ratio(voronoi_cell(catalog(CatalogName::Fcc, 3)));
  rep.kelvin_lower_bound = kKelvinPerimeterFactor * rep.truncated_octahedron_ratio;
  rep.kelvin_excluded = rep.kelvin_lower_bound > rep.rhombic_dodecahedron_ratio;
  return rep;
}

}  // namespace foamlab
