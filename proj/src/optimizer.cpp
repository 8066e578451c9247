#include "foamlab/optimizer.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "foamlab/error.hpp"
#include "foamlab/functionals.hpp"
#include "foamlab/json_util.hpp"
#include "foamlab/voronoi.hpp"

namespace foamlab {
namespace {

const char* kModule = "lattice-optimizer";

int param_count(int n) { return n * (n + 1) / 2; }

// Gram = C C^T with C lower triangular; basis = C^T.
Mat basis_from_params(const Vec& x, int n) {
  Mat c = Mat::Zero(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) c(i, j) = x(k++);
  return c.transpose();
}

Vec params_from_basis(const Mat& basis) {
  const int n = static_cast<int>(basis.cols());
  const Eigen::LLT<Mat> llt(basis.transpose() * basis);
  const Mat c = llt.matrixL();
  Vec x(param_count(n));
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) x(k++) = c(i, j);
  return x;
}

Mat perturbation(int n, double eps, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat e(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) e(i, j) = g(rng);
  return Mat::Identity(n, n) + eps * e / e.norm();
}

double penalized(const Vec& x, int n, double cap, int& evaluations) {
  ++evaluations;
  try {
    return objective(make_lattice(basis_from_params(x, n)), cap);
  } catch (const Error&) {
    return kDegeneratePenalty;
  }
}

Vec start_params(const std::string& spec, int n, std::mt19937_64& rng) {
  if (spec == "random") {
    std::uniform_real_distribution<double> diag(0.5, 1.5);
    std::uniform_real_distribution<double> off(-0.5, 0.5);
    Mat c = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) c(i, j) = i == j ? diag(rng) : off(rng);
    return params_from_basis(normalize_to_inradius(make_lattice(c.transpose()), 1.0).basis());
  }
  std::string name = spec;
  double eps = 0.0;
  if (const auto tilde = spec.find('~'); tilde != std::string::npos) {
    name = spec.substr(0, tilde);
    try {
      eps = std::stod(spec.substr(tilde + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, kModule, "bad perturbation in start '" + spec + "'");
    }
  }
  Lattice start = reduce_basis(catalog(parse_catalog_name(name), n)).lattice;
  if (eps > 0.0) start = make_lattice(start.basis() * perturbation(n, eps, rng));
  return params_from_basis(normalize_to_inradius(start, 1.0).basis());
}

RestartResult run_restart(const OptimizerConfig& cfg, int index) {
  RestartResult res;
  res.index = index;
  res.start = index < static_cast<int>(cfg.initial.size()) ? cfg.initial[static_cast<std::size_t>(index)] : "random";
  const int n = cfg.dim;
  const int p = param_count(n);
  std::mt19937_64 rng = make_stream(cfg.seed, static_cast<std::uint64_t>(index));

  Vec x0;
  try {
    x0 = start_params(res.start, n, rng);
  } catch (const Error& e) {
    res.failed = true;
    res.failure = e.what();
    return res;
  }

  auto f = [&](const Vec& x) { return penalized(x, n, cfg.condition_cap, res.evaluations); };

  std::vector<Vec> simplex;
  std::vector<double> values;
  auto build = [&](const Vec& centre, double step) {
    simplex.assign(1, centre);
    values.assign(1, f(centre));
    for (int i = 0; i < p; ++i) {
      Vec v = centre;
      v(i) += step;
      simplex.push_back(v);
      values.push_back(f(v));
    }
  };

  build(x0, 0.1);
  double best = *std::min_element(values.begin(), values.end());
  res.trace.push_back({0, best});

  int iter = 0;
  int rebuilds = 0;
  std::vector<int> order(static_cast<std::size_t>(p + 1));
  while (iter < cfg.max_iters) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return values[static_cast<std::size_t>(a)] < values[static_cast<std::size_t>(b)]; });
    const int lo = order.front();
    const int hi = order.back();
    const int second = order[static_cast<std::size_t>(p - 1)];
    const double flo = values[static_cast<std::size_t>(lo)];
    const double fhi = values[static_cast<std::size_t>(hi)];

    if (fhi - flo <= cfg.simplex_tol * (1.0 + std::abs(flo))) {
      // Converged: rebuild a fresh simplex around the best vertex to escape
      // collapsed simplices; stop once a rebuild no longer improves.
      if (rebuilds >= 6) break;
      const double before = flo;
      const Vec centre = simplex[static_cast<std::size_t>(lo)];
      build(centre, 0.02 / (1 << rebuilds));
      ++rebuilds;
      const double after = *std::min_element(values.begin(), values.end());
      if (after >= before - cfg.simplex_tol && rebuilds > 2) break;
      continue;
    }
    ++iter;

    Vec centroid = Vec::Zero(p);
    for (int i = 0; i <= p; ++i)
      if (i != hi) centroid += simplex[static_cast<std::size_t>(i)];
    centroid /= p;

    const Vec xr = centroid + (centroid - simplex[static_cast<std::size_t>(hi)]);
    const double fr = f(xr);
    if (fr < flo) {
      const Vec xe = centroid + 2.0 * (centroid - simplex[static_cast<std::size_t>(hi)]);
      const double fe = f(xe);
      if (fe < fr) {
        simplex[static_cast<std::size_t>(hi)] = xe;
        values[static_cast<std::size_t>(hi)] = fe;
      } else {
        simplex[static_cast<std::size_t>(hi)] = xr;
        values[static_cast<std::size_t>(hi)] = fr;
      }
    } else if (fr < values[static_cast<std::size_t>(second)]) {
      simplex[static_cast<std::size_t>(hi)] = xr;
      values[static_cast<std::size_t>(hi)] = fr;
    } else {
      const bool outside = fr < fhi;
      const Vec xc = outside ? Vec(centroid + 0.5 * (xr - centroid))
                             : Vec(centroid + 0.5 * (simplex[static_cast<std::size_t>(hi)] - centroid));
      const double fc = f(xc);
      if (fc < (outside ? fr : fhi)) {
        simplex[static_cast<std::size_t>(hi)] = xc;
        values[static_cast<std::size_t>(hi)] = fc;
      } else {
        for (int i = 0; i <= p; ++i) {
          if (i == lo) continue;
          simplex[static_cast<std::size_t>(i)] = simplex[static_cast<std::size_t>(lo)] +
                                                 0.5 * (simplex[static_cast<std::size_t>(i)] - simplex[static_cast<std::size_t>(lo)]);
          values[static_cast<std::size_t>(i)] = f(simplex[static_cast<std::size_t>(i)]);
        }
      }
    }
    best = std::min(best, *std::min_element(values.begin(), values.end()));
    res.trace.push_back({iter, best});
  }

  const auto it = std::min_element(values.begin(), values.end());
  const Vec xbest = simplex[static_cast<std::size_t>(it - values.begin())];
  if (*it >= kDegeneratePenalty) {
    res.failed = true;
    res.failure = "no admissible lattice reached";
    return res;
  }
  res.best_ratio = *it;
  res.best_basis = reduce_basis(normalize_to_inradius(make_lattice(basis_from_params(xbest, n)), 1.0)).lattice.basis();
  return res;
}

std::vector<std::string> reference_lattices(int n) {
  switch (n) {
    case 2: return {"z", "hex"};
    case 3: return {"z", "fcc", "bcc"};
    default: return {"z", "d", "a", "astar"};
  }
}

}  // namespace

Lattice normalize_to_inradius(const Lattice& lattice, double rho0) {
  if (!(rho0 > 0.0)) throw Error(ErrorCode::InvalidArgument, kModule, "rho0 must be positive");
  return scaled(lattice, rho0 / inradius(lattice));
}

double objective(const Lattice& lattice, double condition_cap) {
  const Lattice reduced = reduce_basis(lattice).lattice;
  const Eigen::SelfAdjointEigenSolver<Mat> eig(reduced.gram(), Eigen::EigenvaluesOnly);
  const double cond = eig.eigenvalues().maxCoeff() / eig.eigenvalues().minCoeff();
  if (!(cond <= condition_cap)) {
    throw Error(ErrorCode::DegenerateLattice, kModule,
                "Gram condition number " + std::to_string(cond) + " exceeds cap");
  }
  const Lattice unit = normalize_to_inradius(reduced, 1.0);
  // Next to lattices with non-simple Voronoi vertices the cell has features near
  // the merge tolerance; a coarser tolerance collapses them.
  double gap = 0.0;
  for (double merge_tol : {1e-7, 1e-5}) {
    try {
      const Polytope cell = voronoi_cell(unit, Execution::Serial, merge_tol);
      gap = std::abs(volume(cell) - unit.determinant()) / unit.determinant();
      if (gap <= std::max(1e-6, 10 * merge_tol)) return classical_perimeter(cell);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateFacet && e.code() != ErrorCode::EmptyIntersection) throw;
      gap = INFINITY;
    }
  }
  throw Error(ErrorCode::DegenerateLattice, kModule,
              "Voronoi cell volume misses the determinant by " + std::to_string(gap));
}

OptimizationReport optimize(const OptimizerConfig& cfg, Execution exec) {
  if (cfg.dim < 2 || cfg.dim > 4) {
    throw Error(ErrorCode::UnsupportedDimension, kModule, "optimizer supports dimensions 2-4");
  }
  if (cfg.restarts < 1) throw Error(ErrorCode::InvalidArgument, kModule, "restarts must be >= 1");
  if (!(cfg.condition_cap > 1.0)) throw Error(ErrorCode::InvalidArgument, kModule, "condition cap must exceed 1");

  const auto t0 = std::chrono::steady_clock::now();
  OptimizationReport rep;
  rep.dim = cfg.dim;
  rep.seed = cfg.seed;
  rep.restarts.resize(static_cast<std::size_t>(cfg.restarts));

  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
    for (int r = 0; r < cfg.restarts; ++r) rep.restarts[static_cast<std::size_t>(r)] = run_restart(cfg, r);
  } else {
    for (int r = 0; r < cfg.restarts; ++r) rep.restarts[static_cast<std::size_t>(r)] = run_restart(cfg, r);
  }

  for (const RestartResult& r : rep.restarts) {
    if (r.failed) continue;
    if (rep.best_restart < 0 || r.best_ratio < rep.best_ratio) {
      rep.best_restart = r.index;
      rep.best_ratio = r.best_ratio;
    }
  }
  if (rep.best_restart < 0) throw Error(ErrorCode::AllRestartsFailed, kModule, "every restart failed");

  const Lattice best = make_lattice(rep.restarts[static_cast<std::size_t>(rep.best_restart)].best_basis);
  rep.best_basis = best.basis();
  rep.best_gram = best.gram();
  for (const std::string& name : reference_lattices(cfg.dim)) {
    rep.equivalences.push_back(
        {name, lattice_equivalent(best, catalog(parse_catalog_name(name), cfg.dim), cfg.equivalence_tol)});
  }
  if (cfg.dim == 3) rep.fcc_conjecture_counterexample = rep.best_ratio < 12.0 * std::sqrt(2.0) - 1e-3;
  rep.note =
      "Search restricted to Voronoi cells of lattices: the best ratio is an upper bound for the "
      "problem over all fundamental domains containing the ball.";
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

PerturbReport perturb_test(const Lattice& lattice, double eps, int trials, std::uint64_t seed) {
  if (trials < 1 || !(eps >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, kModule, "trials must be >= 1 and eps >= 0");
  }
  PerturbReport rep;
  rep.eps = eps;
  rep.trials = trials;
  rep.base = objective(lattice);
  rep.min = std::numeric_limits<double>::infinity();
  const int n = lattice.dim();
  double sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng = make_stream(seed, static_cast<std::uint64_t>(t));
    try {
      const double v = objective(make_lattice(lattice.basis() * perturbation(n, eps, rng)));
      rep.min = std::min(rep.min, v);
      sum += v;
      ++rep.evaluated;
    } catch (const Error&) {
      // degenerate draw: skipped
    }
  }
  if (rep.evaluated == 0) throw Error(ErrorCode::DegenerateLattice, kModule, "no perturbation was admissible");
  rep.mean = sum / rep.evaluated;
  rep.improved = rep.min < rep.base - 1e-9;
  return rep;
}

std::string to_json_string(const OptimizationReport& report, const OptimizerConfig& cfg) {
  nlohmann::json j;
  j["config"] = {{"dim", cfg.dim},
                 {"restarts", cfg.restarts},
                 {"seed", cfg.seed},
                 {"max_iters", cfg.max_iters},
                 {"simplex_tol", cfg.simplex_tol},
                 {"initial", cfg.initial},
                 {"condition_cap", cfg.condition_cap},
                 {"equivalence_tol", cfg.equivalence_tol}};
  j["best_ratio"] = report.best_ratio;
  j["best_restart"] = report.best_restart;
  j["best_basis"] = to_json(report.best_basis);
  j["best_gram"] = to_json(report.best_gram);
  j["equivalences"] = nlohmann::json::object();
  for (const auto& e : report.equivalences) j["equivalences"][e.lattice] = e.equivalent;
  if (report.dim == 3) j["fcc_conjecture_counterexample"] = report.fcc_conjecture_counterexample;
  j["wall_seconds"] = report.wall_seconds;
  j["note"] = report.note;
  j["restarts"] = nlohmann::json::array();
  for (const RestartResult& r : report.restarts) {
    nlohmann::json jr = {{"index", r.index},     {"start", r.start},         {"failed", r.failed},
                         {"failure", r.failure}, {"best_ratio", r.best_ratio}, {"evaluations", r.evaluations},
                         {"iterations", r.trace.empty() ? 0 : r.trace.back().iteration}};
    j["restarts"].push_back(std::move(jr));
  }
  return j.dump(2);
}

std::string trace_csv(const OptimizationReport& report) {
  std::ostringstream os;
  os.precision(12);
  os << "restart,iteration,ratio\n";
  for (const RestartResult& r : report.restarts)
    for (const TracePoint& t : r.trace) os << r.index << ',' << t.iteration << ',' << t.ratio << '\n';
  return os.str();
}

}  // namespace foamlab
