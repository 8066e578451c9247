// Acceptance gate: one line per criterion, nonzero exit if any fails.

#define DOCTEST_CONFIG_IMPLEMENT
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "foamlab/functionals.hpp"
#include "foamlab/optimizer.hpp"
#include "foamlab/plateau.hpp"
#include "support.hpp"

using namespace foamlab;
using namespace foamlab::testing;

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kSqrt3 = std::sqrt(3.0);

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [missed: " << what << "]";
    }
  }
};

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

void criterion_1(Outcome& o) {
  const double r = iso_ratio(voronoi_cell(catalog(CatalogName::Fcc, 3)));
  o.detail << "I(fcc) = " << r;
  o.require(close(r, 12 * kSqrt2, 1e-6), "12*sqrt(2) within 1e-6");
}

void criterion_2(Outcome& o) {
  const double r = iso_ratio(voronoi_cell(catalog(CatalogName::Bcc, 3)));
  const KelvinBoundReport k = kelvin_bound_check();
  o.detail << "I(truncated octahedron) = " << r << ", kelvin lower bound = " << k.kelvin_lower_bound;
  o.require(close(r, 4 * (2 * kSqrt3 + 1), 1e-6), "4(2*sqrt(3)+1) within 1e-6");
  o.require(k.kelvin_excluded && k.kelvin_lower_bound > 12 * kSqrt2, "0.998 I(T) > 12 sqrt(2)");
}

void criterion_3(Outcome& o) {
  struct Row {
    CatalogName name;
    int dim;
    double d, lambda, rho, r;
  };
  const Row rows[] = {{CatalogName::Hex, 2, kSqrt3 / 2, 1, 0.5, 1 / kSqrt3},
                      {CatalogName::Fcc, 3, 2, kSqrt2, 1 / kSqrt2, 1},
                      {CatalogName::Bcc, 3, 4, kSqrt3, kSqrt3 / 2, std::sqrt(5.0) / 2}};
  int checks = 0;
  for (const Row& row : rows) {
    const Lattice l = catalog(row.name, row.dim);
    const std::string id(to_string(row.name));
    o.require(close(l.determinant(), row.d, 1e-9), id + " d");
    o.require(close(minimal_norm(l), row.lambda, 1e-9), id + " lambda");
    o.require(close(inradius(l), row.rho, 1e-9), id + " rho");
    o.require(close(covering_radius(l), row.r, 1e-9), id + " covering radius");
    checks += 4;
  }
  for (int n = 2; n <= 6; ++n) {
    o.require(close(inradius(catalog(CatalogName::Astar, n)), 0.5 * std::sqrt(n / (n + 1.0)), 1e-9),
              "astar" + std::to_string(n) + " inradius");
    o.require(close(minimal_norm(catalog(CatalogName::A, n)), kSqrt2, 1e-9), "a" + std::to_string(n) + " lambda");
    checks += 2;
  }
  o.require(close(covering_radius(catalog(CatalogName::D, 4)), 1.0, 1e-9), "d4 covering radius");
  o.detail << ++checks << " invariants checked at 1e-9";
}

void criterion_4(Outcome& o) {
  struct Entry {
    CatalogName name;
    int dim;
  };
  std::vector<Entry> entries = {{CatalogName::Hex, 2}, {CatalogName::Fcc, 3}, {CatalogName::Bcc, 3}};
  for (int n = 2; n <= 4; ++n) {
    for (CatalogName c : {CatalogName::Z, CatalogName::A, CatalogName::Astar, CatalogName::D})
      entries.push_back({c, n});
  }
  double worst = 0;
  for (const Entry& e : entries) {
    const Lattice l = catalog(e.name, e.dim);
    const double gap = std::abs(volume(voronoi_cell(l)) - l.determinant()) / l.determinant();
    worst = std::max(worst, gap);
    o.require(gap <= 1e-6, std::string(to_string(e.name)) + std::to_string(e.dim) + " volume");
  }
  for (int n = 2; n <= 4; ++n) {
    const std::size_t facets = voronoi_cell(catalog(CatalogName::Astar, n)).facets.size();
    o.require(facets == static_cast<std::size_t>(2 * ((1 << n) - 1)), "astar" + std::to_string(n) + " facets");
  }
  o.detail << entries.size() << " lattices, worst relative volume gap " << worst
           << "; permutohedron facets 6, 14, 30";
}

void criterion_5(Outcome& o) {
  const Polytope c = voronoi_cell(catalog(CatalogName::D, 4));
  const double r = chebyshev_inradius(c).radius;
  o.detail << c.facets.size() << " facets, " << c.vertices.size() << " vertices, inradius " << r;
  o.require(c.facets.size() == 24 && c.vertices.size() == 24, "24 facets and 24 vertices");
  o.require(close(r, kSqrt2 / 2, 1e-9), "inradius sqrt(2)/2");
}

// Brute-force count of nearest lattice points at every orbit representative.
bool chambers_cross_checked(const Lattice& l, const PlateauReport& r) {
  for (const FaceOrbitVerdict& f : r.faces) {
    const auto fast = cells_at_point(l, f.representative);
    const auto slow = brute_nearest(l, f.representative, 4, 1e-9 * minimal_norm(l));
    if (static_cast<int>(slow.size()) != f.signature.chamber_count || fast.size() != slow.size()) return false;
  }
  return true;
}

void criterion_6(Outcome& o) {
  const Lattice hex = catalog(CatalogName::Hex, 2);
  const Lattice z3 = catalog(CatalogName::Z, 3);
  const Lattice fcc = catalog(CatalogName::Fcc, 3);
  const Lattice bcc = catalog(CatalogName::Bcc, 3);
  const Lattice d4 = catalog(CatalogName::D, 4);
  const PlateauReport rh = plateau_check(hex, 0.1, "hex");
  const PlateauReport rz = plateau_check(z3, 0.1, "z3");
  const PlateauReport rf = plateau_check(fcc, 0.1, "fcc");
  const PlateauReport rb = plateau_check(bcc, 0.1, "bcc");
  const PlateauReport rd = plateau_check(d4, 0.1, "d4");
  o.require(rh.pass, "hex PASS");
  o.require(!rz.pass, "z3 FAIL");
  o.require(!rf.pass, "fcc FAIL");
  bool six = false;
  for (const auto& f : rf.faces) six = six || (f.face_dim == 0 && f.signature.chamber_count == 6 && !passes(f.verdict));
  o.require(six, "fcc six-chamber vertex class flagged");
  o.require(!rb.pass, "bcc FAIL");
  const EdgeAngleReport e = bcc_edge_angles();
  const double t = std::acos(-1.0 / 3.0) * 180 / kPi;
  const double w = 90 + std::atan(1 / kSqrt2) * 180 / kPi;
  o.require(e.signature.angle_data.size() == 3 && close(e.signature.angle_data[0], t, 1e-3) &&
                close(e.signature.angle_data[1], w, 1e-3) && close(e.signature.angle_data[2], w, 1e-3),
            "bcc edge angles {109.471, 125.264, 125.264}");
  o.require(close(e.angle_sum_deg, 360, 1e-9), "bcc angle sum 360");
  o.require(rd.pass, "d4 PASS");
  bool codim2 = true;
  bool vertices8 = true;
  for (const auto& f : rd.faces) {
    if (f.face_dim == 2) {
      codim2 = codim2 && f.signature.chamber_count == 3;
      for (double a : f.signature.angle_data) codim2 = codim2 && close(a, 120, 1e-6);
    }
    if (f.face_dim == 0) vertices8 = vertices8 && f.signature.chamber_count == 8;
  }
  o.require(codim2, "d4 codim-2 faces: 3 cells at 120 +- 1e-6");
  o.require(vertices8, "d4 vertices: 8 cells");
  bool cross = true;
  for (auto [l, r] : {std::pair{&hex, &rh}, {&z3, &rz}, {&fcc, &rf}, {&bcc, &rb}, {&d4, &rd}})
    cross = cross && chambers_cross_checked(*l, *r);
  o.require(cross, "chamber counts match brute force");
  o.detail << "hex " << (rh.pass ? "PASS" : "FAIL") << ", z3 " << (rz.pass ? "PASS" : "FAIL") << ", fcc "
           << (rf.pass ? "PASS" : "FAIL") << ", bcc " << (rb.pass ? "PASS" : "FAIL") << " (edge angles "
           << e.signature.angle_data[0] << ", " << e.signature.angle_data[1] << ", " << e.signature.angle_data[2]
           << "), d4 " << (rd.pass ? "PASS" : "FAIL");
}

bool equivalent_to(const OptimizationReport& r, const std::string& name) {
  for (const auto& e : r.equivalences)
    if (e.lattice == name) return e.equivalent;
  return false;
}

void criterion_7(Outcome& o) {
  OptimizerConfig cfg;
  cfg.dim = 2;
  cfg.restarts = 10;
  cfg.seed = 42;
  const OptimizationReport r = optimize(cfg);
  o.detail << "best ratio " << r.best_ratio << " (4 sqrt 3 = " << 4 * kSqrt3 << "), hex equivalent "
           << (equivalent_to(r, "hex") ? "yes" : "no");
  o.require(close(r.best_ratio, 4 * kSqrt3, 1e-3), "within 1e-3 of 4 sqrt(3)");
  o.require(equivalent_to(r, "hex"), "equivalent to hex");
}

void criterion_8(Outcome& o) {
  OptimizerConfig cfg;
  cfg.dim = 3;
  cfg.restarts = 10;
  cfg.seed = 42;
  cfg.initial = {"z", "bcc~0.05"};
  const OptimizationReport r = optimize(cfg);
  double lowest = INFINITY;
  for (const auto& rr : r.restarts)
    if (!rr.failed) lowest = std::min(lowest, rr.best_ratio);
  o.detail << "best ratio " << r.best_ratio << " (12 sqrt 2 = " << 12 * kSqrt2 << "), fcc equivalent "
           << (equivalent_to(r, "fcc") ? "yes" : "no") << ", counterexample flag "
           << (r.fcc_conjecture_counterexample ? "set" : "clear");
  o.require(close(r.best_ratio, 12 * kSqrt2, 1e-2), "within 1e-2 of 12 sqrt(2)");
  o.require(lowest >= 12 * kSqrt2 - 1e-3, "no restart below 12 sqrt(2) - 1e-3");
  o.require(r.best_ratio <= objective(catalog(CatalogName::Bcc, 3)) - 0.5, "at least 0.5 below the BCC ratio");
  o.require(!r.fcc_conjecture_counterexample, "FCC_CONJECTURE_COUNTEREXAMPLE not raised");
}

void criterion_9(Outcome& o) {
  doctest::Context ctx;
  ctx.setOption("test-suite", "properties");
  ctx.setOption("minimal", true);
  ctx.setOption("no-intro", true);
  ctx.setOption("no-version", true);
  const int failed = ctx.run();
  o.detail << "property suite " << (failed ? "failed" : "passed");
  o.require(failed == 0, "all property cases");
}

void criterion_10(Outcome& o) {
  const PerturbReport f = perturb_test(catalog(CatalogName::Fcc, 3), 1e-2, 200, 42);
  const PerturbReport z = perturb_test(catalog(CatalogName::Z, 3), 5e-2, 200, 42);
  o.detail << "fcc base " << f.base << " min " << f.min << "; z3 base " << z.base << " min " << z.min;
  o.require(!f.improved, "fcc not improved");
  o.require(z.improved, "z3 improved");
}

}  // namespace

int main() {
  std::cout.precision(12);
  struct Criterion {
    const char* id;
    const char* title;
    double limit_seconds;
    std::function<void(Outcome&)> run;
  };
  const Criterion criteria[] = {
      {"AC1", "FCC Voronoi ratio", 1, criterion_1},
      {"AC2", "truncated octahedron ratio and Kelvin bound", 5, criterion_2},
      {"AC3", "catalog invariants", 10, criterion_3},
      {"AC4", "cell volume equals determinant; permutohedron facets", 60, criterion_4},
      {"AC5", "D4 Voronoi cell is the 24-cell", 10, criterion_5},
      {"AC6", "Plateau verdicts", 30, criterion_6},
      {"AC7", "optimizer in dimension 2", 60, criterion_7},
      {"AC8", "optimizer in dimension 3", 600, criterion_8},
      {"AC9", "property suites", 300, criterion_9},
      {"AC10", "perturbation tests", 120, criterion_10},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    o.detail.precision(12);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_seconds) o.require(false, "time limit " + std::to_string(c.limit_seconds) + " s");
    failures += !o.pass;
    std::printf("[%s] %-4s %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
