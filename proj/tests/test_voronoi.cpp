#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "foamlab/error.hpp"
#include "foamlab/voronoi.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace foamlab;
using namespace foamlab::testing;

namespace {

bool has_point(const std::vector<Vec>& pts, const Vec& x) {
  return std::any_of(pts.begin(), pts.end(), [&](const Vec& p) { return (p - x).norm() < 1e-9; });
}

}  // namespace

TEST_SUITE("voronoi") {

TEST_CASE("cells of the catalog") {
  const Polytope fcc = voronoi_cell(catalog(CatalogName::Fcc, 3));
  CHECK(fcc.vertices.size() == 14);
  CHECK(fcc.facets.size() == 12);
  const Polytope bcc = voronoi_cell(catalog(CatalogName::Bcc, 3));
  CHECK(bcc.vertices.size() == 24);
  CHECK(bcc.facets.size() == 14);
  const Polytope hex = voronoi_cell(catalog(CatalogName::Hex, 2));
  CHECK(hex.vertices.size() == 6);
  const Polytope d4 = voronoi_cell(catalog(CatalogName::D, 4));
  CHECK(d4.vertices.size() == 24);
  CHECK(d4.facets.size() == 24);
  CHECK(chebyshev_inradius(d4).radius == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-9));
  CHECK_THROWS_AS(voronoi_cell(catalog(CatalogName::Z, 5)), Error);
}

TEST_CASE("permutohedra") {
  for (int n = 2; n <= 4; ++n) {
    const Polytope p = voronoi_cell(catalog(CatalogName::Astar, n));
    CHECK(p.facets.size() == static_cast<std::size_t>(2 * ((1 << n) - 1)));
    CHECK(p.vertices.size() == static_cast<std::size_t>(std::tgamma(n + 2.0) + 0.5));
  }
}

TEST_CASE("covering radius") {
  CHECK(covering_radius(catalog(CatalogName::D, 4)) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(covering_radius(catalog(CatalogName::Fcc, 3)) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(covering_radius(catalog(CatalogName::Bcc, 3)) == doctest::Approx(std::sqrt(5.0) / 2).epsilon(1e-9));
  CHECK(covering_radius(catalog(CatalogName::Hex, 2)) == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-9));
}

TEST_CASE("volume equals determinant on random lattices") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 2 + trial % 3;
    const Lattice l = make_lattice(random_basis(n, rng));
    CHECK(volume(voronoi_cell(l)) == doctest::Approx(l.determinant()).epsilon(1e-9));
  }
}

TEST_CASE("fundamental_domain_check") {
  const Lattice z3 = catalog(CatalogName::Z, 3);
  const Lattice fcc = catalog(CatalogName::Fcc, 3);
  const DomainCheckReport a = fundamental_domain_check(box(3, -0.5, 0.5), z3, 20000, 1);
  CHECK(a.pass);
  const DomainCheckReport b = fundamental_domain_check(voronoi_cell(fcc), fcc, 20000, 1);
  CHECK(b.pass);
  const DomainCheckReport c = fundamental_domain_check(box(3, -0.5, 0.5), fcc, 20000, 1);
  CHECK_FALSE(c.pass);
  CHECK_FALSE(c.covering_pass);
  // The double-size cube overlaps its Z^3 translates.
  const DomainCheckReport d = fundamental_domain_check(box(3, -1, 1), z3, 20000, 1);
  CHECK_FALSE(d.overlap_pass);
  const DomainCheckReport e = fundamental_domain_check(voronoi_cell(fcc), fcc, 20000, 1, Execution::Serial);
  CHECK(e.max_overlap_fraction == b.max_overlap_fraction);
  CHECK(e.uncovered_fraction == b.uncovered_fraction);
}

TEST_CASE("cells_at_point") {
  const Lattice fcc = catalog(CatalogName::Fcc, 3);
  const auto at = cells_at_point(fcc, Vec{{1.0, 0.0, 0.0}});
  CHECK(at.size() == 6);
  CHECK(has_point(at, Vec{{0.0, 0.0, 0.0}}));
  CHECK(has_point(at, Vec{{2.0, 0.0, 0.0}}));
  CHECK(has_point(at, Vec{{1.0, 1.0, 0.0}}));
  CHECK(has_point(at, Vec{{1.0, -1.0, 0.0}}));
  CHECK(has_point(at, Vec{{1.0, 0.0, 1.0}}));
  CHECK(has_point(at, Vec{{1.0, 0.0, -1.0}}));
  CHECK(cells_at_point(fcc, Vec{{0.5, 0.5, 0.5}}).size() == 4);
  // (1, 1/2, 0) is a vertex of the truncated octahedron: 0, 2e_1, (1, 1, ±1).
  const auto bcc = cells_at_point(catalog(CatalogName::Bcc, 3), Vec{{1.0, 0.5, 0.0}});
  CHECK(bcc.size() == 4);
  CHECK(has_point(bcc, Vec{{1.0, 1.0, -1.0}}));
  CHECK(cells_at_point(catalog(CatalogName::Bcc, 3), Vec{{1.0, 0.25, 0.25}}).size() == 3);
  CHECK(cells_at_point(catalog(CatalogName::Z, 2), Vec{{0.5, 0.5}}).size() == 4);
  CHECK(cells_at_point(fcc, Vec{{0.1, 0.05, 0.0}}).size() == 1);
}

TEST_CASE("cells_at_point agrees with a box scan") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 2;
    const Lattice l = make_lattice(random_basis(n, rng));
    const Polytope cell = voronoi_cell(l);
    // Vertices of the cell, shifted by a lattice vector, are generic multi-cell points.
    const Vec p = cell.vertices[static_cast<std::size_t>(trial) % cell.vertices.size()] +
                  l.point(IntVec::Constant(n, trial % 3 - 1));
    const auto fast = cells_at_point(l, p);
    const auto slow = brute_nearest(l, p, 8, 1e-9 * minimal_norm(l));
    CHECK(fast.size() == slow.size());
    for (const Vec& x : slow) CHECK(has_point(fast, x));
  }
}

TEST_CASE("tiling_skeleton") {
  const TilingComplex z2 = tiling_skeleton(catalog(CatalogName::Z, 2));
  for (const TilingFace* f : z2.faces_of_dim(0)) CHECK(f->equidistant_points.size() == 4);
  for (const TilingFace* f : z2.faces_of_dim(1)) CHECK(f->equidistant_points.size() == 2);

  const TilingComplex fcc = tiling_skeleton(catalog(CatalogName::Fcc, 3));
  int six = 0;
  int four = 0;
  for (const TilingFace* f : fcc.faces_of_dim(0)) {
    if (f->equidistant_points.size() == 6) ++six;
    if (f->equidistant_points.size() == 4) ++four;
    CHECK(f->interior_verified);
  }
  CHECK(six == 6);
  CHECK(four == 8);
  CHECK(fcc.faces_of_dim(1).size() == 24);
  CHECK(fcc.faces_of_dim(2).size() == 12);

  const TilingComplex d4 = tiling_skeleton(catalog(CatalogName::D, 4));
  for (const TilingFace* f : d4.faces_of_dim(0)) CHECK(f->equidistant_points.size() == 8);
  for (const TilingFace* f : d4.faces_of_dim(2)) CHECK(f->equidistant_points.size() == 3);

  // Opposite facets of the cell lie in one translation orbit.
  const auto reps = fcc.orbit_representatives();
  int facet_orbits = 0;
  for (const TilingFace* f : reps) facet_orbits += f->face_dim == 2;
  CHECK(facet_orbits == 6);
}

TEST_CASE("skeleton JSON") {
  const auto j = nlohmann::json::parse(to_json_string(tiling_skeleton(catalog(CatalogName::Hex, 2))));
  CHECK(j.at("dim") == 2);
  CHECK(j.at("faces").size() == 12);
}

}
