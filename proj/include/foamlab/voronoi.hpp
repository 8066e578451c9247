#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "foamlab/lattice.hpp"
#include "foamlab/polytope.hpp"

namespace foamlab {

/// Voronoi cell of the origin: x · v <= |v|^2 / 2 over the relevant vectors.
/// dim <= 4.
Polytope voronoi_cell(const Lattice& lattice, Execution exec = Execution::Parallel,
                      double merge_tol = 1e-7);

struct DomainCheckReport {
  double cell_volume = 0.0;
  double lattice_determinant = 0.0;
  double volume_gap_relative = 0.0;
  bool volume_pass = false;

  double max_overlap_fraction = 0.0;  // max over relevant g of P(x in int(P + g)), x ~ U(P)
  double overlap_threshold = 0.0;     // 2 / sqrt(samples)
  bool overlap_pass = false;

  double uncovered_fraction = 0.0;    // fraction of x ~ U(fundamental box) with no g, x - g in P
  bool covering_pass = false;

  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  bool pass = false;
};

/// Checks that P tiles space under the lattice: volume identity, Monte Carlo
/// overlap with relevant translates, and Monte Carlo covering.
DomainCheckReport fundamental_domain_check(const Polytope& cell, const Lattice& lattice,
                                           std::int64_t samples, std::uint64_t seed,
                                           Execution exec = Execution::Parallel);

/// All lattice points nearest to p, ties at 1e-9 * λ.
std::vector<Vec> cells_at_point(const Lattice& lattice, const Vec& p);

struct TilingFace {
  int face_dim = 0;
  std::vector<int> vertex_ids;                 // vertices of the cell spanning this face
  Vec representative;                          // centroid (facet), midpoint (edge), the vertex itself
  std::vector<Vec> equidistant_points;         // lattice points nearest to the representative
  std::vector<Vec> incident_facet_normals;
  int orbit = 0;                               // faces related by a lattice translation share an orbit
  bool interior_verified = false;              // equidistant set stable under in-face probes
  int near_ties = 0;                           // lattice points within 1e-6 λ of the tie distance but excluded
};

struct TilingComplex {
  Lattice lattice;
  Polytope cell;
  std::vector<TilingFace> faces;  // every face of the cell, ordered by dimension

  std::vector<const TilingFace*> faces_of_dim(int k) const;
  /// First face of every orbit, in order.
  std::vector<const TilingFace*> orbit_representatives() const;
};

TilingComplex tiling_skeleton(const Lattice& lattice, Execution exec = Execution::Parallel);

std::string to_json_string(const TilingComplex& complex);

}  // namespace foamlab
