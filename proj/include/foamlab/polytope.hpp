#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "foamlab/parallel.hpp"

namespace foamlab {

using Vec = Eigen::VectorXd;

/// { x : normal · x <= offset } with |normal| = 1.
struct HalfSpace {
  Vec normal;
  double offset = 0.0;

  /// Normalizes `direction` and rescales `offset` accordingly.
  static HalfSpace make(const Vec& direction, double offset);
};

struct Facet {
  HalfSpace plane;
  std::vector<int> vertices;  // sorted indices into Polytope::vertices
};

/// Bounded convex polytope with both representations and facet incidence.
struct Polytope {
  int dim = 0;
  std::vector<Vec> vertices;
  std::vector<Facet> facets;
  bool bounded = true;
  double merge_tol = 1e-7;  // relative; also the rank tolerance for faces
};

inline constexpr int kMaxHalfSpacesHighDim = 30;

/// Vertex enumeration over all N-subsets of the half-spaces, merged at
/// `merge_tol` (relative to the largest coordinate extent), followed by facet
/// assembly. Features smaller than the tolerance collapse. Requires dim <= 4
/// or at most 30 half-spaces.
Polytope halfspace_intersection(std::span<const HalfSpace> halfspaces,
                                Execution exec = Execution::Parallel, double merge_tol = 1e-7);

double volume(const Polytope& p);
double surface_area(const Polytope& p);

struct InscribedBall {
  double radius = 0.0;
  Vec center;
};

/// Largest inscribed ball by linear programming.
InscribedBall chebyshev_inradius(const Polytope& p);
bool contains_ball(const Polytope& p, double radius);

/// x -> scale * x + translation.
Polytope transform(const Polytope& p, double scale, const Vec& translation);

/// Membership with slack `tol` on every facet inequality.
bool contains(const Polytope& p, const Vec& x, double tol = 1e-9);

/// Vertex-index sets of all k-faces, k = 0..dim-1, indexed by k.
std::vector<std::vector<std::vector<int>>> face_lattice(const Polytope& p);

/// Affine dimension of a point set (-1 for the empty set).
int affine_rank(const std::vector<Vec>& points, double tol = 1e-9);

Vec vertex_centroid(const Polytope& p, const std::vector<int>& ids);

/// Number of edges (1-faces); used for the Euler relation in dim 3.
int edge_count(const Polytope& p);

/// Standard OFF mesh. dim 3 only; facets listed counter-clockwise seen from outside.
std::string to_off(const Polytope& p);
/// {"dim", "vertices", "facets": [{"normal", "offset", "vertices"}]}.
std::string to_json_string(const Polytope& p);
/// Inverse of to_json_string; validates incidence against the half-spaces.
Polytope polytope_from_json_string(const std::string& text);

}  // namespace foamlab
