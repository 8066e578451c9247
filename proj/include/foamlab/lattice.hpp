#pragma once

#include <Eigen/Dense>
#include <string>
#include <string_view>
#include <vector>

namespace foamlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using IntVec = Eigen::VectorXi;
using IntMat = Eigen::MatrixXi;

/// Largest dimension accepted by enumeration-based operations.
inline constexpr int kMaxEnumerationDim = 8;
/// Node budget for lattice-point enumeration.
inline constexpr long long kEnumerationBudget = 10'000'000;

/// A full-rank lattice in R^N. The basis columns are the generators; the Gram
/// matrix and |det| are cached at construction. Immutable.
class Lattice {
 public:
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Mat& basis() const { return basis_; }
  const Mat& gram() const { return gram_; }
  double determinant() const { return det_; }

  /// Point of the lattice with integer coordinates `coords` in this basis.
  Vec point(const IntVec& coords) const { return basis_ * coords.cast<double>(); }

 private:
  Lattice(Mat basis, Mat gram, double det)
      : basis_(std::move(basis)), gram_(std::move(gram)), det_(det) {}
  friend Lattice make_lattice(const Mat& basis);

  Mat basis_;
  Mat gram_;
  double det_;
};

/// Validates and wraps a square basis (columns = generators).
/// Throws SingularBasis when |det| < 1e-10 * (max column norm)^N.
Lattice make_lattice(const Mat& basis);

enum class CatalogName { Z, A, Astar, D, Dplus, E8, Hex, Fcc, Bcc };

/// Lowercase names: "z", "a", "astar", "d", "dplus", "e8", "hex", "fcc", "bcc".
CatalogName parse_catalog_name(std::string_view name);
std::string_view to_string(CatalogName name);

/// Default dimension for names that fix one (e8, hex, fcc, bcc), else -1.
int catalog_fixed_dim(CatalogName name);

/// Standard lattices. A_N and A_N* are returned in intrinsic dimension N
/// through the Gram-Schmidt frame of e_i - e_{i+1} in the hyperplane sum x = 0.
Lattice catalog(CatalogName name, int dim);

double determinant(const Lattice& lattice);

struct LatticeVector {
  IntVec coords;  // integer coordinates in the lattice's own basis
  Vec point;
  double norm = 0.0;
};

struct ShortVectorSet {
  double radius = 0.0;
  std::vector<LatticeVector> vectors;  // sorted by norm, then lexicographically
};

/// All nonzero lattice vectors with norm <= radius (+1e-9).
ShortVectorSet short_vectors(const Lattice& lattice, double radius);

/// All lattice points (zero included) within `radius` of `center`.
std::vector<LatticeVector> lattice_points_in_ball(const Lattice& lattice, const Vec& center,
                                                  double radius);

double minimal_norm(const Lattice& lattice);
/// minimal_norm / 2.
double inradius(const Lattice& lattice);

struct ReducedBasis {
  Lattice lattice;          // same lattice, reduced generators
  IntMat transform;         // unimodular U with reduced.basis = original.basis * U
  double product_ratio;     // prod |v_i| / d(G) for the reduced generators
};

/// Greedy pairwise (Lagrange-style) reduction; never lengthens a generator.
ReducedBasis reduce_basis(const Lattice& lattice);

/// Facet-defining (Voronoi-relevant) vectors: v such that ±v are the unique
/// shortest elements of v + 2G.
ShortVectorSet relevant_vectors(const Lattice& lattice);

/// Max vertex norm of the Voronoi cell. dim <= 4.
double covering_radius(const Lattice& lattice);

/// One-sided equivalence certificate up to rotation and scale: compares the
/// normalized norm spectra up to 2λ and the normalized determinant d/λ^N.
bool lattice_equivalent(const Lattice& a, const Lattice& b, double tol = 1e-6);

/// Lattice generated by s * basis.
Lattice scaled(const Lattice& lattice, double s);
/// Lattice generated by M * basis (M invertible, e.g. a rotation).
Lattice mapped(const Lattice& lattice, const Mat& linear);

}  // namespace foamlab
