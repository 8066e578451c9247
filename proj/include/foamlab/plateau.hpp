#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "foamlab/voronoi.hpp"

namespace foamlab {

/// Local picture of the tiling at a face: how many cells meet there and the
/// angles between them.
///   codimension 2: dihedral angle of each cell, in angular order (sums to 360);
///   codimension 3: pairwise angles between the edge rays of the cone;
///   codimension 4: pairwise angles between the chamber directions.
struct ConeSignature {
  int chamber_count = 0;
  int face_dim = 0;
  int codim = 0;
  std::vector<double> angle_data;  // degrees
};

enum class FaceVerdict { PassPlanar, PassTriple120, PassTetrahedral, PassHypercubeCone, Violation };

std::string_view to_string(FaceVerdict v);
inline bool passes(FaceVerdict v) { return v != FaceVerdict::Violation; }

/// arccos(-1/3) in degrees.
inline constexpr double kTetrahedralAngleDeg = 109.47122063449069;

ConeSignature classify_face(const Lattice& lattice, const TilingFace& face);

struct FaceOrbitVerdict {
  int orbit = 0;
  int face_dim = 0;
  int orbit_size = 0;  // faces of the cell in this orbit
  Vec representative;
  ConeSignature signature;
  FaceVerdict verdict = FaceVerdict::Violation;
  double deviation_deg = 0.0;
  std::string note;
};

struct PlateauReport {
  std::string lattice_id;
  double tol_deg = 0.1;
  std::vector<FaceOrbitVerdict> faces;
  bool pass = false;
};

/// Checks every face orbit of the Voronoi tiling against the singular cones
/// allowed for perimeter minimizers: planar interfaces; triple junctions at
/// 120°; tetrahedral cones (R^3 vertices, R^4 edges); in R^4 the cone over
/// the 2-skeleton of a hypercube at vertices. The R^4 vertex test is partial:
/// chamber count, cross-polytope chamber directions and the verdicts of the
/// incident codimension-2 faces.
PlateauReport plateau_check(const Lattice& lattice, double tol_deg = 0.1,
                            std::string lattice_id = {});

struct EdgeAngleReport {
  ConeSignature signature;   // angles sorted ascending
  double angle_sum_deg = 0.0;
  double max_deviation_deg = 0.0;  // from 120°
  FaceVerdict verdict = FaceVerdict::Violation;
};

/// Dihedral angles around an edge of the truncated-octahedron (BCC) tiling.
EdgeAngleReport bcc_edge_angles(double tol_deg = 0.1);

std::string to_json_string(const PlateauReport& report);
std::string to_table(const PlateauReport& report);

}  // namespace foamlab
