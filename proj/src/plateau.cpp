#include "foamlab/plateau.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "foamlab/error.hpp"
#include "foamlab/json_util.hpp"

namespace foamlab {
namespace {

const char* kModule = "plateau-checker";

double degrees(double rad) { return rad * 180.0 / std::numbers::pi; }

double angle_between(const Vec& a, const Vec& b) {
  const double c = std::clamp(a.dot(b) / (a.norm() * b.norm()), -1.0, 1.0);
  return degrees(std::acos(c));
}

// Orthonormal basis of span{g_i - g_0}.
Mat difference_span(const std::vector<Vec>& pts, double scale) {
  const int n = static_cast<int>(pts.front().size());
  Mat diffs(n, static_cast<Eigen::Index>(pts.size() - 1));
  for (std::size_t i = 1; i < pts.size(); ++i) diffs.col(static_cast<Eigen::Index>(i - 1)) = pts[i] - pts[0];
  Eigen::JacobiSVD<Mat> svd(diffs, Eigen::ComputeThinU);
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > 1e-9 * scale) ++rank;
  }
  return svd.matrixU().leftCols(rank);
}

std::vector<double> dihedral_angles(const std::vector<Vec>& u) {
  std::vector<double> theta;
  for (const Vec& v : u) theta.push_back(std::atan2(v(1), v(0)));
  std::sort(theta.begin(), theta.end());
  const std::size_t m = theta.size();
  std::vector<double> gaps(m);
  for (std::size_t i = 0; i < m; ++i) {
    double g = (i + 1 < m ? theta[i + 1] : theta[0] + 2.0 * std::numbers::pi) - theta[i];
    gaps[i] = g;
  }
  // The walls bisect consecutive chamber directions, so a chamber spans half
  // of each adjacent gap.
  std::vector<double> angles(m);
  for (std::size_t i = 0; i < m; ++i) {
    angles[i] = degrees(0.5 * (gaps[(i + m - 1) % m] + gaps[i]));
  }
  return angles;
}

// Rays of the cone where exactly `c` chambers meet (c = ambient dimension of u).
std::vector<Vec> cone_rays(const std::vector<Vec>& u, double tol) {
  const int c = static_cast<int>(u.front().size());
  const int m = static_cast<int>(u.size());
  std::vector<Vec> rays;
  std::vector<int> idx(c);
  for (int i = 0; i < c; ++i) idx[i] = i;
  while (true) {
    Mat rows(c - 1, c);
    for (int j = 1; j < c; ++j) rows.row(j - 1) = (u[static_cast<std::size_t>(idx[j])] - u[static_cast<std::size_t>(idx[0])]).transpose();
    Eigen::FullPivLU<Mat> lu(rows);
    lu.setThreshold(1e-9);
    const Mat kernel = lu.kernel();
    if (kernel.cols() == 1) {
      const Vec base = kernel.col(0).normalized();
      for (double sign : {1.0, -1.0}) {
        const Vec d = sign * base;
        const double level = d.dot(u[static_cast<std::size_t>(idx[0])]);
        bool ok = true;
        for (int l = 0; l < m && ok; ++l) {
          if (std::find(idx.begin(), idx.end(), l) != idx.end()) continue;
          if (d.dot(u[static_cast<std::size_t>(l)]) >= level - tol) ok = false;
        }
        if (!ok) continue;
        const bool dup = std::any_of(rays.begin(), rays.end(), [&](const Vec& r) { return (r - d).norm() < 1e-7; });
        if (!dup) rays.push_back(d);
      }
    }
    int i = c - 1;
    while (i >= 0 && idx[i] == m - c + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < c; ++j) idx[j] = idx[j - 1] + 1;
  }
  return rays;
}

double max_deviation(const std::vector<double>& angles, double target) {
  double dev = 0.0;
  for (double a : angles) dev = std::max(dev, std::abs(a - target));
  return dev;
}

FaceOrbitVerdict evaluate(const ConeSignature& sig, double tol_deg) {
  FaceOrbitVerdict v;
  v.face_dim = sig.face_dim;
  v.signature = sig;
  const int m = sig.chamber_count;
  if (m == 2) {
    v.verdict = FaceVerdict::PassPlanar;
    return v;
  }
  if (sig.codim == 2) {
    v.deviation_deg = max_deviation(sig.angle_data, 120.0);
    if (m == 3 && v.deviation_deg <= tol_deg) {
      v.verdict = FaceVerdict::PassTriple120;
    } else {
      v.note = m == 3 ? "triple junction off 120 degrees" : std::to_string(m) + " cells at a codimension-2 face";
    }
    return v;
  }
  if (sig.codim == 3) {
    v.deviation_deg = max_deviation(sig.angle_data, kTetrahedralAngleDeg);
    if (m == 4 && sig.angle_data.size() == 6 && v.deviation_deg <= tol_deg) {
      v.verdict = FaceVerdict::PassTetrahedral;
    } else {
      v.note = m == 4 ? "four-cell cone is not tetrahedral"
                      : std::to_string(m) + " cells at a codimension-3 face";
    }
    return v;
  }
  if (sig.codim == 4 && m == 8) {
    double dev = 0.0;
    for (double a : sig.angle_data) dev = std::max(dev, std::min(std::abs(a - 90.0), std::abs(a - 180.0)));
    v.deviation_deg = dev;
    int antipodal = 0;
    for (double a : sig.angle_data) antipodal += std::abs(a - 180.0) <= tol_deg ? 1 : 0;
    if (dev <= tol_deg && antipodal == 4) {
      v.verdict = FaceVerdict::PassHypercubeCone;
    } else {
      v.note = "eight-cell vertex is not the hypercube cone";
    }
    return v;
  }
  v.note = std::to_string(m) + " cells at a codimension-" + std::to_string(sig.codim) + " face";
  return v;
}

}  // namespace

std::string_view to_string(FaceVerdict v) {
  switch (v) {
    case FaceVerdict::PassPlanar: return "PASS_PLANAR";
    case FaceVerdict::PassTriple120: return "PASS_TRIPLE_120";
    case FaceVerdict::PassTetrahedral: return "PASS_TETRAHEDRAL";
    case FaceVerdict::PassHypercubeCone: return "PASS_HYPERCUBE_CONE";
    case FaceVerdict::Violation: return "VIOLATION";
  }
  return "?";
}

ConeSignature classify_face(const Lattice& lattice, const TilingFace& face) {
  const int n = lattice.dim();
  const auto& pts = face.equidistant_points;
  ConeSignature sig;
  sig.chamber_count = static_cast<int>(pts.size());
  sig.face_dim = face.face_dim;
  sig.codim = n - face.face_dim;
  if (pts.size() < 2) {
    throw Error(ErrorCode::DegenerateFace, kModule, "fewer than two cells meet at the face");
  }
  double scale = 0.0;
  for (const Vec& p : pts) scale = std::max(scale, (p - face.representative).norm());
  const Mat span = difference_span(pts, std::max(scale, 1e-300));
  if (span.cols() != sig.codim) {
    throw Error(ErrorCode::DegenerateFace, kModule,
                "equidistant points span " + std::to_string(span.cols()) + " dimensions at a face of codimension " +
                    std::to_string(sig.codim));
  }
  std::vector<Vec> u;
  for (const Vec& p : pts) u.push_back(span.transpose() * (p - face.representative));

  if (sig.codim == 2) {
    sig.angle_data = dihedral_angles(u);
  } else if (sig.codim == 3) {
    const std::vector<Vec> rays = cone_rays(u, 1e-9 * scale);
    for (std::size_t i = 0; i < rays.size(); ++i)
      for (std::size_t j = i + 1; j < rays.size(); ++j) sig.angle_data.push_back(angle_between(rays[i], rays[j]));
  } else if (sig.codim >= 4) {
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = i + 1; j < u.size(); ++j) sig.angle_data.push_back(angle_between(u[i], u[j]));
  }
  return sig;
}

PlateauReport plateau_check(const Lattice& lattice, double tol_deg, std::string lattice_id) {
  const int n = lattice.dim();
  if (n < 2 || n > 4) {
    throw Error(ErrorCode::UnsupportedDimension, kModule,
                "Plateau check supports dimensions 2-4, got " + std::to_string(n));
  }
  const TilingComplex complex = tiling_skeleton(lattice);
  PlateauReport report;
  report.lattice_id = std::move(lattice_id);
  report.tol_deg = tol_deg;

  std::vector<int> orbit_size;
  for (const TilingFace& f : complex.faces) {
    if (static_cast<std::size_t>(f.orbit) >= orbit_size.size()) orbit_size.resize(static_cast<std::size_t>(f.orbit) + 1, 0);
    ++orbit_size[static_cast<std::size_t>(f.orbit)];
  }

  std::vector<FaceVerdict> by_orbit(orbit_size.size(), FaceVerdict::Violation);
  for (const TilingFace* f : complex.orbit_representatives()) {
    FaceOrbitVerdict v = evaluate(classify_face(lattice, *f), tol_deg);
    v.orbit = f->orbit;
    v.orbit_size = orbit_size[static_cast<std::size_t>(f->orbit)];
    v.representative = f->representative;
    by_orbit[static_cast<std::size_t>(f->orbit)] = v.verdict;
    report.faces.push_back(std::move(v));
  }

  if (n == 4) {
    // Vertex verdicts also require every incident codimension-2 face to pass.
    for (FaceOrbitVerdict& v : report.faces) {
      if (v.face_dim != 0 || !passes(v.verdict)) continue;
      const TilingFace* vertex = nullptr;
      for (const TilingFace* f : complex.orbit_representatives())
        if (f->orbit == v.orbit) vertex = f;
      for (const TilingFace& f : complex.faces) {
        if (f.face_dim != 2) continue;
        if (std::find(f.vertex_ids.begin(), f.vertex_ids.end(), vertex->vertex_ids.front()) == f.vertex_ids.end()) continue;
        if (!passes(by_orbit[static_cast<std::size_t>(f.orbit)])) {
          v.verdict = FaceVerdict::Violation;
          v.note = "incident codimension-2 face violates the 120 degree condition";
          break;
        }
      }
    }
  }

  report.pass = std::all_of(report.faces.begin(), report.faces.end(),
                            [](const FaceOrbitVerdict& v) { return passes(v.verdict); });
  return report;
}

EdgeAngleReport bcc_edge_angles(double tol_deg) {
  const Lattice bcc = catalog(CatalogName::Bcc, 3);
  const TilingComplex complex = tiling_skeleton(bcc);
  const auto edges = complex.faces_of_dim(1);
  EdgeAngleReport rep;
  rep.signature = classify_face(bcc, *edges.front());
  std::sort(rep.signature.angle_data.begin(), rep.signature.angle_data.end());
  for (double a : rep.signature.angle_data) rep.angle_sum_deg += a;
  rep.max_deviation_deg = max_deviation(rep.signature.angle_data, 120.0);
  rep.verdict = rep.signature.chamber_count == 3 && rep.max_deviation_deg <= tol_deg ? FaceVerdict::PassTriple120
                                                                                     : FaceVerdict::Violation;
  return rep;
}

std::string to_json_string(const PlateauReport& report) {
  nlohmann::json j;
  j["lattice"] = report.lattice_id;
  j["tol_deg"] = report.tol_deg;
  j["verdict"] = report.pass ? "PASS" : "FAIL";
  j["faces"] = nlohmann::json::array();
  for (const FaceOrbitVerdict& v : report.faces) {
    j["faces"].push_back({{"orbit", v.orbit},
                          {"face_dim", v.face_dim},
                          {"orbit_size", v.orbit_size},
                          {"chambers", v.signature.chamber_count},
                          {"angles_deg", v.signature.angle_data},
                          {"verdict", std::string(to_string(v.verdict))},
                          {"deviation_deg", v.deviation_deg},
                          {"representative", to_json(v.representative)},
                          {"note", v.note}});
  }
  return j.dump(2);
}

std::string to_table(const PlateauReport& report) {
  std::ostringstream os;
  os << std::setprecision(12);
  os << "lattice " << report.lattice_id << "  tol " << report.tol_deg << " deg  verdict "
     << (report.pass ? "PASS" : "FAIL") << '\n';
  os << std::left << std::setw(7) << "orbit" << std::setw(6) << "dim" << std::setw(6) << "size" << std::setw(10)
     << "chambers" << std::setw(22) << "verdict" << std::setw(16) << "deviation" << "angles\n";
  for (const FaceOrbitVerdict& v : report.faces) {
    os << std::left << std::setw(7) << v.orbit << std::setw(6) << v.face_dim << std::setw(6) << v.orbit_size
       << std::setw(10) << v.signature.chamber_count << std::setw(22) << to_string(v.verdict) << std::setw(16)
       << std::setprecision(6) << v.deviation_deg;
    std::vector<double> shown = v.signature.angle_data;
    std::sort(shown.begin(), shown.end());
    shown.erase(std::unique(shown.begin(), shown.end(), [](double a, double b) { return std::abs(a - b) < 1e-6; }),
                shown.end());
    for (double a : shown) os << std::setprecision(8) << a << ' ';
    if (!v.note.empty()) os << " (" << v.note << ')';
    os << '\n' << std::setprecision(12);
  }
  return os.str();
}

}  // namespace foamlab
