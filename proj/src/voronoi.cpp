#include "foamlab/voronoi.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

#include "foamlab/error.hpp"
#include "foamlab/json_util.hpp"

namespace foamlab {
namespace {

const char* kModule = "voronoi-tiling";
constexpr int kMaxCellDim = 4;

void require_cell_dim(const Lattice& lattice) {
  if (lattice.dim() > kMaxCellDim) {
    throw Error(ErrorCode::DimensionTooLarge, kModule,
                "Voronoi cells are built for dimension <= 4, got " + std::to_string(lattice.dim()));
  }
}

// Nearest-lattice-point queries against a fixed reduced basis.
class NearestCells {
 public:
  explicit NearestCells(const Lattice& lattice)
      : reduced_(reduce_basis(lattice).lattice),
        inverse_(reduced_.basis().inverse()),
        lambda_(minimal_norm(lattice)) {}

  struct Result {
    std::vector<Vec> points;
    int near_ties = 0;
  };

  Result query(const Vec& p) const {
    const IntVec babai = (inverse_ * p).array().round().cast<int>();
    const double d0 = (p - reduced_.point(babai)).norm();
    const double tie = 1e-9 * lambda_;
    const double watch = 1e-6 * lambda_;
    const auto near = lattice_points_in_ball(reduced_, p, d0 + watch + tie);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& v : near) best = std::min(best, (v.point - p).norm());
    Result r;
    for (const auto& v : near) {
      const double d = (v.point - p).norm();
      if (d <= best + tie) {
        r.points.push_back(v.point);
      } else if (d <= best + watch) {
        ++r.near_ties;
      }
    }
    std::sort(r.points.begin(), r.points.end(), [](const Vec& a, const Vec& b) {
      return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
    });
    return r;
  }

  double lambda() const { return lambda_; }
  const Lattice& reduced() const { return reduced_; }

 private:
  Lattice reduced_;
  Mat inverse_;
  double lambda_;
};

bool same_point_sets(const std::vector<Vec>& a, const std::vector<Vec>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((a[i] - b[i]).norm() > tol) return false;
  }
  return true;
}

Vec uniform_in(const Polytope& p, const Vec& lo, const Vec& hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec x(p.dim);
  while (true) {
    for (int i = 0; i < p.dim; ++i) x(i) = lo(i) + (hi(i) - lo(i)) * u(rng);
    if (contains(p, x, 0.0)) return x;
  }
}

bool strictly_inside(const Polytope& p, const Vec& x, double margin) {
  for (const Facet& f : p.facets) {
    if (f.plane.normal.dot(x) >= f.plane.offset - margin) return false;
  }
  return true;
}

}  // namespace

Polytope voronoi_cell(const Lattice& lattice, Execution exec, double merge_tol) {
  require_cell_dim(lattice);
  const ShortVectorSet relevant = relevant_vectors(lattice);
  std::vector<HalfSpace> hs;
  hs.reserve(relevant.vectors.size());
  for (const auto& v : relevant.vectors) {
    hs.push_back(HalfSpace::make(v.point, v.point.squaredNorm() / 2.0));
  }
  return halfspace_intersection(hs, exec, merge_tol);
}

double covering_radius(const Lattice& lattice) {
  if (lattice.dim() > kMaxCellDim) {
    throw Error(ErrorCode::DimensionTooLarge, "lattice-core",
                "exact covering radius needs dimension <= 4");
  }
  const Polytope cell = voronoi_cell(lattice);
  double r = 0.0;
  for (const Vec& v : cell.vertices) r = std::max(r, v.norm());
  return r;
}

std::vector<Vec> cells_at_point(const Lattice& lattice, const Vec& p) {
  if (p.size() != lattice.dim() || !p.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, kModule, "point must be finite and match the lattice dimension");
  }
  return NearestCells(lattice).query(p).points;
}

DomainCheckReport fundamental_domain_check(const Polytope& cell, const Lattice& lattice,
                                           std::int64_t samples, std::uint64_t seed,
                                           Execution exec) {
  if (cell.dim != lattice.dim()) {
    throw Error(ErrorCode::DimensionMismatch, kModule, "cell and lattice dimensions differ");
  }
  if (samples < 1) throw Error(ErrorCode::InvalidArgument, kModule, "samples must be positive");

  DomainCheckReport rep;
  rep.samples = samples;
  rep.seed = seed;
  rep.cell_volume = volume(cell);
  rep.lattice_determinant = lattice.determinant();
  rep.volume_gap_relative = std::abs(rep.cell_volume - rep.lattice_determinant) / rep.lattice_determinant;
  rep.volume_pass = rep.volume_gap_relative <= 1e-6;
  rep.overlap_threshold = 2.0 / std::sqrt(static_cast<double>(samples));

  const int n = cell.dim;
  Vec lo = cell.vertices.front();
  Vec hi = cell.vertices.front();
  double reach = 0.0;
  for (const Vec& v : cell.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
    reach = std::max(reach, v.norm());
  }
  const double margin = 1e-12 * std::max(1.0, reach);
  const ShortVectorSet relevant = relevant_vectors(lattice);
  const Lattice reduced = reduce_basis(lattice).lattice;

  // Fixed chunking keeps the sample streams independent of thread count.
  const std::int64_t chunks = std::min<std::int64_t>(64, samples);
  std::vector<std::vector<std::int64_t>> overlap_hits(static_cast<std::size_t>(chunks),
                                                      std::vector<std::int64_t>(relevant.vectors.size(), 0));
  std::vector<std::int64_t> uncovered(static_cast<std::size_t>(chunks), 0);

  auto run_chunk = [&](std::int64_t c) {
    std::mt19937_64 rng = make_stream(seed, static_cast<std::uint64_t>(c));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::int64_t begin = samples * c / chunks;
    const std::int64_t end = samples * (c + 1) / chunks;
    auto& hits = overlap_hits[static_cast<std::size_t>(c)];
    for (std::int64_t s = begin; s < end; ++s) {
      const Vec x = uniform_in(cell, lo, hi, rng);
      for (std::size_t g = 0; g < relevant.vectors.size(); ++g) {
        if (strictly_inside(cell, x - relevant.vectors[g].point, margin)) ++hits[g];
      }
      Vec coeffs(n);
      for (int i = 0; i < n; ++i) coeffs(i) = u(rng);
      const Vec y = lattice.basis() * coeffs;
      bool covered = false;
      for (const auto& g : lattice_points_in_ball(reduced, y, reach + 1e-9)) {
        if (contains(cell, y - g.point, 1e-9 * std::max(1.0, reach))) {
          covered = true;
          break;
        }
      }
      if (!covered) ++uncovered[static_cast<std::size_t>(c)];
    }
  };

  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
    for (std::int64_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    for (std::int64_t c = 0; c < chunks; ++c) run_chunk(c);
  }

  const double total = static_cast<double>(samples);
  for (std::size_t g = 0; g < relevant.vectors.size(); ++g) {
    std::int64_t h = 0;
    for (const auto& chunk : overlap_hits) h += chunk[g];
    rep.max_overlap_fraction = std::max(rep.max_overlap_fraction, static_cast<double>(h) / total);
  }
  std::int64_t missing = 0;
  for (std::int64_t m : uncovered) missing += m;
  rep.uncovered_fraction = static_cast<double>(missing) / total;
  rep.overlap_pass = rep.max_overlap_fraction <= rep.overlap_threshold;
  rep.covering_pass = rep.uncovered_fraction <= rep.overlap_threshold;
  rep.pass = rep.volume_pass && rep.overlap_pass && rep.covering_pass;
  return rep;
}

std::vector<const TilingFace*> TilingComplex::faces_of_dim(int k) const {
  std::vector<const TilingFace*> out;
  for (const TilingFace& f : faces) {
    if (f.face_dim == k) out.push_back(&f);
  }
  return out;
}

std::vector<const TilingFace*> TilingComplex::orbit_representatives() const {
  std::vector<const TilingFace*> out;
  std::vector<bool> seen;
  for (const TilingFace& f : faces) {
    if (static_cast<std::size_t>(f.orbit) >= seen.size()) seen.resize(static_cast<std::size_t>(f.orbit) + 1, false);
    if (!seen[static_cast<std::size_t>(f.orbit)]) {
      seen[static_cast<std::size_t>(f.orbit)] = true;
      out.push_back(&f);
    }
  }
  return out;
}

TilingComplex tiling_skeleton(const Lattice& lattice, Execution exec) {
  require_cell_dim(lattice);
  Polytope cell = voronoi_cell(lattice, exec);
  const NearestCells nearest(lattice);
  const double lambda = nearest.lambda();
  const auto lattice_faces = face_lattice(cell);
  const Mat inverse = lattice.basis().inverse();

  std::vector<TilingFace> faces;
  for (int k = cell.dim - 1; k >= 0; --k) {
    for (const auto& ids : lattice_faces[static_cast<std::size_t>(k)]) {
      TilingFace f;
      f.face_dim = k;
      f.vertex_ids = ids;
      f.representative = vertex_centroid(cell, ids);
      for (const Facet& facet : cell.facets) {
        if (std::includes(facet.vertices.begin(), facet.vertices.end(), ids.begin(), ids.end())) {
          f.incident_facet_normals.push_back(facet.plane.normal);
        }
      }
      faces.push_back(std::move(f));
    }
  }

  auto resolve = [&](std::size_t i) {
    TilingFace& f = faces[i];
    const auto q = nearest.query(f.representative);
    f.equidistant_points = q.points;
    f.near_ties = q.near_ties;
    if (f.face_dim == 0) {
      f.interior_verified = true;
      return;
    }
    std::vector<Vec> pts;
    for (int id : f.vertex_ids) pts.push_back(cell.vertices[static_cast<std::size_t>(id)]);
    Mat dirs(cell.dim, static_cast<Eigen::Index>(pts.size() - 1));
    for (std::size_t j = 1; j < pts.size(); ++j) dirs.col(static_cast<Eigen::Index>(j - 1)) = pts[j] - pts[0];
    std::mt19937_64 rng = make_stream(0x7111u, i);
    std::normal_distribution<double> gauss(0.0, 1.0);
    bool stable = true;
    for (int probe = 0; probe < 5 && stable; ++probe) {
      Vec w(dirs.cols());
      for (Eigen::Index j = 0; j < w.size(); ++j) w(j) = gauss(rng);
      Vec step = dirs * w;
      if (step.norm() == 0.0) continue;
      step *= 1e-5 * lambda / step.norm();
      stable = same_point_sets(nearest.query(f.representative + step).points, f.equidistant_points,
                               1e-6 * lambda);
    }
    f.interior_verified = stable;
  };

  const long long count = static_cast<long long>(faces.size());
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
    for (long long i = 0; i < count; ++i) resolve(static_cast<std::size_t>(i));
  } else {
    for (long long i = 0; i < count; ++i) resolve(static_cast<std::size_t>(i));
  }

  int next_orbit = 0;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    faces[i].orbit = -1;
    for (std::size_t j = 0; j < i; ++j) {
      if (faces[j].face_dim != faces[i].face_dim) continue;
      const Vec coords = inverse * (faces[i].representative - faces[j].representative);
      if ((coords - coords.array().round().matrix()).cwiseAbs().maxCoeff() <= 1e-6) {
        faces[i].orbit = faces[j].orbit;
        break;
      }
    }
    if (faces[i].orbit < 0) faces[i].orbit = next_orbit++;
  }

  return TilingComplex{lattice, std::move(cell), std::move(faces)};
}

std::string to_json_string(const TilingComplex& complex) {
  nlohmann::json j;
  j["dim"] = complex.lattice.dim();
  j["faces"] = nlohmann::json::array();
  for (const TilingFace& f : complex.faces) {
    nlohmann::json jf;
    jf["face_dim"] = f.face_dim;
    jf["orbit"] = f.orbit;
    jf["vertices"] = f.vertex_ids;
    jf["representative"] = to_json(f.representative);
    jf["equidistant_points"] = nlohmann::json::array();
    for (const Vec& p : f.equidistant_points) jf["equidistant_points"].push_back(to_json(p));
    jf["incident_facet_normals"] = nlohmann::json::array();
    for (const Vec& n : f.incident_facet_normals) jf["incident_facet_normals"].push_back(to_json(n));
    jf["interior_verified"] = f.interior_verified;
    jf["near_ties"] = f.near_ties;
    j["faces"].push_back(std::move(jf));
  }
  return j.dump(2);
}

}  // namespace foamlab
