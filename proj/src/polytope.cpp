#include "foamlab/polytope.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>

#include "foamlab/error.hpp"
#include "foamlab/linprog.hpp"

namespace foamlab {
namespace {

const char* kModule = "polytope-geometry";

std::vector<int> combinations(int m, int k) {
  std::vector<int> flat;
  if (k > m) return flat;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    flat.insert(flat.end(), idx.begin(), idx.end());
    int i = k - 1;
    while (i >= 0 && idx[i] == m - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return flat;
}

std::vector<HalfSpace> merge_duplicates(std::span<const HalfSpace> input) {
  std::vector<HalfSpace> out;
  for (const HalfSpace& raw : input) {
    HalfSpace h = HalfSpace::make(raw.normal, raw.offset);
    bool merged = false;
    for (HalfSpace& kept : out) {
      if ((kept.normal - h.normal).norm() <= 1e-12) {
        kept.offset = std::min(kept.offset, h.offset);
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back(std::move(h));
  }
  return out;
}

// Orthonormal directions spanning aff(points) and the first point.
struct AffineFrame {
  Vec origin;
  Eigen::MatrixXd directions;
};

AffineFrame affine_frame(const std::vector<Vec>& points, double tol) {
  AffineFrame frame{points.front(), Eigen::MatrixXd(points.front().size(), 0)};
  if (points.size() < 2) return frame;
  Eigen::MatrixXd diffs(points.front().size(), static_cast<Eigen::Index>(points.size() - 1));
  double scale = 1.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    diffs.col(static_cast<Eigen::Index>(i - 1)) = points[i] - points[0];
    scale = std::max(scale, diffs.col(static_cast<Eigen::Index>(i - 1)).norm());
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(diffs, Eigen::ComputeThinU);
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > tol * scale) ++rank;
  }
  frame.directions = svd.matrixU().leftCols(rank);
  return frame;
}

std::vector<Vec> gather(const Polytope& p, const std::vector<int>& ids) {
  std::vector<Vec> pts;
  pts.reserve(ids.size());
  for (int i : ids) pts.push_back(p.vertices[static_cast<std::size_t>(i)]);
  return pts;
}

class MeasureEngine {
 public:
  explicit MeasureEngine(const Polytope& p) : p_(p), faces_(face_lattice(p)), tol_(p.merge_tol) {
    std::vector<int> all(p.vertices.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    faces_.push_back({all});
  }

  double measure(int k, std::size_t index) {
    const auto key = std::make_pair(k, index);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const std::vector<int>& face = faces_[static_cast<std::size_t>(k)][index];
    const std::vector<Vec> pts = gather(p_, face);
    if (affine_rank(pts, tol_) != k) {
      throw Error(ErrorCode::DegenerateFacet, kModule,
                  "face of nominal dimension " + std::to_string(k) + " has affine rank " +
                      std::to_string(affine_rank(pts, tol_)));
    }
    double value = 0.0;
    if (k == 0) {
      value = 1.0;
    } else if (k == 1) {
      double len = 0.0;
      for (const Vec& a : pts)
        for (const Vec& b : pts) len = std::max(len, (a - b).norm());
      value = len;
    } else {
      Vec centre = Vec::Zero(p_.dim);
      for (const Vec& v : pts) centre += v;
      centre /= static_cast<double>(pts.size());
      const auto& subfaces = faces_[static_cast<std::size_t>(k - 1)];
      for (std::size_t s = 0; s < subfaces.size(); ++s) {
        if (!std::includes(face.begin(), face.end(), subfaces[s].begin(), subfaces[s].end())) {
          continue;
        }
        const AffineFrame frame = affine_frame(gather(p_, subfaces[s]), tol_);
        const Vec rel = centre - frame.origin;
        const double height = (rel - frame.directions * (frame.directions.transpose() * rel)).norm();
        value += height * measure(k - 1, s);
      }
      value /= static_cast<double>(k);
    }
    memo_[key] = value;
    return value;
  }

  std::size_t facet_count() const { return faces_[static_cast<std::size_t>(p_.dim - 1)].size(); }
  const std::vector<std::vector<int>>& facet_sets() const {
    return faces_[static_cast<std::size_t>(p_.dim - 1)];
  }

 private:
  const Polytope& p_;
  std::vector<std::vector<std::vector<int>>> faces_;
  double tol_;
  std::map<std::pair<int, std::size_t>, double> memo_;
};

void require_bounded(const Polytope& p) {
  if (!p.bounded) throw Error(ErrorCode::Unbounded, kModule, "polytope is unbounded");
}

}  // namespace

HalfSpace HalfSpace::make(const Vec& direction, double offset) {
  const double len = direction.norm();
  if (!(len > 0.0) || !std::isfinite(len) || !std::isfinite(offset)) {
    throw Error(ErrorCode::InvalidArgument, kModule, "half-space needs a finite nonzero normal");
  }
  return HalfSpace{direction / len, offset / len};
}

int affine_rank(const std::vector<Vec>& points, double tol) {
  if (points.empty()) return -1;
  return static_cast<int>(affine_frame(points, tol).directions.cols());
}

Polytope halfspace_intersection(std::span<const HalfSpace> halfspaces, Execution exec, double merge_tol) {
  if (!(merge_tol > 0.0 && merge_tol < 1e-2)) {
    throw Error(ErrorCode::InvalidArgument, kModule, "merge tolerance must lie in (0, 1e-2)");
  }
  if (halfspaces.empty()) {
    throw Error(ErrorCode::Unbounded, kModule, "no half-spaces given");
  }
  const int n = static_cast<int>(halfspaces.front().normal.size());
  for (const HalfSpace& h : halfspaces) {
    if (h.normal.size() != n) {
      throw Error(ErrorCode::InvalidArgument, kModule, "half-spaces of mixed dimension");
    }
  }
  if (n > 4 && halfspaces.size() > static_cast<std::size_t>(kMaxHalfSpacesHighDim)) {
    throw Error(ErrorCode::TooManyHalfSpaces, kModule,
                std::to_string(halfspaces.size()) + " half-spaces in dimension " + std::to_string(n));
  }
  const std::vector<HalfSpace> hs = merge_duplicates(halfspaces);
  const int m = static_cast<int>(hs.size());

  Eigen::MatrixXd a(m, n);
  Vec b(m);
  for (int i = 0; i < m; ++i) {
    a.row(i) = hs[static_cast<std::size_t>(i)].normal.transpose();
    b(i) = hs[static_cast<std::size_t>(i)].offset;
  }

  // Bounded and nonempty iff every coordinate is bounded above and below.
  double scale = 0.0;
  for (int k = 0; k < n; ++k) {
    for (double sign : {1.0, -1.0}) {
      Vec c = Vec::Zero(n);
      c(k) = sign;
      const LpResult lp = maximize(c, a, b);
      if (lp.status == LpStatus::Infeasible) {
        throw Error(ErrorCode::EmptyIntersection, kModule, "half-spaces have empty intersection");
      }
      if (lp.status == LpStatus::Unbounded) {
        throw Error(ErrorCode::Unbounded, kModule,
                    "recession direction along coordinate " + std::to_string(k));
      }
      scale = std::max(scale, std::abs(lp.value));
    }
  }
  const double tol = 1e-9 * std::max(scale, 1e-12);
  const double merge = merge_tol * std::max(scale, 1e-12);

  const std::vector<int> combos = combinations(m, n);
  const long long count = static_cast<long long>(combos.size()) / n;
  std::vector<std::optional<Vec>> candidates(static_cast<std::size_t>(count));

  auto solve_one = [&](long long c) {
    Eigen::MatrixXd sys(n, n);
    Vec rhs(n);
    for (int r = 0; r < n; ++r) {
      const int row = combos[static_cast<std::size_t>(c * n + r)];
      sys.row(r) = a.row(row);
      rhs(r) = b(row);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
    lu.setThreshold(1e-10);
    if (!lu.isInvertible()) return;
    Vec x = lu.solve(rhs);
    if (((a * x - b).array() <= tol).all()) candidates[static_cast<std::size_t>(c)] = std::move(x);
  };

  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static) num_threads(worker_count())
    for (long long c = 0; c < count; ++c) solve_one(c);
  } else {
    for (long long c = 0; c < count; ++c) solve_one(c);
  }

  Polytope p;
  p.dim = n;
  p.merge_tol = merge_tol;
  for (auto& cand : candidates) {
    if (!cand) continue;
    const bool seen = std::any_of(p.vertices.begin(), p.vertices.end(),
                                  [&](const Vec& v) { return (v - *cand).norm() <= merge; });
    if (!seen) p.vertices.push_back(std::move(*cand));
  }
  if (static_cast<int>(p.vertices.size()) < n + 1 || affine_rank(p.vertices, merge_tol) != n) {
    throw Error(ErrorCode::EmptyIntersection, kModule, "intersection is not full-dimensional");
  }

  for (const HalfSpace& h : hs) {
    Facet f{h, {}};
    for (std::size_t i = 0; i < p.vertices.size(); ++i) {
      if (std::abs(h.normal.dot(p.vertices[i]) - h.offset) <= merge) {
        f.vertices.push_back(static_cast<int>(i));
      }
    }
    if (static_cast<int>(f.vertices.size()) >= n && affine_rank(gather(p, f.vertices), merge_tol) == n - 1) {
      p.facets.push_back(std::move(f));
    }
  }
  return p;
}

std::vector<std::vector<std::vector<int>>> face_lattice(const Polytope& p) {
  const int n = p.dim;
  std::vector<std::vector<std::vector<int>>> faces(static_cast<std::size_t>(n));
  for (const Facet& f : p.facets) faces[static_cast<std::size_t>(n - 1)].push_back(f.vertices);
  for (int k = n - 2; k >= 1; --k) {
    std::set<std::vector<int>> found;
    const auto& upper = faces[static_cast<std::size_t>(k + 1)];
    for (std::size_t i = 0; i < upper.size(); ++i) {
      for (std::size_t j = i + 1; j < upper.size(); ++j) {
        std::vector<int> common;
        std::set_intersection(upper[i].begin(), upper[i].end(), upper[j].begin(), upper[j].end(),
                              std::back_inserter(common));
        if (static_cast<int>(common.size()) < k + 1) continue;
        if (affine_rank(gather(p, common), p.merge_tol) == k) found.insert(std::move(common));
      }
    }
    faces[static_cast<std::size_t>(k)].assign(found.begin(), found.end());
  }
  if (n >= 1) {
    for (std::size_t i = 0; i < p.vertices.size(); ++i) faces[0].push_back({static_cast<int>(i)});
  }
  return faces;
}

double volume(const Polytope& p) {
  require_bounded(p);
  MeasureEngine engine(p);
  return engine.measure(p.dim, 0);
}

double surface_area(const Polytope& p) {
  require_bounded(p);
  MeasureEngine engine(p);
  double total = 0.0;
  for (std::size_t i = 0; i < engine.facet_count(); ++i) total += engine.measure(p.dim - 1, i);
  return total;
}

InscribedBall chebyshev_inradius(const Polytope& p) {
  require_bounded(p);
  const int n = p.dim;
  const int m = static_cast<int>(p.facets.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m + 1, n + 1);
  Vec b = Vec::Zero(m + 1);
  for (int i = 0; i < m; ++i) {
    a.block(i, 0, 1, n) = p.facets[static_cast<std::size_t>(i)].plane.normal.transpose();
    a(i, n) = 1.0;
    b(i) = p.facets[static_cast<std::size_t>(i)].plane.offset;
  }
  a(m, n) = -1.0;  // r >= 0
  Vec c = Vec::Zero(n + 1);
  c(n) = 1.0;
  const LpResult lp = maximize(c, a, b);
  if (lp.status != LpStatus::Optimal) {
    throw Error(ErrorCode::LPFailure, kModule, "Chebyshev LP did not reach an optimum");
  }
  return InscribedBall{lp.x(n), lp.x.head(n)};
}

bool contains_ball(const Polytope& p, double radius) {
  return chebyshev_inradius(p).radius >= radius - 1e-9;
}

Polytope transform(const Polytope& p, double scale, const Vec& translation) {
  if (!(scale > 0.0)) throw Error(ErrorCode::InvalidArgument, kModule, "scale must be positive");
  if (translation.size() != p.dim) {
    throw Error(ErrorCode::DimensionMismatch, kModule, "translation dimension differs");
  }
  Polytope out = p;
  for (Vec& v : out.vertices) v = scale * v + translation;
  for (Facet& f : out.facets) f.plane.offset = scale * f.plane.offset + f.plane.normal.dot(translation);
  return out;
}

bool contains(const Polytope& p, const Vec& x, double tol) {
  for (const Facet& f : p.facets) {
    if (f.plane.normal.dot(x) > f.plane.offset + tol) return false;
  }
  return true;
}

Vec vertex_centroid(const Polytope& p, const std::vector<int>& ids) {
  Vec c = Vec::Zero(p.dim);
  for (int i : ids) c += p.vertices[static_cast<std::size_t>(i)];
  return c / static_cast<double>(ids.size());
}

int edge_count(const Polytope& p) {
  if (p.dim < 2) return 0;
  return static_cast<int>(face_lattice(p)[1].size());
}

}  // namespace foamlab
