#include "foamlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "foamlab/error.hpp"

namespace foamlab {
namespace {

const char* kModule = "lattice-core";

void require_enumerable(const Lattice& lattice) {
  if (lattice.dim() > kMaxEnumerationDim) {
    throw Error(ErrorCode::DimensionTooLarge, kModule,
                "dimension " + std::to_string(lattice.dim()) + " exceeds " +
                    std::to_string(kMaxEnumerationDim));
  }
}

bool lex_less(const IntVec& a, const IntVec& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

void sort_vectors(std::vector<LatticeVector>& v) {
  std::sort(v.begin(), v.end(), [](const LatticeVector& a, const LatticeVector& b) {
    if (std::abs(a.norm - b.norm) > 1e-12 * (1.0 + a.norm)) return a.norm < b.norm;
    return lex_less(a.coords, b.coords);
  });
}

// Fincke-Pohst enumeration of integer k with |B (k - t)| <= radius, where
// t = B^{-1} center. Coordinates are in the basis B.
std::vector<IntVec> enumerate_ball(const Mat& basis, const Vec& center, double radius) {
  const int n = static_cast<int>(basis.cols());
  const Mat gram = basis.transpose() * basis;
  const Eigen::LLT<Mat> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularBasis, kModule, "Gram matrix is not positive definite");
  }
  const Mat r = llt.matrixU();
  const Vec t = basis.fullPivLu().solve(center);
  const double bound = radius * radius * (1.0 + 1e-12) + 1e-18;

  std::vector<IntVec> out;
  IntVec k = IntVec::Zero(n);
  long long nodes = 0;

  std::function<void(int, double)> descend = [&](int i, double used) {
    double shift = 0.0;
    for (int j = i + 1; j < n; ++j) shift += r(i, j) * (k(j) - t(j));
    const double c = t(i) - shift / r(i, i);
    const double rem = std::max(0.0, bound - used);
    const double half = std::sqrt(rem) / r(i, i);
    const long long lo = static_cast<long long>(std::ceil(c - half));
    const long long hi = static_cast<long long>(std::floor(c + half));
    for (long long v = lo; v <= hi; ++v) {
      if (++nodes > kEnumerationBudget) {
        throw Error(ErrorCode::EnumerationBudgetExceeded, kModule,
                    "more than 1e7 enumeration candidates at radius " + std::to_string(radius));
      }
      const double y = r(i, i) * (static_cast<double>(v) - c);
      const double next = used + y * y;
      if (next > bound) continue;
      k(i) = static_cast<int>(v);
      if (i == 0) {
        out.push_back(k);
      } else {
        descend(i - 1, next);
      }
    }
    k(i) = 0;
  };
  descend(n - 1, 0.0);
  return out;
}

// Reduced generators plus the unimodular map back to the caller's basis.
struct Reduction {
  Mat basis;
  IntMat transform;
};

Reduction greedy_reduce(const Mat& basis) {
  const int n = static_cast<int>(basis.cols());
  Mat b = basis;
  IntMat u = IntMat::Identity(n, n);
  bool changed = true;
  for (int sweep = 0; changed && sweep < 10000; ++sweep) {
    changed = false;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const double mu = std::round(b.col(i).dot(b.col(j)) / b.col(j).squaredNorm());
        if (mu == 0.0) continue;
        const Vec candidate = b.col(i) - mu * b.col(j);
        if (candidate.squaredNorm() < b.col(i).squaredNorm() * (1.0 - 1e-12)) {
          b.col(i) = candidate;
          u.col(i) -= static_cast<int>(mu) * u.col(j);
          changed = true;
        }
      }
    }
  }
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int c) {
    return b.col(a).squaredNorm() < b.col(c).squaredNorm() * (1.0 - 1e-12);
  });
  Reduction red{Mat(basis.rows(), n), IntMat(n, n)};
  for (int i = 0; i < n; ++i) {
    red.basis.col(i) = b.col(order[i]);
    red.transform.col(i) = u.col(order[i]);
  }
  return red;
}

LatticeVector make_vector(const Reduction& red, const IntVec& reduced_coords) {
  LatticeVector v;
  v.coords = red.transform * reduced_coords;
  v.point = red.basis * reduced_coords.cast<double>();
  v.norm = v.point.norm();
  return v;
}

Mat hyperplane_frame(int n) {
  // Orthonormal frame of {sum x = 0} in R^{n+1}: Gram-Schmidt on e_i - e_{i+1}.
  Mat diffs = Mat::Zero(n + 1, n);
  for (int i = 0; i < n; ++i) {
    diffs(i, i) = 1.0;
    diffs(i + 1, i) = -1.0;
  }
  Mat q = Mat::Zero(n + 1, n);
  for (int i = 0; i < n; ++i) {
    Vec v = diffs.col(i);
    for (int j = 0; j < i; ++j) v -= q.col(j).dot(v) * q.col(j);
    q.col(i) = v.normalized();
  }
  return q;
}

void require_dim(bool ok, CatalogName name, int dim) {
  if (!ok) {
    throw Error(ErrorCode::DimensionMismatch, kModule,
                std::string(to_string(name)) + " is not defined in dimension " +
                    std::to_string(dim));
  }
}

}  // namespace

Lattice make_lattice(const Mat& basis) {
  if (basis.rows() != basis.cols()) {
    throw Error(ErrorCode::InvalidArgument, kModule, "basis must be square");
  }
  if (basis.cols() < 2) {
    throw Error(ErrorCode::InvalidArgument, kModule, "dimension must be at least 2");
  }
  if (!basis.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, kModule, "basis has non-finite entries");
  }
  const int n = static_cast<int>(basis.cols());
  const double det = std::abs(basis.fullPivLu().determinant());
  const double max_col = basis.colwise().norm().maxCoeff();
  if (!(det >= 1e-10 * std::pow(max_col, n)) || det == 0.0) {
    throw Error(ErrorCode::SingularBasis, kModule, "|det| below 1e-10 * (max column norm)^N");
  }
  Mat gram = basis.transpose() * basis;
  return Lattice(basis, std::move(gram), det);
}

CatalogName parse_catalog_name(std::string_view name) {
  static const std::map<std::string_view, CatalogName> names = {
      {"z", CatalogName::Z},         {"a", CatalogName::A},       {"astar", CatalogName::Astar},
      {"d", CatalogName::D},         {"dplus", CatalogName::Dplus}, {"e8", CatalogName::E8},
      {"hex", CatalogName::Hex},     {"fcc", CatalogName::Fcc},   {"bcc", CatalogName::Bcc}};
  const auto it = names.find(name);
  if (it == names.end()) {
    throw Error(ErrorCode::UnknownCatalogEntry, kModule, "unknown lattice '" + std::string(name) + "'");
  }
  return it->second;
}

std::string_view to_string(CatalogName name) {
  switch (name) {
    case CatalogName::Z: return "z";
    case CatalogName::A: return "a";
    case CatalogName::Astar: return "astar";
    case CatalogName::D: return "d";
    case CatalogName::Dplus: return "dplus";
    case CatalogName::E8: return "e8";
    case CatalogName::Hex: return "hex";
    case CatalogName::Fcc: return "fcc";
    case CatalogName::Bcc: return "bcc";
  }
  return "?";
}

int catalog_fixed_dim(CatalogName name) {
  switch (name) {
    case CatalogName::E8: return 8;
    case CatalogName::Hex: return 2;
    case CatalogName::Fcc:
    case CatalogName::Bcc: return 3;
    default: return -1;
  }
}

Lattice catalog(CatalogName name, int dim) {
  const int fixed = catalog_fixed_dim(name);
  require_dim(fixed < 0 || fixed == dim, name, dim);
  require_dim(dim >= 2, name, dim);
  Mat b = Mat::Zero(dim, dim);
  switch (name) {
    case CatalogName::Z:
      b.setIdentity();
      break;
    case CatalogName::A: {
      const Mat q = hyperplane_frame(dim);
      Mat diffs = Mat::Zero(dim + 1, dim);
      for (int i = 0; i < dim; ++i) {
        diffs(i, i) = 1.0;
        diffs(i + 1, i) = -1.0;
      }
      b = q.transpose() * diffs;
      break;
    }
    case CatalogName::Astar: {
      // Projections of e_1..e_N onto the hyperplane, in frame coordinates.
      const Mat q = hyperplane_frame(dim);
      b = q.topRows(dim).transpose();
      break;
    }
    case CatalogName::D:
    case CatalogName::Fcc:
      b(0, 0) = -1.0;
      b(1, 0) = -1.0;
      b(0, 1) = 1.0;
      b(1, 1) = -1.0;
      for (int k = 2; k < dim; ++k) {
        b(k - 1, k) = 1.0;
        b(k, k) = -1.0;
      }
      break;
    case CatalogName::Dplus:
    case CatalogName::E8:
      require_dim(dim >= 8 && dim % 2 == 0, name, dim);
      b(0, 0) = 2.0;
      for (int k = 1; k < dim - 1; ++k) {
        b(k - 1, k) = -1.0;
        b(k, k) = 1.0;
      }
      b.col(dim - 1).setConstant(0.5);
      break;
    case CatalogName::Hex:
      b << 1.0, -0.5, 0.0, std::sqrt(3.0) / 2.0;
      break;
    case CatalogName::Bcc:
      b << 2.0, 0.0, 1.0, 0.0, 2.0, 1.0, 0.0, 0.0, 1.0;
      break;
  }
  return make_lattice(b);
}

double determinant(const Lattice& lattice) { return lattice.determinant(); }

ReducedBasis reduce_basis(const Lattice& lattice) {
  Reduction red = greedy_reduce(lattice.basis());
  Lattice reduced = make_lattice(red.basis);
  const double product = red.basis.colwise().norm().prod();
  return ReducedBasis{reduced, red.transform, product / lattice.determinant()};
}

std::vector<LatticeVector> lattice_points_in_ball(const Lattice& lattice, const Vec& center,
                                                  double radius) {
  require_enumerable(lattice);
  if (center.size() != lattice.dim()) {
    throw Error(ErrorCode::DimensionMismatch, kModule, "center dimension differs from lattice");
  }
  const Reduction red = greedy_reduce(lattice.basis());
  std::vector<LatticeVector> out;
  for (const IntVec& k : enumerate_ball(red.basis, center, radius)) {
    LatticeVector v = make_vector(red, k);
    if ((v.point - center).norm() <= radius + 1e-9) out.push_back(std::move(v));
  }
  sort_vectors(out);
  return out;
}

ShortVectorSet short_vectors(const Lattice& lattice, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::InvalidArgument, kModule, "radius must be positive and finite");
  }
  require_enumerable(lattice);
  const Reduction red = greedy_reduce(lattice.basis());
  ShortVectorSet set{radius, {}};
  for (const IntVec& k : enumerate_ball(red.basis, Vec::Zero(lattice.dim()), radius)) {
    if (k.isZero()) continue;
    LatticeVector v = make_vector(red, k);
    if (v.norm <= radius + 1e-9) set.vectors.push_back(std::move(v));
  }
  sort_vectors(set.vectors);
  return set;
}

double minimal_norm(const Lattice& lattice) {
  require_enumerable(lattice);
  const Reduction red = greedy_reduce(lattice.basis());
  const double shortest_generator = red.basis.colwise().norm().minCoeff();
  const ShortVectorSet set = short_vectors(lattice, shortest_generator);
  return set.vectors.front().norm;
}

double inradius(const Lattice& lattice) { return minimal_norm(lattice) / 2.0; }

ShortVectorSet relevant_vectors(const Lattice& lattice) {
  require_enumerable(lattice);
  const int n = lattice.dim();
  const Reduction red = greedy_reduce(lattice.basis());

  // Every parity class c + 2G contains some sum of ±(reduced generators in c);
  // the largest such minimum bounds the search radius for all class minima.
  double radius = 0.0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    double best = std::numeric_limits<double>::infinity();
    for (unsigned signs = 0; signs < (1u << n); ++signs) {
      if ((signs & ~mask) != 0u) continue;
      Vec v = Vec::Zero(n);
      for (int i = 0; i < n; ++i) {
        if ((mask >> i) & 1u) v += ((signs >> i) & 1u ? -1.0 : 1.0) * red.basis.col(i);
      }
      best = std::min(best, v.norm());
    }
    radius = std::max(radius, best);
  }

  const double lambda = red.basis.colwise().norm().minCoeff();
  const double tie = 1e-9 * lambda;
  std::vector<std::vector<LatticeVector>> classes(1u << n);
  for (const IntVec& k : enumerate_ball(red.basis, Vec::Zero(n), radius * (1.0 + 1e-9))) {
    if (k.isZero()) continue;
    unsigned mask = 0;
    for (int i = 0; i < n; ++i) mask |= static_cast<unsigned>(k(i) & 1) << i;
    classes[mask].push_back(make_vector(red, k));
  }

  ShortVectorSet set{radius, {}};
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    auto& members = classes[mask];
    if (members.empty()) continue;
    double least = std::numeric_limits<double>::infinity();
    for (const auto& v : members) least = std::min(least, v.norm);
    int count = 0;
    for (const auto& v : members) count += v.norm <= least + tie ? 1 : 0;
    if (count != 2) continue;
    for (auto& v : members) {
      if (v.norm <= least + tie) set.vectors.push_back(v);
    }
  }
  sort_vectors(set.vectors);
  return set;
}

bool lattice_equivalent(const Lattice& a, const Lattice& b, double tol) {
  if (a.dim() != b.dim()) return false;
  const double la = minimal_norm(a);
  const double lb = minimal_norm(b);
  auto spectrum = [tol](const Lattice& l, double lambda) {
    std::vector<double> norms;
    for (const auto& v : short_vectors(l, 2.0 * lambda * (1.0 + tol)).vectors) {
      norms.push_back(v.norm / lambda);
    }
    std::sort(norms.begin(), norms.end());
    return norms;
  };
  const std::vector<double> sa = spectrum(a, la);
  const std::vector<double> sb = spectrum(b, lb);
  const double cutoff = 2.0 - tol;
  std::size_t i = 0;
  for (; i < sa.size() && i < sb.size(); ++i) {
    if (std::min(sa[i], sb[i]) >= cutoff) break;
    if (std::abs(sa[i] - sb[i]) > tol) return false;
  }
  if (i < sa.size() && sa[i] < cutoff && i >= sb.size()) return false;
  if (i < sb.size() && sb[i] < cutoff && i >= sa.size()) return false;

  const int n = a.dim();
  const double da = a.determinant() / std::pow(la, n);
  const double db = b.determinant() / std::pow(lb, n);
  return std::abs(da - db) <= tol * std::max(da, db);
}

Lattice scaled(const Lattice& lattice, double s) {
  if (!(s > 0.0)) throw Error(ErrorCode::InvalidArgument, kModule, "scale must be positive");
  return make_lattice(s * lattice.basis());
}

Lattice mapped(const Lattice& lattice, const Mat& linear) {
  if (linear.rows() != lattice.dim() || linear.cols() != lattice.dim()) {
    throw Error(ErrorCode::DimensionMismatch, kModule, "linear map has wrong shape");
  }
  return make_lattice(linear * lattice.basis());
}

}  // namespace foamlab
