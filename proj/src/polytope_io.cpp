#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "foamlab/error.hpp"
#include "foamlab/polytope.hpp"
#include "json.hpp"

namespace foamlab {
namespace {

const char* kModule = "polytope-geometry";

// Facet vertices in counter-clockwise order as seen from outside (dim 3).
std::vector<int> cyclic_order(const Polytope& p, const Facet& f) {
  const Vec& n = f.plane.normal;
  const Vec c = vertex_centroid(p, f.vertices);
  Eigen::Vector3d n3(n(0), n(1), n(2));
  Eigen::Vector3d u = n3.unitOrthogonal();
  Eigen::Vector3d w = n3.cross(u);
  std::vector<std::pair<double, int>> angles;
  for (int id : f.vertices) {
    const Vec d = p.vertices[static_cast<std::size_t>(id)] - c;
    Eigen::Vector3d d3(d(0), d(1), d(2));
    angles.emplace_back(std::atan2(d3.dot(w), d3.dot(u)), id);
  }
  std::sort(angles.begin(), angles.end());
  std::vector<int> order;
  for (const auto& a : angles) order.push_back(a.second);
  return order;
}

}  // namespace

std::string to_off(const Polytope& p) {
  if (p.dim != 3) {
    throw Error(ErrorCode::UnsupportedFormatForDim, kModule,
                "OFF export needs dimension 3, got " + std::to_string(p.dim));
  }
  std::ostringstream os;
  os << std::setprecision(12);
  os << "OFF\n" << p.vertices.size() << ' ' << p.facets.size() << " 0\n";
  for (const Vec& v : p.vertices) os << v(0) << ' ' << v(1) << ' ' << v(2) << '\n';
  for (const Facet& f : p.facets) {
    const std::vector<int> order = cyclic_order(p, f);
    os << order.size();
    for (int id : order) os << ' ' << id;
    os << '\n';
  }
  return os.str();
}

std::string to_json_string(const Polytope& p) {
  nlohmann::json j;
  j["dim"] = p.dim;
  j["vertices"] = nlohmann::json::array();
  for (const Vec& v : p.vertices) j["vertices"].push_back(std::vector<double>(v.data(), v.data() + v.size()));
  j["facets"] = nlohmann::json::array();
  for (const Facet& f : p.facets) {
    const Vec& n = f.plane.normal;
    j["facets"].push_back({{"normal", std::vector<double>(n.data(), n.data() + n.size())},
                           {"offset", f.plane.offset},
                           {"vertices", f.vertices}});
  }
  return j.dump(2);
}

Polytope polytope_from_json_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, kModule, e.what());
  }
  try {
    Polytope p;
    const auto& verts = j.at("vertices");
    p.dim = j.contains("dim") ? j.at("dim").get<int>()
                              : static_cast<int>(verts.at(0).size());
    for (const auto& row : verts) {
      const auto values = row.get<std::vector<double>>();
      if (static_cast<int>(values.size()) != p.dim) {
        throw Error(ErrorCode::ParseError, kModule, "vertex of wrong dimension");
      }
      p.vertices.push_back(Eigen::Map<const Vec>(values.data(), p.dim));
    }
    for (const auto& jf : j.at("facets")) {
      const auto normal = jf.at("normal").get<std::vector<double>>();
      if (static_cast<int>(normal.size()) != p.dim) {
        throw Error(ErrorCode::ParseError, kModule, "facet normal of wrong dimension");
      }
      Facet f{HalfSpace::make(Eigen::Map<const Vec>(normal.data(), p.dim), jf.at("offset").get<double>()),
              jf.at("vertices").get<std::vector<int>>()};
      std::sort(f.vertices.begin(), f.vertices.end());
      for (int id : f.vertices) {
        if (id < 0 || id >= static_cast<int>(p.vertices.size())) {
          throw Error(ErrorCode::ParseError, kModule, "facet references a missing vertex");
        }
      }
      p.facets.push_back(std::move(f));
    }
    for (const Vec& v : p.vertices) {
      if (!contains(p, v, 1e-9 * (1.0 + v.norm()))) {
        throw Error(ErrorCode::ParseError, kModule, "vertex violates a facet inequality");
      }
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, kModule, e.what());
  }
}

}  // namespace foamlab
